#include "veriledger/store.hpp"

#include <unistd.h>

#include <fstream>
#include <sstream>

#include "veriledger/json_codec.hpp"

namespace veriledger {

using nlohmann::json;

ChainWriter::ChainWriter(const std::filesystem::path& path) : path_(path), file_(std::fopen(path.c_str(), "wb")) {
  if (!file_) throw Error(ErrorCode::SerializationError, "cannot open " + path.string() + " for writing");
}

std::string encode_record(const ChainRecord& record, const NetworkState* genesis_state) {
  json receipts = json::array();
  for (const auto& r : record.receipts) receipts.push_back(to_json(r));
  json j = {{"v", kChainFormatVersion},
            {"height", record.block.height},
            {"block", to_json(record.block)},
            {"receipts", receipts},
            {"genesis", genesis_state ? genesis_to_json(*genesis_state) : json(nullptr)}};
  return j.dump();
}

void ChainWriter::write_line(const std::string& line) {
  std::FILE* f = file_.get();
  if (std::fwrite(line.data(), 1, line.size(), f) != line.size() || std::fputc('\n', f) == EOF ||
      std::fflush(f) != 0 || ::fsync(::fileno(f)) != 0) {
    throw Error(ErrorCode::SerializationError, "write to " + path_.string() + " failed");
  }
}

void ChainWriter::append_genesis(const Block& genesis, const NetworkState& genesis_state) {
  if (last_height_ || genesis.height != 0) {
    throw Error(ErrorCode::HeightGap, "genesis must be the first record");
  }
  write_line(encode_record({genesis, {}}, &genesis_state));
  last_height_ = 0;
}

void ChainWriter::append_block(const Block& block, const std::vector<Receipt>& receipts) {
  const std::uint64_t expected = last_height_ ? *last_height_ + 1 : 0;
  if (block.height != expected || block.height == 0) {
    throw Error(ErrorCode::HeightGap,
                "appending height " + std::to_string(block.height) + ", expected " + std::to_string(expected));
  }
  write_line(encode_record({block, receipts}, nullptr));
  last_height_ = block.height;
}

ChainError::ChainError(ErrorCode code, std::uint64_t height, std::size_t line, const std::string& detail)
    : Error(code, "height " + std::to_string(height) + " (line " + std::to_string(line) + ")" +
                      (detail.empty() ? "" : ": " + detail)),
      height_(height),
      line_(line) {}

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::SerializationError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct ParsedRecord {
  ChainRecord record;
  std::optional<NetworkState> genesis_state;
};

ParsedRecord parse_record(std::string_view line, std::size_t line_no) {
  const std::uint64_t height = line_no - 1;
  try {
    const json j = json::parse(line);
    // one byte sequence per record: whitespace or key-order variants are rejected
    if (j.dump() != line) throw Error(ErrorCode::SerializationError, "record is not in canonical form");
    if (!j.is_object() || j.size() != 5 || !j.contains("v") || !j.contains("height") || !j.contains("block") ||
        !j.contains("receipts") || !j.contains("genesis")) {
      throw Error(ErrorCode::SerializationError, "record: unexpected key set");
    }
    if (j["v"] != kChainFormatVersion) throw Error(ErrorCode::SerializationError, "unsupported record version");
    if (!j["height"].is_number_unsigned() || j["height"].get<std::uint64_t>() != height) {
      throw Error(ErrorCode::SerializationError, "record height out of sequence");
    }
    ParsedRecord out;
    out.record.block = block_from_json(j["block"]);
    if (out.record.block.height != height) throw Error(ErrorCode::SerializationError, "block height out of sequence");
    if (!j["receipts"].is_array()) throw Error(ErrorCode::SerializationError, "receipts: expected array");
    for (const auto& r : j["receipts"]) out.record.receipts.push_back(receipt_from_json(r));
    if (height == 0) {
      if (j["genesis"].is_null()) throw Error(ErrorCode::SerializationError, "record 0 lacks genesis state");
      out.genesis_state = genesis_from_json(j["genesis"]);
    } else if (!j["genesis"].is_null()) {
      throw Error(ErrorCode::SerializationError, "genesis state outside record 0");
    }
    return out;
  } catch (const json::exception& e) {
    throw ChainError(ErrorCode::CorruptRecord, height, line_no, e.what());
  } catch (const Error& e) {
    throw ChainError(ErrorCode::CorruptRecord, height, line_no, e.what());
  }
}

// Splits newline-terminated records; `fn(line, line_no)` for each.
template <typename Fn>
void for_each_line(std::string_view contents, std::size_t first_line_no, Fn&& fn) {
  std::size_t line_no = first_line_no;
  std::size_t pos = 0;
  while (pos < contents.size()) {
    const std::size_t end = contents.find('\n', pos);
    if (end == std::string_view::npos) {
      throw ChainError(ErrorCode::CorruptRecord, line_no - 1, line_no, "unterminated record");
    }
    fn(contents.substr(pos, end - pos), line_no);
    pos = end + 1;
    ++line_no;
  }
}

NetworkState check_genesis(const ChainRecord& g, NetworkState state) {
  auto genesis_fail = [](ErrorCode code, const std::string& why) { throw ChainError(code, 0, 1, why); };
  if (!g.block.parent_hash.is_zero() || !g.block.transactions.empty() || !g.receipts.empty() ||
      !g.block.proposer.empty() || g.block.timestamp != 0) {
    genesis_fail(ErrorCode::CorruptRecord, "genesis block must be empty with a zero parent");
  }
  state.height = 0;
  if (state.state_root() != g.block.state_root) genesis_fail(ErrorCode::StateRootMismatch, "genesis state root");
  if (block_hash(g.block) != g.block.block_hash) genesis_fail(ErrorCode::BlockHashMismatch, "genesis block hash");
  state.tip_hash = g.block.block_hash;
  return state;
}

NetworkState check_block(const NetworkState& state, const ChainRecord& rec, std::size_t line_no) {
  BlockOutcome out;
  try {
    out = apply_block(state, rec.block);
  } catch (const Error& e) {
    throw ChainError(e.code(), rec.block.height, line_no, e.what());
  }
  if (out.receipts != rec.receipts) {
    throw ChainError(ErrorCode::ReceiptMismatch, rec.block.height, line_no, "stored receipts differ from replay");
  }
  return std::move(out.state);
}

}  // namespace

ChainFile parse_chain(std::string_view contents) {
  ChainFile file;
  for_each_line(contents, 1, [&](std::string_view line, std::size_t line_no) {
    ParsedRecord parsed = parse_record(line, line_no);
    if (parsed.genesis_state) file.genesis_state = std::move(parsed.genesis_state);
    file.records.push_back(std::move(parsed.record));
  });
  return file;
}

void ChainVerifier::feed(std::string_view line) {
  const std::size_t line_no = lines_ + 1;
  ParsedRecord parsed = parse_record(line, line_no);
  if (parsed.genesis_state) {
    state_ = check_genesis(parsed.record, std::move(*parsed.genesis_state));
  } else {
    state_ = check_block(*state_, parsed.record, line_no);
  }
  lines_ = line_no;
}

void ChainVerifier::feed_contents(std::string_view contents) {
  for_each_line(contents, lines_ + 1, [&](std::string_view line, std::size_t) { feed(line); });
}

const NetworkState& ChainVerifier::state() const {
  if (!state_) throw Error(ErrorCode::CorruptRecord, "chain file is empty; no genesis state");
  return *state_;
}

ChainFile read_chain(const std::filesystem::path& path) { return parse_chain(slurp(path)); }

NetworkState replay_chain(const ChainFile& file, const NetworkState& genesis_state) {
  if (file.records.empty()) return genesis_state;
  NetworkState state = check_genesis(file.records.front(), genesis_state);
  for (std::size_t i = 1; i < file.records.size(); ++i) state = check_block(state, file.records[i], i + 1);
  return state;
}

NetworkState replay_chain(const std::filesystem::path& path, const NetworkState& genesis_state) {
  return replay_chain(read_chain(path), genesis_state);
}

NetworkState replay_chain(const ChainFile& file) {
  if (!file.genesis_state) throw Error(ErrorCode::CorruptRecord, "chain file is empty; no genesis state");
  return replay_chain(file, *file.genesis_state);
}

NetworkState replay_chain(const std::filesystem::path& path) { return replay_chain(read_chain(path)); }

namespace {

template <typename Load>
VerifyResult verify_impl(Load&& load) {
  VerifyResult r;
  try {
    ChainVerifier verifier;
    load(verifier);
    const NetworkState& tip = verifier.state();
    r.ok = true;
    r.height = tip.height;
    r.tip_hash = tip.tip_hash;
  } catch (const ChainError& e) {
    r.failing_height = e.height();
    r.failing_line = e.line();
    r.error = e.what();
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

}  // namespace

VerifyResult verify_chain(const std::filesystem::path& path) {
  return verify_impl([&](ChainVerifier& v) { v.feed_contents(slurp(path)); });
}

VerifyResult verify_chain_contents(std::string_view contents) {
  return verify_impl([&](ChainVerifier& v) { v.feed_contents(contents); });
}

}  // namespace veriledger
