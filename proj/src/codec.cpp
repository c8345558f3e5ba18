#include "veriledger/codec.hpp"

namespace veriledger {

void encode(ByteWriter& w, const Embedding& e) {
  w.u8(static_cast<std::uint8_t>(e.media_type));
  w.count(e.values.size());
  for (double v : e.values) w.f64(v);
}

void encode(ByteWriter& w, const DetectorSpec& d) {
  w.str(d.kind);
  w.count(d.params.size());
  for (const auto& [key, value] : d.params) {
    w.str(key);
    w.f64(value);
  }
}

void encode(ByteWriter& w, const std::map<std::string, std::string>& m) {
  w.count(m.size());
  for (const auto& [key, value] : m) {
    w.str(key);
    w.str(value);
  }
}

void encode(ByteWriter& w, const std::vector<MatchCandidate>& matches) {
  w.count(matches.size());
  for (const auto& m : matches) {
    w.str(m.content_id);
    w.f64(m.similarity);
  }
}

void encode_media_set(ByteWriter& w, const std::set<MediaType>& types) {
  w.count(types.size());
  for (auto t : types) w.u8(static_cast<std::uint8_t>(t));
}

}  // namespace veriledger
