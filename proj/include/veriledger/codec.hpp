#pragma once

// Canonical encodings of the small value types shared by transactions and
// state. See docs/encoding.md.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "veriledger/encoding.hpp"
#include "veriledger/types.hpp"

namespace veriledger {

void encode(ByteWriter& w, const Embedding& e);
void encode(ByteWriter& w, const DetectorSpec& d);
void encode(ByteWriter& w, const std::map<std::string, std::string>& m);
void encode(ByteWriter& w, const std::vector<MatchCandidate>& matches);
void encode_media_set(ByteWriter& w, const std::set<MediaType>& types);

}  // namespace veriledger
