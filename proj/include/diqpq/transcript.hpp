#pragma once

#include <iosfwd>
#include <string>

#include "diqpq/protocol.hpp"

namespace diqpq {

inline constexpr int kTranscriptVersion = 1;

// Line-oriented plain-text transcript. Doubles are written with 17
// significant digits so a write/parse cycle reproduces the run bit-exactly.
std::string serialize_transcript(const Transcript& transcript);
void write_transcript(std::ostream& out, const Transcript& transcript);

Transcript parse_transcript(std::istream& in);
Transcript parse_transcript_string(const std::string& text);

}  // namespace diqpq
