#pragma once

// Textual forms of multiword values.
//
// The exact form lists the FP64 words high-to-low as hexadecimal floats
// separated by single spaces, e.g. "0x1p+0 0x1p-60". Parsing it back is
// bit-exact. The decimal form goes through the exact oracle and is meant
// for people, not for round-tripping.

#include <string>
#include <string_view>

#include "mw/multiword.hpp"

namespace mw {

std::string to_hex(double x);
std::string to_hex(const DoubleWord& a);
std::string to_hex(const TripleWord& a);

// Throw std::invalid_argument on malformed text or a wrong word count.
double parse_hex_double(std::string_view text);
DoubleWord parse_double_word(std::string_view text);
TripleWord parse_triple_word(std::string_view text);

std::string to_decimal(const DoubleWord& a, int digits = 34);
std::string to_decimal(const TripleWord& a, int digits = 50);

}  // namespace mw
