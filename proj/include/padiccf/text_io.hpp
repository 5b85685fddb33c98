// Text grammar for quotients, quotient lists, expansions and CLI specs.
// A quotient is a signed integer, optionally over a power of p written in
// full ("-5208/3125"); lists are comma separated; a period is a
// parenthesized group followed by '*'. Whitespace is ignored.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "padiccf/cf_engine.hpp"

namespace padiccf {

class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

PartialQuotient parse_quotient(const std::string& text, const OddPrime& p);

/// "a, b, c" with optional surrounding brackets; empty input gives an empty list.
QuotientList parse_quotient_list(const std::string& text, const OddPrime& p);

std::string format_quotient_list(const QuotientList& xs);

struct ParsedExpansion {
  QuotientList preperiod;
  std::optional<QuotientList> period;
  bool open = false;  ///< ended with "..."
};

/// Inverse of Expansion::text(): "[a0, (t0, t1)*]", "[a0, a1]", "[a0, a1, ...]".
ParsedExpansion parse_expansion(const std::string& text, const OddPrime& p);

struct QuadSpec {
  Int delta, b, c;
  long k = 0;
  unsigned long branch = 0;
};

/// "Delta,b,c,k,branch" for (b + sqrt(Delta)) / (p^k c).
QuadSpec parse_quad_spec(const std::string& text);

/// "3" or "0..2" (inclusive).
std::pair<unsigned long, unsigned long> parse_range(const std::string& text);

Rational parse_rational(const std::string& text);

}  // namespace padiccf
