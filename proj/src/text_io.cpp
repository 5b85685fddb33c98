#include "padiccf/text_io.hpp"

#include <algorithm>
#include <cctype>
#include <vector>

namespace padiccf {
namespace {

std::string strip_ws(const std::string& s) {
  std::string out;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) out.push_back(ch);
  return out;
}

Int parse_int(const std::string& s, const std::string& whole) {
  std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (i == s.size() || !std::all_of(s.begin() + static_cast<long>(i), s.end(),
                                    [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ParseError("not an integer: '" + s + "' in '" + whole + "'");
  return Int(s[0] == '+' ? s.substr(1) : s);
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  int depth = 0;
  for (char ch : s) {
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if (ch == sep && depth == 0) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const std::string s = strip_ws(text);
  const auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(parse_int(s, text));
  const Int num = parse_int(s.substr(0, slash), text);
  const Int den = parse_int(s.substr(slash + 1), text);
  if (den == 0) throw ParseError("zero denominator in '" + text + "'");
  Rational r(num);
  r /= Rational(den);
  return r;
}

PartialQuotient parse_quotient(const std::string& text, const OddPrime& p) {
  const std::string s = strip_ws(text);
  const auto slash = s.find('/');
  if (slash == std::string::npos) return LaurentInt::integer(parse_int(s, text), p);
  const Int num = parse_int(s.substr(0, slash), text);
  const Int den = parse_int(s.substr(slash + 1), text);
  long e = 0;
  if (den <= 0 || strip_p(den, p, &e) != 1)
    throw ParseError("denominator of '" + text + "' is not a power of " + std::to_string(p.value()));
  Rational r(num);
  r /= Rational(den);
  return LaurentInt::from_rational(r, p);
}

QuotientList parse_quotient_list(const std::string& text, const OddPrime& p) {
  std::string s = strip_ws(text);
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  QuotientList out;
  if (s.empty()) return out;
  for (const auto& part : split_top(s, ',')) {
    if (part.empty()) throw ParseError("empty entry in '" + text + "'");
    out.push_back(parse_quotient(part, p));
  }
  return out;
}

std::string format_quotient_list(const QuotientList& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i].str();
  return out;
}

ParsedExpansion parse_expansion(const std::string& text, const OddPrime& p) {
  const std::string s = strip_ws(text);
  if (s.size() < 2 || s.front() != '[' || s.back() != ']') throw ParseError("expansion must be bracketed: '" + text + "'");
  ParsedExpansion out;
  const auto parts = split_top(s.substr(1, s.size() - 2), ',');
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::string& part = parts[i];
    const bool last = i + 1 == parts.size();
    if (part == "...") {
      if (!last) throw ParseError("'...' must end the expansion: '" + text + "'");
      out.open = true;
    } else if (!part.empty() && part.front() == '(') {
      if (!last || part.size() < 3 || part.substr(part.size() - 2) != ")*")
        throw ParseError("period group must be last and end with ')*': '" + text + "'");
      out.period = parse_quotient_list(part.substr(1, part.size() - 3), p);
      if (out.period->empty()) throw ParseError("empty period in '" + text + "'");
    } else if (!part.empty()) {
      out.preperiod.push_back(parse_quotient(part, p));
    } else if (parts.size() > 1) {
      throw ParseError("empty entry in '" + text + "'");
    }
  }
  return out;
}

QuadSpec parse_quad_spec(const std::string& text) {
  const auto parts = split_top(strip_ws(text), ',');
  if (parts.size() != 5) throw ParseError("quad spec needs Delta,b,c,k,branch: '" + text + "'");
  QuadSpec q;
  q.delta = parse_int(parts[0], text);
  q.b = parse_int(parts[1], text);
  q.c = parse_int(parts[2], text);
  const Int k = parse_int(parts[3], text), br = parse_int(parts[4], text);
  if (!k.fits_slong_p()) throw ParseError("k out of range in '" + text + "'");
  if (br < 0 || !br.fits_ulong_p()) throw ParseError("branch must be a residue in '" + text + "'");
  q.k = k.get_si();
  q.branch = br.get_ui();
  return q;
}

std::pair<unsigned long, unsigned long> parse_range(const std::string& text) {
  const std::string s = strip_ws(text);
  auto one = [&](const std::string& x) {
    const Int v = parse_int(x, text);
    if (v < 0 || !v.fits_ulong_p()) throw ParseError("range bound out of range in '" + text + "'");
    return v.get_ui();
  };
  const auto dots = s.find("..");
  if (dots == std::string::npos) {
    const auto v = one(s);
    return {v, v};
  }
  const auto lo = one(s.substr(0, dots)), hi = one(s.substr(dots + 2));
  if (lo > hi) throw ParseError("empty range '" + text + "'");
  return {lo, hi};
}

}  // namespace padiccf
