#include <array>

#include "padiccf/constructor.hpp"

namespace padiccf {
namespace {

using Mat = std::array<Rational, 4>;  // row-major

Mat mat_mul(const Mat& x, const Mat& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

LaurentInt lq(const Int& num, long e, const OddPrime& p) { return LaurentInt(num, e, p); }

// sqrt of a nonnegative rational that is a perfect square.
std::optional<Rational> rational_sqrt(const Rational& x) {
  if (x < 0 || !is_perfect_square(x.get_num()) || !is_perfect_square(x.get_den())) return std::nullopt;
  Int n, d;
  mpz_sqrt(n.get_mpz_t(), x.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), x.get_den_mpz_t());
  Rational r(n);
  r /= Rational(d);
  return r;
}

bool surd_equal(const Surd& x, const Surd& y) { return x.r == y.r && x.s == y.s; }

// alpha_1 = (mu_1 - M22) / M21 from the period matrix, mu_1 the eigenvalue of
// larger p-adic norm; then a_0 + 1/(a_1 + ...) through the preperiod.
std::optional<Surd> matrix_route(const QuadIrr& value, const QuotientList& pre, const QuotientList& period,
                                 Rational& trace, Rational& det) {
  Mat M{Rational(1), Rational(0), Rational(0), Rational(1)};
  for (const auto& a : period) M = mat_mul(M, {a.value(), Rational(1), Rational(1), Rational(0)});
  trace = M[0] + M[3];
  det = M[0] * M[3] - M[1] * M[2];
  const Rational disc = trace * trace - 4 * det;
  const auto r = rational_sqrt(disc / Rational(value.delta()));
  if (!r || M[2] == 0) return std::nullopt;
  const Surd plus{trace / 2, *r / 2}, minus{trace / 2, -*r / 2};
  const long vp_plus = vp_surd(plus, *value.root()), vp_minus = vp_surd(minus, *value.root());
  if (vp_plus == vp_minus) return std::nullopt;
  const Surd mu1 = vp_plus < vp_minus ? plus : minus;
  Surd x{(mu1.r - M[3]) / M[2], mu1.s / M[2]};
  for (std::size_t i = pre.size(); i-- > 0;) x = surd_add(Surd{pre[i].value(), Rational(0)}, surd_inv(x, value.delta()));
  return x;
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::indeterminate: return "indeterminate";
  }
  return "?";
}

Section6Result family_section6(int variant, const OddPrime& p, long t) {
  const unsigned long P = p.value();
  if (variant == 1) {
    if (t < 2) throw std::domain_error("family_section6: variant 1 needs t >= 2");
  } else if (variant == 2 || variant == 3) {
    if (P < 5 || t < 3) throw std::domain_error("family_section6: variants 2 and 3 need p >= 5, t >= 3");
  } else {
    throw std::domain_error("family_section6: variant must be 1, 2 or 3");
  }

  Section6Result res;
  res.variant = variant;
  res.p = P;
  res.t = t;
  res.b = 0;
  res.c = 2;
  const Int pt = p.pow(static_cast<unsigned long>(t));
  const Int Pi(P);
  const auto tm2 = t - 2;
  QuotientList pre, period;
  if (variant == 1) {
    res.delta = 1 - pt * P * P;
    res.k = 1;
    pre = {lq((Pi * Pi - 1) / 2, 1, p)};
    period = {lq(-2, 1, p), lq(-1, t - 1, p), lq(2, 1, p), lq(-1, 1, p)};
  } else if (variant == 2) {
    res.delta = pt + 1;
    res.k = 0;
    pre = {lq(-(Pi - 1) / 2, 0, p), lq(2, 1, p)};
    period = {lq(-1, tm2, p), lq(Pi - 2, 1, p), lq(-(Pi + 2), 1, p),
              lq(1, tm2, p),  lq(-(Pi - 2), 1, p), lq(Pi + 2, 1, p)};
  } else {
    res.delta = pt + 1;
    res.k = tm2;
    // (p^{t-1} - 1)/(2p^{t-2}); the printed head has +1.
    pre = {lq((pt / Pi - 1) / 2, tm2, p)};
    period = {lq(Pi - 2, 1, p), lq(-(Pi + 2), 1, p), lq(1, tm2, p),
              lq(-(Pi - 2), 1, p), lq(Pi + 2, 1, p), lq(-1, tm2, p)};
  }
  res.claimed = periodic_expansion(p, Flavor::browkin, pre, period, pre.front().e());

  const PadicSquareInfo info = padic_square_exists(res.delta, p);
  if (!info.exists) throw std::domain_error("family_section6: sqrt(Delta) is not in Q_p");
  const unsigned long r = *sqrt_mod_p(info.unit, p);
  for (unsigned long br : {r, P - r}) {
    const QuadIrr alpha = normalize(p, res.delta, res.b, res.c, res.k, br);
    const Expansion ex = expand(alpha, Flavor::browkin, 64);
    if (ex.status != ExpansionStatus::periodic) continue;
    if (ex.preperiod == pre && *ex.period == period) {
      res.value = alpha;
      res.sign = br == r ? 1 : -1;
      res.expansion_matches = true;
      break;
    }
  }

  if (res.value) {
    const auto route = matrix_route(*res.value, pre, period, res.trace, res.det);
    res.matrix_route_matches = route && surd_equal(*route, res.value->surd());
  }
  if (variant == 1) {
    Rational expect_trace(-2 * (Rational(2) / Rational(pt * P * P) - 1));
    res.charpoly_matches = res.trace == expect_trace && res.det == 1;
  } else {
    res.charpoly_matches = res.det == 1;
  }

  if (variant == 3) {
    const Rational literal = Rational(pt / Pi + 1) / Rational(2 * p.pow(static_cast<unsigned long>(tm2)));
    const Rational head = pre.front().value();
    res.literal_quotient = CheckStatus::indeterminate;
    const bool in_Y = 2 * abs(literal) < Rational(Pi);
    res.literal_note = "printed head " + literal.get_str() + (in_Y ? " lies in Y" : " is not in Y") +
                       "; with it the list evaluates to " +
                       "the family value plus " + Rational(literal - head).get_str() + "; the expansion head is " +
                       head.get_str();
  }
  return res;
}

}  // namespace padiccf
