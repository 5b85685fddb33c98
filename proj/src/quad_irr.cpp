#include <algorithm>
#include <stdexcept>

#include "padiccf/cf_engine.hpp"

namespace padiccf {
namespace {

Int lcm_den(const Surd& x) {
  Int l;
  mpz_lcm(l.get_mpz_t(), x.r.get_den_mpz_t(), x.s.get_den_mpz_t());
  return l;
}

Int mod_nonneg(Int x, const Int& m) {
  mpz_mod(x.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return x;
}

constexpr unsigned long kMaxValuationPrecision = 1ul << 22;

}  // namespace

Surd surd_add(const Surd& x, const Surd& y) { return {x.r + y.r, x.s + y.s}; }

Surd surd_sub(const Surd& x, const Surd& y) { return {x.r - y.r, x.s - y.s}; }

Surd surd_mul(const Surd& x, const Surd& y, const Int& delta) {
  Rational d(delta);
  return {x.r * y.r + x.s * y.s * d, x.r * y.s + x.s * y.r};
}

Surd surd_inv(const Surd& x, const Int& delta) {
  const Rational norm = x.r * x.r - x.s * x.s * Rational(delta);
  if (norm == 0) throw std::domain_error("surd_inv: zero norm");
  return {x.r / norm, -x.s / norm};
}

long vp_linear(const Int& x, const Int& y, const SqrtCache& root) {
  const OddPrime& p = root.prime();
  if (y == 0) {
    if (x == 0) throw std::domain_error("vp_linear: zero");
    return vp(x, p);
  }
  unsigned long N = 32;
  for (;;) {
    const Int m = p.pow(N);
    const Int val = mod_nonneg(Int(x + y * root.root_mod(N)), m);
    if (val != 0) return vp(val, p);
    if (N >= kMaxValuationPrecision) throw std::logic_error("vp_linear: precision exhausted");
    N *= 2;
  }
}

long vp_surd(const Surd& x, const SqrtCache& root) {
  if (x.r == 0 && x.s == 0) return kInfiniteValuation;
  const Int L = lcm_den(x);
  const Int X = Rational(x.r * L).get_num();
  const Int Y = Rational(x.s * L).get_num();
  return vp_linear(X, Y, root) - vp(L, root.prime());
}

Int surd_digits(const Surd& x, const SqrtCache& root, long shift, unsigned long N) {
  const OddPrime& p = root.prime();
  long j = 0;
  const Int L = lcm_den(x);
  const Int unit = strip_p(L, p, &j);
  if (shift < j) throw std::invalid_argument("surd_digits: shift too small");
  const Int X = Rational(x.r * L).get_num();
  const Int Y = Rational(x.s * L).get_num();
  const Int m = p.pow(N);
  Int v = (X + Y * root.root_mod(N)) * mod_inverse(mod_nonneg(unit, m), m) *
          p.pow(static_cast<unsigned long>(shift - j));
  return mod_nonneg(std::move(v), m);
}

QuadIrr::QuadIrr(std::shared_ptr<const SqrtCache> root, Int b, Int c, long k)
    : root_(std::move(root)), b_(std::move(b)), c_(std::move(c)), k_(k) {
  if (!root_) throw std::invalid_argument("QuadIrr: missing root");
  if (c_ == 0) throw std::invalid_argument("QuadIrr: c = 0");
  if (mpz_divisible_ui_p(c_.get_mpz_t(), p().value()))
    throw std::invalid_argument("QuadIrr: p divides c");
  const Int gap = delta() - b_ * b_;
  if (!mpz_divisible_p(gap.get_mpz_t(), c_.get_mpz_t()))
    throw std::invalid_argument("QuadIrr: c does not divide Delta - b^2");
}

Surd QuadIrr::surd() const {
  Rational den(c_);
  if (k_ >= 0)
    den *= Rational(p().pow(static_cast<unsigned long>(k_)));
  else
    den /= Rational(p().pow(static_cast<unsigned long>(-k_)));
  return {Rational(b_) / den, Rational(1) / den};
}

long QuadIrr::valuation() const { return vp_linear(b_, 1, *root_) - k_; }

Int QuadIrr::digits(long shift, unsigned long N) const {
  if (shift < k_) throw std::invalid_argument("QuadIrr::digits: shift below k");
  const Int m = p().pow(N);
  Int v = (b_ + root_->root_mod(N)) * mod_inverse(mod_nonneg(c_, m), m) *
          p().pow(static_cast<unsigned long>(shift - k_));
  return mod_nonneg(std::move(v), m);
}

bool operator==(const QuadIrr& x, const QuadIrr& y) {
  return x.p() == y.p() && x.delta() == y.delta() && x.branch() == y.branch() && x.b_ == y.b_ &&
         x.c_ == y.c_ && x.k_ == y.k_;
}

QuadIrr normalize(const OddPrime& p, const Int& delta_in, const Int& b_in, const Int& c_in, long k,
                  unsigned long branch) {
  if (c_in == 0) throw std::invalid_argument("normalize: c = 0");
  if (is_perfect_square(delta_in))
    throw std::invalid_argument("normalize: Delta = " + delta_in.get_str() +
                                " is a perfect square; expand it as a rational");
  const PadicSquareInfo info = padic_square_exists(delta_in, p);
  if (!info.exists) throw std::domain_error("sqrt(" + delta_in.get_str() + ") is not in Q_p");
  if (mpz_fdiv_ui(Int(Int(branch) * branch - info.unit).get_mpz_t(), p.value()) != 0)
    throw std::invalid_argument("normalize: branch " + std::to_string(branch) +
                                " is not a square root of the unit part mod p");

  Int delta = delta_in;
  Int b = b_in;
  long moved = 0;
  Int c = strip_p(c_in, p, &moved);
  k += moved;

  // Pull common p^j out of b and sqrt(Delta).
  const long vb = b == 0 ? info.s : vp(b, p);
  const long j = std::min(info.s, vb);
  if (j > 0) {
    const Int pj = p.pow(static_cast<unsigned long>(j));
    b /= pj;
    delta /= pj * pj;
    k -= j;
  }

  unsigned long br = branch % p.value();
  const Int gap = delta - b * b;
  if (!mpz_divisible_p(gap.get_mpz_t(), c.get_mpz_t())) {
    const Int ac = abs(c);
    b *= ac;
    delta *= ac * ac;
    c *= ac;
    br = static_cast<unsigned long>(mpz_fdiv_ui(Int(ac * br).get_mpz_t(), p.value()));
  }
  return QuadIrr(std::make_shared<const SqrtCache>(p, delta, br), b, c, k);
}

}  // namespace padiccf
