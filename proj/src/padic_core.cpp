#include "padiccf/padic_core.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "padiccf/factor.hpp"

namespace padiccf {
namespace {

using u64 = unsigned long;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

u64 residue_ui(const Int& a, u64 p) { return mpz_fdiv_ui(a.get_mpz_t(), p); }

Int mod_nonneg(const Int& x, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int powm(const Int& b, const Int& e, const Int& m) {
  Int r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

std::uint64_t low_word(const Int& x) { return mpz_getlimbn(x.get_mpz_t(), 0); }

}  // namespace

// ---------------------------------------------------------------- OddPrime

OddPrime::OddPrime(unsigned long p) : p_(p) {
  if (p < 3 || p % 2 == 0 || mpz_probab_prime_p(Int(p).get_mpz_t(), 40) == 0)
    throw std::invalid_argument("not an odd prime: " + std::to_string(p));
}

OddPrime OddPrime::from_int(const Int& p) {
  if (!p.fits_ulong_p()) throw std::invalid_argument("prime out of range: " + p.get_str());
  return OddPrime(p.get_ui());
}

Int OddPrime::pow(unsigned long e) const {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), p_, e);
  return r;
}

// -------------------------------------------------------------- LaurentInt

LaurentInt::LaurentInt(Int tilde, long e, const OddPrime& p) : tilde_(std::move(tilde)), e_(e), p_(p) {
  if (tilde_ == 0) {
    e_ = 0;
    return;
  }
  if (e_ < 0) {
    tilde_ *= p.pow(static_cast<unsigned long>(-e_));
    e_ = 0;
  }
  while (e_ > 0 && mpz_divisible_ui_p(tilde_.get_mpz_t(), p_)) {
    mpz_divexact_ui(tilde_.get_mpz_t(), tilde_.get_mpz_t(), p_);
    --e_;
  }
}

LaurentInt LaurentInt::from_rational(const Rational& x, const OddPrime& p) {
  long e = 0;
  Int den = strip_p(x.get_den(), p, &e);
  if (den != 1) throw std::invalid_argument("denominator is not a power of p: " + x.get_str());
  return LaurentInt(x.get_num(), e, p);
}

Rational LaurentInt::value() const {
  Rational r(tilde_, OddPrime(p_).pow(static_cast<unsigned long>(e_)));
  r.canonicalize();
  return r;
}

std::string LaurentInt::str() const {
  if (e_ == 0) return tilde_.get_str();
  return tilde_.get_str() + "/" + OddPrime(p_).pow(static_cast<unsigned long>(e_)).get_str();
}

// -------------------------------------------------------------- valuations

long vp(const Int& x, const OddPrime& p) {
  if (x == 0) return kInfiniteValuation;
  Int rest;
  return static_cast<long>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), Int(p.value()).get_mpz_t()));
}

long vp(const Rational& x, const OddPrime& p) {
  if (x == 0) return kInfiniteValuation;
  return vp(x.get_num(), p) - vp(x.get_den(), p);
}

Int strip_p(const Int& x, const OddPrime& p, long* removed) {
  if (x == 0) {
    if (removed) *removed = 0;
    return 0;
  }
  Int rest;
  auto n = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), Int(p.value()).get_mpz_t());
  if (removed) *removed = static_cast<long>(n);
  return rest;
}

Int centered_residue(const Int& x, unsigned long n, const OddPrime& p) {
  if (n == 0) throw std::invalid_argument("centered_residue: n must be >= 1");
  const Int mod = p.pow(n);
  Int r = mod_nonneg(x, mod);
  if (2 * r > mod) r -= mod;
  return r;
}

// ------------------------------------------------------ square roots mod p

int legendre(const Int& a, const OddPrime& p) {
  Int r = mod_nonneg(a, Int(p.value()));
  return mpz_legendre(r.get_mpz_t(), Int(p.value()).get_mpz_t());
}

std::optional<unsigned long> sqrt_mod_p(const Int& a_in, const OddPrime& prime) {
  const u64 p = prime.value();
  const u64 a = residue_ui(a_in, p);
  if (a == 0) return std::nullopt;
  if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;

  u64 q = p - 1, s = 0;
  while (q % 2 == 0) {
    q /= 2;
    ++s;
  }
  u64 z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;

  u64 m = s;
  u64 c = powmod(z, q, p);
  u64 t = powmod(a, q, p);
  u64 r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0, t2 = t;
    while (t2 != 1) {
      t2 = mulmod(t2, t2, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return std::min(r, p - r);
}

// ------------------------------------------------------------ Hensel lifts

HenselRoot HenselRoot::seed(const OddPrime& p, const Int& delta, unsigned long branch) {
  if (mpz_divisible_ui_p(delta.get_mpz_t(), p.value()))
    throw std::invalid_argument("hensel seed: p divides Delta");
  const u64 b = branch % p.value();
  if (b == 0 || mulmod(b, b, p.value()) != residue_ui(delta, p.value()))
    throw std::invalid_argument("branch " + std::to_string(branch) + " is not a square root of " +
                                delta.get_str() + " mod " + std::to_string(p.value()));
  return HenselRoot{p, delta, b, Int(b), 1};
}

HenselRoot hensel_lift(const HenselRoot& root, unsigned long N) {
  if (N <= root.precision) return root;
  HenselRoot out = root;
  while (out.precision < N) {
    const unsigned long next = std::min(2 * out.precision, N);
    const Int mod = root.p.pow(next);
    Int x = out.digits;
    Int f = x * x - root.delta;
    Int inv = mod_inverse(Int(2 * x), mod);
    x = mod_nonneg(Int(x - f * inv), mod);
    out.digits = x;
    out.precision = next;
  }
  return out;
}

SqrtCache::SqrtCache(const OddPrime& p, const Int& delta, unsigned long branch)
    : p_(p), delta_(delta), branch_(branch % p.value()), root_{p, 1, 1, 1, 1} {
  if (delta == 0) throw std::invalid_argument("SqrtCache: Delta = 0");
  long v = 0;
  unit_ = strip_p(delta, p, &v);
  if (v % 2 != 0) throw std::domain_error("sqrt(" + delta.get_str() + ") is not in Q_p (odd valuation)");
  s_ = v / 2;
  root_ = HenselRoot::seed(p, unit_, branch_);
}

unsigned long SqrtCache::cached_precision() const {
  std::shared_lock lock(mu_);
  return root_.precision;
}

Int SqrtCache::root_mod(unsigned long N) const {
  const auto s = static_cast<unsigned long>(s_);
  if (N <= s) return 0;
  const unsigned long need = N - s;
  Int unit_root;
  bool hit = false;
  {
    std::shared_lock lock(mu_);
    if (root_.precision >= need) {
      unit_root = root_.digits;
      hit = true;
    }
  }
  if (!hit) {
    std::unique_lock lock(mu_);
    if (root_.precision < need) root_ = hensel_lift(root_, std::max(need, 2 * root_.precision));
    unit_root = root_.digits;
  }
  const Int mod = p_.pow(N);
  if (s > 0) unit_root *= p_.pow(s);
  return mod_nonneg(unit_root, mod);
}

// ------------------------------------------------ orders and discrete logs

Int mod_inverse(const Int& a, const Int& m) {
  Int r;
  if (m < 2 || mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw std::domain_error("mod_inverse: " + a.get_str() + " is not invertible mod " + m.get_str());
  return r;
}

Int euler_phi(const Int& m) {
  Int phi = 1;
  for (const auto& [q, e] : factorize(m)) {
    Int qe;
    mpz_pow_ui(qe.get_mpz_t(), q.get_mpz_t(), e - 1);
    phi *= qe * (q - 1);
  }
  return phi;
}

Int mult_order(const Int& a_in, const Int& m_in) {
  const Int m = abs(m_in);
  if (m == 0) throw std::domain_error("mult_order: modulus 0");
  if (m == 1) return 1;
  const Int a = mod_nonneg(a_in, m);
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  if (g != 1) throw std::domain_error("mult_order: " + a_in.get_str() + " not coprime to " + m.get_str());

  // Factor phi(m) through the factorization of m.
  std::vector<std::pair<Int, unsigned>> phi_factors;
  auto add = [&](const Int& q, unsigned e) {
    for (auto& [r, f] : phi_factors)
      if (r == q) {
        f += e;
        return;
      }
    phi_factors.emplace_back(q, e);
  };
  Int phi = 1;
  for (const auto& [q, e] : factorize(m)) {
    if (e > 1) add(q, e - 1);
    if (q > 2)
      for (const auto& [r, f] : factorize(Int(q - 1))) add(r, f);
    Int qe;
    mpz_pow_ui(qe.get_mpz_t(), q.get_mpz_t(), e - 1);
    phi *= qe * (q - 1);
  }
  Int order = phi;
  for (const auto& [q, e] : phi_factors) {
    for (unsigned i = 0; i < e; ++i) {
      Int cand = order / q;
      if (powm(a, cand, m) == 1)
        order = cand;
      else
        break;
    }
  }
  return order;
}

DlogResult discrete_log(const Int& base_in, const Int& target_in, const Int& m_in, const DlogBudget& budget) {
  const Int m = abs(m_in);
  if (m == 0) throw std::domain_error("discrete_log: modulus 0");
  if (m == 1) return {DlogStatus::found, Int(0), Int(1)};
  const Int base = mod_nonneg(base_in, m);
  const Int target = mod_nonneg(target_in, m);
  Int g1, g2;
  mpz_gcd(g1.get_mpz_t(), base.get_mpz_t(), m.get_mpz_t());
  mpz_gcd(g2.get_mpz_t(), target.get_mpz_t(), m.get_mpz_t());
  if (g1 != 1) throw std::domain_error("discrete_log: base not coprime to the modulus");
  // every power of a unit is a unit
  if (g2 != 1) return {DlogStatus::not_in_subgroup, std::nullopt, std::nullopt};
  if (target == 1) return {DlogStatus::found, Int(0), std::nullopt};

  if (m < Int(static_cast<unsigned long>(budget.brute_force_below))) {
    const u64 mm = m.get_ui(), b = base.get_ui(), t = target.get_ui();
    u64 x = 1;
    for (u64 w = 0;; ++w) {
      if (x == t) return {DlogStatus::found, Int(w), std::nullopt};
      x = mulmod(x, b, mm);
      if (x == 1) return {DlogStatus::not_in_subgroup, std::nullopt, Int(w + 1)};
    }
  }

  const Int order = mult_order(base, m);
  Int r;
  mpz_sqrt(r.get_mpz_t(), order.get_mpz_t());
  if (r * r < order) ++r;
  if (r > Int(static_cast<unsigned long>(budget.max_table)))
    return {DlogStatus::budget_exceeded, std::nullopt, order};

  const std::size_t steps = r.get_ui();
  std::vector<Int> baby;
  baby.reserve(steps);
  std::unordered_multimap<std::uint64_t, std::size_t> index;
  index.reserve(steps);
  Int x = 1;
  for (std::size_t j = 0; j < steps; ++j) {
    index.emplace(low_word(x), j);
    baby.push_back(x);
    x = mod_nonneg(Int(x * base), m);
  }
  const Int giant = mod_inverse(powm(base, r, m), m);
  Int gamma = target;
  for (std::size_t i = 0; i <= steps; ++i) {
    auto [lo, hi] = index.equal_range(low_word(gamma));
    std::optional<std::size_t> best;
    for (auto it = lo; it != hi; ++it)
      if (baby[it->second] == gamma && (!best || it->second < *best)) best = it->second;
    if (best) {
      Int w = Int(static_cast<unsigned long>(i)) * r + Int(static_cast<unsigned long>(*best));
      return {DlogStatus::found, Int(w % order), order};
    }
    gamma = mod_nonneg(Int(gamma * giant), m);
  }
  return {DlogStatus::not_in_subgroup, std::nullopt, order};
}

// --------------------------------------------------------------- squares

bool is_perfect_square(const Int& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }

PadicSquareInfo padic_square_exists(const Int& m, const OddPrime& p) {
  if (m == 0) throw std::invalid_argument("padic_square_exists: m = 0");
  long v = 0;
  Int unit = strip_p(m, p, &v);
  PadicSquareInfo info;
  info.unit = unit;
  info.s = v / 2;
  info.exists = (v % 2 == 0) && legendre(unit, p) == 1;
  return info;
}

}  // namespace padiccf
