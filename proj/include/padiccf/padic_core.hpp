// Exact integer and p-adic primitives: valuations, centered residues,
// modular square roots, Hensel lifting, multiplicative orders and
// discrete logarithms. Everything here is exact; no floating point.
#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

namespace padiccf {

using Int = mpz_class;
using Rational = mpq_class;

/// Sentinel returned by vp() for zero.
inline constexpr long kInfiniteValuation = std::numeric_limits<long>::max();

/// An odd prime p >= 3, checked at construction.
class OddPrime {
 public:
  explicit OddPrime(unsigned long p);
  /// Throws std::invalid_argument if p is out of range, even or composite.
  static OddPrime from_int(const Int& p);

  unsigned long value() const { return p_; }
  operator unsigned long() const { return p_; }

  /// p^e for e >= 0.
  Int pow(unsigned long e) const;

  friend bool operator==(const OddPrime&, const OddPrime&) = default;

 private:
  unsigned long p_;
};

/// An element of Z[1/p] stored as tilde / p^e with e >= 0. Canonical:
/// zero is (0, 0) and p does not divide tilde whenever e > 0.
class LaurentInt {
 public:
  LaurentInt() = default;
  LaurentInt(Int tilde, long e, const OddPrime& p);

  /// Throws std::invalid_argument unless the denominator is a power of p.
  static LaurentInt from_rational(const Rational& x, const OddPrime& p);
  static LaurentInt integer(const Int& n, const OddPrime& p) { return LaurentInt(n, 0, p); }

  const Int& tilde() const { return tilde_; }
  long e() const { return e_; }
  unsigned long prime() const { return p_; }
  bool is_zero() const { return tilde_ == 0; }
  int sign() const { return sgn(tilde_); }

  Rational value() const;
  /// Fully evaluated "n/d" text, e.g. "-5208/3125"; integers print bare.
  std::string str() const;

  friend bool operator==(const LaurentInt& a, const LaurentInt& b) {
    return a.e_ == b.e_ && a.tilde_ == b.tilde_;
  }

 private:
  Int tilde_ = 0;
  long e_ = 0;
  unsigned long p_ = 3;
};

/// p-adic valuation; kInfiniteValuation for zero.
long vp(const Int& x, const OddPrime& p);
long vp(const Rational& x, const OddPrime& p);

/// x with the p-part removed, and the removed exponent.
Int strip_p(const Int& x, const OddPrime& p, long* removed = nullptr);

/// The representative r of x mod p^n with -p^n/2 < r < p^n/2.
Int centered_residue(const Int& x, unsigned long n, const OddPrime& p);

/// Least root r in [1, p-1] of r^2 = a (mod p), or nullopt for a non-residue.
/// Tonelli-Shanks with the smallest quadratic non-residue.
std::optional<unsigned long> sqrt_mod_p(const Int& a, const OddPrime& p);

/// Legendre symbol (a/p) in {-1, 0, 1}.
int legendre(const Int& a, const OddPrime& p);

/// A square root of Delta in Z_p known to precision N.
struct HenselRoot {
  OddPrime p;
  Int delta;            ///< Delta, nonsquare, p does not divide it
  unsigned long branch; ///< the residue of the root mod p
  Int digits;           ///< root mod p^N, in [0, p^N)
  unsigned long precision;

  /// Seeds a precision-1 root; throws std::invalid_argument if branch is not
  /// a root of Delta mod p or p divides Delta.
  static HenselRoot seed(const OddPrime& p, const Int& delta, unsigned long branch);
};

/// Newton lift to precision N (no-op if N <= root.precision).
HenselRoot hensel_lift(const HenselRoot& root, unsigned long N);

/// Shared, lazily grown p-adic square root of Delta = p^{2s} * unit. The
/// branch names the residue mod p of sqrt(unit). Readers share the lock;
/// growth takes it exclusively and at least doubles the precision.
class SqrtCache {
 public:
  SqrtCache(const OddPrime& p, const Int& delta, unsigned long branch);

  const OddPrime& prime() const { return p_; }
  const Int& delta() const { return delta_; }
  const Int& unit_part() const { return unit_; }
  long half_valuation() const { return s_; }
  unsigned long branch() const { return branch_; }

  /// sqrt(Delta) mod p^N, reduced into [0, p^N).
  Int root_mod(unsigned long N) const;
  unsigned long cached_precision() const;

 private:
  OddPrime p_;
  Int delta_;
  Int unit_;
  long s_ = 0;
  unsigned long branch_;
  mutable std::shared_mutex mu_;
  mutable HenselRoot root_;
};

/// b in [1, m-1] with a*b = 1 (mod m); throws std::domain_error if gcd(a,m) != 1.
Int mod_inverse(const Int& a, const Int& m);

/// Least s >= 1 with a^s = 1 (mod m); throws std::domain_error if not coprime.
Int mult_order(const Int& a, const Int& m);

/// Euler phi, via factorization.
Int euler_phi(const Int& m);

struct DlogBudget {
  /// Largest baby-step table BSGS may allocate.
  std::uint64_t max_table = std::uint64_t{1} << 24;
  /// Moduli below this are handled by enumeration.
  std::uint64_t brute_force_below = 1'000'000;
};

enum class DlogStatus { found, not_in_subgroup, budget_exceeded };

struct DlogResult {
  DlogStatus status;
  std::optional<Int> value;
  std::optional<Int> subgroup_order;
};

/// Least w >= 0 with base^w = target (mod m), by baby-step/giant-step over the
/// subgroup generated by base.
DlogResult discrete_log(const Int& base, const Int& target, const Int& m,
                        const DlogBudget& budget = {});

struct PadicSquareInfo {
  bool exists = false;
  Int unit;   ///< m0
  long s = 0; ///< m = p^{2s} m0
};

/// Whether sqrt(m) lies in Q_p, with the decomposition m = p^{2s} m0.
PadicSquareInfo padic_square_exists(const Int& m, const OddPrime& p);

bool is_perfect_square(const Int& n);

}  // namespace padiccf
