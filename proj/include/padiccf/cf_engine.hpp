// Browkin and Ruban p-adic continued fractions over exact quadratic
// irrational states, convergent tables, evaluation and period detection.
#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "padiccf/padic_core.hpp"

namespace padiccf {

enum class Flavor { browkin, ruban };

std::string to_string(Flavor f);
Flavor flavor_from_string(const std::string& s);

/// A partial quotient a_n; tilde() is a~_n and e() is k_n.
using PartialQuotient = LaurentInt;
using QuotientList = std::vector<PartialQuotient>;

/// r + s*delta in Q(delta), delta^2 = Delta.
struct Surd {
  Rational r;
  Rational s;
};

Surd surd_add(const Surd& x, const Surd& y);
Surd surd_sub(const Surd& x, const Surd& y);
Surd surd_mul(const Surd& x, const Surd& y, const Int& delta);
/// Throws std::domain_error for zero.
Surd surd_inv(const Surd& x, const Int& delta);

/// v_p(X + Y*delta) for integers, exact. Throws if both are zero.
long vp_linear(const Int& x, const Int& y, const SqrtCache& root);
/// v_p(r + s*delta).
long vp_surd(const Surd& x, const SqrtCache& root);
/// p^shift * x mod p^N; requires shift to clear the p-part of the denominators.
Int surd_digits(const Surd& x, const SqrtCache& root, long shift, unsigned long N);

/// alpha = (b + delta) / (p^k c) with delta the branch-selected root of Delta.
/// Invariants: c != 0, p does not divide c, c divides Delta - b^2.
class QuadIrr {
 public:
  QuadIrr(std::shared_ptr<const SqrtCache> root, Int b, Int c, long k);

  const OddPrime& p() const { return root_->prime(); }
  const Int& delta() const { return root_->delta(); }
  unsigned long branch() const { return root_->branch(); }
  const std::shared_ptr<const SqrtCache>& root() const { return root_; }
  const Int& b() const { return b_; }
  const Int& c() const { return c_; }
  long k() const { return k_; }

  Surd surd() const;
  /// Exact v_p(alpha).
  long valuation() const;
  /// p^shift * alpha mod p^N; shift >= k.
  Int digits(long shift, unsigned long N) const;
  /// The same number expressed over the same root with (b, c, k) replaced.
  QuadIrr with_state(Int b, Int c, long k) const { return QuadIrr(root_, std::move(b), std::move(c), k); }

  friend bool operator==(const QuadIrr& x, const QuadIrr& y);

 private:
  std::shared_ptr<const SqrtCache> root_;
  Int b_;
  Int c_;
  long k_;
};

/// Builds a valid QuadIrr for (b + sqrt(Delta)) / (p^k c). Moves p-factors of
/// c into k, absorbs p^{2s} | Delta into k when p^s | b, and rescales by |c|
/// when c does not divide Delta - b^2. `branch` is the residue mod p of the
/// square root of the prime-to-p part of Delta.
/// Throws std::invalid_argument for square Delta or c = 0, std::domain_error
/// when sqrt(Delta) is not in Q_p.
QuadIrr normalize(const OddPrime& p, const Int& delta, const Int& b, const Int& c, long k,
                  unsigned long branch);

PartialQuotient s_browkin(const QuadIrr& alpha);
PartialQuotient s_ruban(const QuadIrr& alpha);
PartialQuotient s_function(const QuadIrr& alpha, Flavor flavor);
PartialQuotient s_rational(const Rational& q, const OddPrime& p, Flavor flavor);

struct StepResult {
  PartialQuotient quotient;
  QuadIrr next;
};

/// One step of the algorithm: a = s(alpha), alpha' = 1/(alpha - a).
StepResult step(const QuadIrr& alpha, Flavor flavor);

enum class ExpansionStatus { finite, periodic, open };
std::string to_string(ExpansionStatus s);

struct Expansion {
  unsigned long p = 3;
  Flavor flavor = Flavor::browkin;
  ExpansionStatus status = ExpansionStatus::open;
  /// For finite and open expansions this holds every emitted quotient.
  QuotientList preperiod;
  std::optional<QuotientList> period;
  /// k_0 = -v_p(alpha); k_i = -v_p(a_i) for i >= 1, over the emitted quotients.
  std::vector<long> k;
  /// K_n = k_1 + ... + k_n.
  std::vector<long> K;

  std::size_t emitted() const;
  /// a_i, unrolling the period. Throws std::out_of_range past a finite/open end.
  const PartialQuotient& quotient(std::size_t i) const;
  QuotientList prefix(std::size_t n) const;
  /// "[a0, a1, (t0, t1)*]" for periodic, "[a0, a1, ...]" for open.
  std::string text() const;
};

/// Assembles a periodic Expansion with its k/K bookkeeping; k0 = -v_p(alpha).
Expansion periodic_expansion(const OddPrime& p, Flavor flavor, QuotientList preperiod, QuotientList period,
                             long k0);

/// Same for a finite or open list (period must be empty unless status is periodic).
Expansion listed_expansion(const OddPrime& p, Flavor flavor, ExpansionStatus status, QuotientList quotients,
                           std::optional<QuotientList> period, long k0);

inline constexpr std::size_t kDefaultMaxSteps = 10'000;

/// Iterates step() until a state (b, c, k) repeats or max_steps quotients are emitted.
Expansion expand(const QuadIrr& alpha, Flavor flavor, std::size_t max_steps = kDefaultMaxSteps);

/// Browkin expansions of rationals always terminate; hitting max_steps throws
/// std::logic_error. Ruban expansions may end periodic.
Expansion expand_rational(const Rational& q, const OddPrime& p, Flavor flavor,
                          std::size_t max_steps = kDefaultMaxSteps);

/// A_n, B_n and the scaled numerators A~_n = p^{K'_n} A_n, B~_n = p^{K_n} B_n,
/// for n = -1 .. size()-1.
class ConvergentTable {
 public:
  explicit ConvergentTable(QuotientList quotients);

  long size() const { return static_cast<long>(quotients_.size()); }
  const QuotientList& quotients() const { return quotients_; }
  unsigned long prime() const { return p_; }

  const LaurentInt& A(long n) const { return A_.at(idx(n)); }
  const LaurentInt& B(long n) const { return B_.at(idx(n)); }
  const Int& Atilde(long n) const { return At_.at(idx(n)); }
  const Int& Btilde(long n) const { return Bt_.at(idx(n)); }
  /// K'_n = e_0 + ... + e_n and K_n = e_1 + ... + e_n (both 0 at n = -1).
  long Kprime(long n) const { return Kp_.at(idx(n)); }
  long K(long n) const { return K_.at(idx(n)); }
  Rational convergent(long n) const;

 private:
  static std::size_t idx(long n) { return static_cast<std::size_t>(n + 1); }

  QuotientList quotients_;
  unsigned long p_ = 3;
  std::vector<LaurentInt> A_, B_;
  std::vector<Int> At_, Bt_;
  std::vector<long> Kp_, K_;
};

ConvergentTable convergents(std::span<const PartialQuotient> cf);

/// Back-substitution value of a finite list. Throws std::domain_error on a
/// zero denominator and std::invalid_argument on an empty list.
Rational eval_finite(std::span<const PartialQuotient> cf);

struct PeriodicLimit {
  /// Primitive u X^2 + v X + w with u > 0, satisfied by the limit.
  Int u, v, w;
  QuadIrr value;
};

/// The quadratic irrational [pre, (period)*], with its root branch chosen by
/// re-expansion. Throws std::domain_error if no branch reproduces the input
/// within |pre| + 2|period| steps or the limit is not a p-adic quadratic irrational.
PeriodicLimit periodic_limit(std::span<const PartialQuotient> preperiod,
                             std::span<const PartialQuotient> period, const OddPrime& p,
                             Flavor flavor = Flavor::browkin);

/// First `count` quotients of alpha under `flavor`.
QuotientList leading_quotients(const QuadIrr& alpha, Flavor flavor, std::size_t count);

struct AuditReport {
  bool clean = true;
  long checked = 0;
  std::optional<long> first_violation;
  std::string detail;
};

/// Checks v_p(A_n) = -K'_n, v_p(B_n) = -K_n and v_p(Q_n - alpha) = 2K_n + k_{n+1} >= 2n+1
/// for every n with k_{n+1} known.
AuditReport valuation_audit(const QuadIrr& alpha, const Expansion& expansion, const ConvergentTable& table);

}  // namespace padiccf
