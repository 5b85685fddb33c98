// Nice finite continued fractions and their completion to periodic
// expansions of 1/(p^{k0} sqrt(m)) with even period; the beta_n^k family
// of length 2^n; three closed-form families of period 4 and 6.
#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "padiccf/analysis.hpp"
#include "padiccf/cf_engine.hpp"

namespace padiccf {

/// Raised when a computation would exceed a configured size cap.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NiceStatus { nice, not_nice, indeterminate };
std::string to_string(NiceStatus s);

struct NiceCertificate {
  unsigned long p = 3;
  QuotientList cf;
  NiceStatus status = NiceStatus::not_nice;
  /// 'a', 'b' or 'c' for the first violated condition (or the undecided one).
  std::optional<char> failed;
  std::string detail;

  bool cond_a = false;
  bool cond_b = false;
  bool cond_c = false;
  bool shortcut = false;  ///< condition (b) deduced from positivity
  Rational ratio;         ///< A_{t-1}/A_{t-2}, witness for (b); 0 when A_{t-2} = 0

  Int Atilde_last;  ///< A~_{t-1}
  Int Btilde_last;  ///< B~_{t-1}
  Int q;            ///< witness for (c)
  Int omega0;       ///< least omega0 >= 0 with q = p^omega0 (mod A~_{t-1}^2)
  /// Order of p mod A~_{t-1}^2 when it was needed; construct() fills it in otherwise.
  std::optional<Int> order_s;

  bool nice() const { return status == NiceStatus::nice; }
  long t() const { return static_cast<long>(cf.size()); }
};

/// All a_i > 0 and a_{t-1} > 4/p, so condition (b) holds once (a) and (c) do.
bool positive_shortcut(const QuotientList& cf);

/// Tests the three niceness conditions in order. Candidates q run over signed
/// multiples of B~_{t-1} dividing B~_{t-1}^2, smallest |q| first, positive
/// first. A discrete log over budget makes the verdict indeterminate.
/// Throws std::invalid_argument for an empty list, a quotient outside Y, or
/// e(a_i) < 1 for some i >= 1.
NiceCertificate is_nice(const QuotientList& cf, const DlogBudget& budget = {});

struct ConstructOptions {
  /// Largest omega the pipeline will materialize (p^omega is built exactly).
  unsigned long max_omega = 1'000'000;
  /// Run the periodic-limit and re-expansion checks.
  bool verify = true;
};

struct ConstructionResult {
  unsigned long p = 3;
  long t = 0;
  long k0 = 0;
  unsigned long h = 0;
  Int q;
  Int order_s;
  Int omega;
  Int b;
  long kt = 0;
  Int c_tilde;
  PartialQuotient a_t;
  Int m;
  /// [a_0, (a_1..a_{t-1}, a_t, a_{t-1}..a_1, 2a_0)*]
  Expansion expansion;
  /// Residue mod p of the sqrt(m) whose 1/(p^{k0} sqrt(m)) reproduces the expansion.
  std::optional<unsigned long> branch;

  bool eq_A = false;      ///< c~ A~_{t-1} + p^{k_t+k_{t-1}} A~_{t-2} = (-1)^{t-1} q / B~_{t-1}
  bool eq_B = false;      ///< c~ B~_{t-1} + p^{k_t+k_{t-1}} B~_{t-2} = (-1)^t b A~_{t-1}
  bool eq_m = false;      ///< B~_{t-1}(B~_t + ..B~_{t-2}) = m A~_{t-1}(A~_t + ..A~_{t-2})
  bool limit_ok = false;  ///< the periodic limit solves p^{2k0} m X^2 - 1 = 0
  bool reexpansion_ok = false;
  /// The expansion of p^{k0} sqrt(m) on the same branch is [0, a_0, (period)*].
  bool root_expansion_ok = false;
  bool verified = false;
};

/// Completes a nice certificate. h indexes the admissible omegas
/// omega0 + j*order_s (omega > k0 + 2K_{t-1} and |c~| < p^{k_t+1}/4), h = 0
/// being the smallest. Throws std::invalid_argument for a certificate that is
/// not nice, std::logic_error if an integrality step fails, and ResourceLimit
/// when omega would pass options.max_omega.
ConstructionResult construct(const NiceCertificate& cert, unsigned long h, const ConstructOptions& options = {});

/// beta_1^k = [1/p^k, 1/p^k]; beta_{n+1}^k = [b_0, 1/p^k, -b_1, -1/p^k, b_2, ...].
QuotientList beta(const OddPrime& p, unsigned n, unsigned k);

struct BetaPolynomials {
  Int U_tilde, V_tilde, S_tilde;
  Rational U, V, S, W;
  bool S_matches = false;  ///< S(n, p^k) = A_{2^n-2}
  bool U_matches = false;  ///< U(n, p^k) = A_{2^n-1}
  bool V_matches = false;  ///< V(n, p^k) = B_{2^n-2}
  bool W_matches = false;  ///< W(n, p^k) = B_{2^n-1}
  bool Btilde_one = false;
  /// The quadruple also solves the (x, y, z, w) recursion from n = 1.
  bool recursion_matches = false;
  bool all() const {
    return S_matches && U_matches && V_matches && W_matches && Btilde_one && recursion_matches;
  }
};

/// Integer polynomial S~(n, X).
Int S_tilde_poly(unsigned n, const Int& X);
Int U_tilde_poly(unsigned n, const Int& X);
Int V_tilde_poly(unsigned n, const Int& X);

BetaPolynomials beta_polynomials(const OddPrime& p, unsigned n, unsigned k);

struct CalaVerdict {
  long checked = 0;
  bool a = true, b = true, c = true, d = true;
  std::optional<long> first_failure;
  bool holds() const { return a && b && c && d; }
};

/// The bullet sequence [(-1)^j a~_{2j} / p^{2k}] of a list shaped like
/// [a~_0/p^k, 1/p^k, a~_2/p^k, -1/p^k, ...]. Throws std::invalid_argument otherwise.
QuotientList bullet_sequence(const QuotientList& alpha);

/// B_{2i} = (-1)^i (B*_i - B*_{i-1}), B_{2i+1} = B*_i / p^k, A_{2i+1} = A*_i + B*_i,
/// A_{2i} = (-1)^i p^k (A*_i - A*_{i-1} + B*_i - B*_{i-1}) at every index in range.
/// Throws std::invalid_argument when alpha does not have the interleaved shape
/// or bullet is not its bullet sequence.
CalaVerdict cala_identities(const QuotientList& alpha, const QuotientList& bullet);

// Closed-form families.

enum class CheckStatus { pass, fail, indeterminate };
std::string to_string(CheckStatus s);

struct Section6Result {
  int variant = 1;
  unsigned long p = 3;
  long t = 2;
  /// The family value on the branch whose expansion matches.
  std::optional<QuadIrr> value;
  /// Delta, b, c, k of (b + sqrt(Delta)) / (p^k c) before normalization.
  Int delta, b, c;
  long k = 0;
  Expansion claimed;
  /// +1 when the least-residue branch expands to the claimed list, -1 when the other one does
  /// (b = 0, so the other branch gives the negated list).
  int sign = 0;
  bool expansion_matches = false;
  /// Trace and determinant of the period matrix; char poly x^2 - trace x + det.
  Rational trace, det;
  /// Variant 1: x^2 + 2(2/p^{t+2} - 1) x + 1; variants 2 and 3: det = 1.
  bool charpoly_matches = false;
  bool matrix_route_matches = false;
  /// Variant 3 only: the printed preperiod quotient (p^{t-1}+1)/(2p^{t-2}).
  CheckStatus literal_quotient = CheckStatus::pass;
  std::string literal_note;
  bool verified() const { return expansion_matches && matrix_route_matches; }
};

/// Variant 1: sqrt(1 - p^{t+2}) / (2p), p >= 3, t >= 2.
/// Variant 2: sqrt(p^t + 1) / 2, p >= 5, t >= 3.
/// Variant 3: sqrt(p^t + 1) / (2p^{t-2}), p >= 5, t >= 3.
/// Throws std::domain_error outside those ranges.
Section6Result family_section6(int variant, const OddPrime& p, long t);

// Search.

enum class QuotientPool { all, pos, conj3 };
std::string to_string(QuotientPool pool);
QuotientPool pool_from_string(const std::string& s);

struct SearchLimits {
  /// |a~_i| <= num_bound.
  unsigned long num_bound = 20;
  /// 1 <= e(a_i) <= exp_bound.
  unsigned long exp_bound = 1;
  /// Index into the enumeration to start from.
  unsigned long long cursor = 0;
  /// Stop after this many candidates (0: the whole space).
  unsigned long long max_candidates = 0;
  unsigned jobs = 1;
  DlogBudget budget{};
};

struct SearchHit {
  unsigned long long index = 0;
  NiceCertificate certificate;
};

struct SearchSummary {
  unsigned long long space_size = 0;
  unsigned long long examined = 0;
  unsigned long long next_cursor = 0;
  unsigned long long indeterminate = 0;
  std::vector<SearchHit> hits;
};

/// The candidate quotients for position i of a length-t list.
QuotientList search_pool(const OddPrime& p, long t, long i, QuotientPool pool, const SearchLimits& limits);

/// Enumerates the product of the per-position pools in mixed-radix order
/// (last position fastest), keeps the nice ones. Results are ordered by
/// enumeration index whatever the job count. `sink`, when given, is called
/// for each hit in order.
SearchSummary nice_search(const OddPrime& p, long t, QuotientPool pool, const SearchLimits& limits,
                          const std::function<void(const SearchHit&)>& sink = {});

}  // namespace padiccf
