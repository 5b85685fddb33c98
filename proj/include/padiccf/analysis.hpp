// Structural analysis of expansions: regularity, conjugate and reversed
// periods, norm-sign windows with their period bounds, trace-zero shapes.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "padiccf/cf_engine.hpp"

namespace padiccf {

/// alpha^c = (b - delta)/(p^k c), stored as (-b, -c) over the same root.
QuadIrr conjugate(const QuadIrr& alpha);

/// -1/alpha^c = (b + delta)/(p^{k'} c') with p^{k+k'} c c' = Delta - b^2.
QuadIrr neg_inv_conjugate(const QuadIrr& alpha);

/// Exact norm alpha * alpha^c = (b^2 - Delta)/(p^{2k} c^2).
Rational norm(const QuadIrr& alpha);
/// alpha + alpha^c.
Rational trace(const QuadIrr& alpha);

bool is_palindrome(const QuotientList& xs);

struct RegularityReport {
  long v_alpha = 0;
  long v_conj = 0;
  bool regular = false;
  /// Least n with alpha_n regular, searched within the horizon.
  std::optional<long> first_regular_index;
  /// n0 = ceil(v_p(alpha - alpha^c)/2).
  long n0 = 0;
  long preperiod_bound = 0;
};

RegularityReport is_regular(const QuadIrr& alpha, Flavor flavor = Flavor::browkin, std::size_t horizon = 64);

struct GaloisVerdict {
  bool pass = false;
  bool regular = false;
  std::size_t preperiod_length = 0;
  std::optional<long> first_regular_index;
  std::string witness;
};

/// For a periodic expansion: empty preperiod iff regular, and the preperiod
/// length equals the first regular index.
GaloisVerdict galois_check(const QuadIrr& alpha, const Expansion& expansion);

struct ReversedPeriod {
  /// [(a_{N-1}, ..., a_0)*]
  Expansion reversed;
  /// [0, (-a_{N-1}, ..., -a_0)*]
  Expansion conjugate_form;
  bool reversed_verified = false;   ///< expansion of -1/alpha^c matches
  bool conjugate_verified = false;  ///< expansion of alpha^c matches
  bool palindromic = false;
  Rational norm;
};

/// Requires a purely periodic Browkin expansion of alpha; throws std::invalid_argument otherwise.
ReversedPeriod reversed_period_identity(const QuadIrr& alpha, const Expansion& expansion);

/// For regular alpha: the first n+1 quotients of -1/alpha_{n+1}^c are a_n, ..., a_0.
bool reversal_prefix_check(const QuadIrr& alpha, std::size_t n);

/// (2t+1)Delta + 1 - t(t+1)(2t+1)/3 with t = floor(sqrt(Delta)). Throws for Delta <= 0.
Int K_bound(const Int& delta);

enum class WindowVerdict { not_triggered, confirmed, violated };
std::string to_string(WindowVerdict v);

struct NormSignTrace {
  /// Sign of N(xi_n) = (b_n^2 - Delta)/(p^{2k_n} c_n^2), n = 0..N.
  std::vector<int> signs;
  std::vector<Int> b_values;
  std::vector<Int> c_values;
  std::vector<long> k_values;
  std::optional<Int> K_bound;  ///< only for Delta > 0
};

struct BSequenceReport {
  NormSignTrace trace;
  /// |b_n| -> count over the horizon.
  std::map<Int, std::size_t> abs_b_counts;
  /// Indices n >= 1 with |b_n| <= floor(sqrt(Delta)) (negative norm).
  std::vector<long> small_b_indices;
  ExpansionStatus status = ExpansionStatus::open;
  std::optional<std::size_t> period_length;
  std::size_t preperiod_length = 0;
  /// b_n repeats at every multiple of the period (periodic inputs only).
  bool plateau_at_period_multiples = false;
  std::size_t longest_negative_run = 0;
  std::size_t longest_alternating_run = 0;
  WindowVerdict negative_window = WindowVerdict::not_triggered;
  WindowVerdict alternating_window = WindowVerdict::not_triggered;
};

/// Runs N Browkin steps recording b_n, c_n, k_n and norm signs. A run of K+1
/// negative norms (n >= 1) must come with a period <= K; a run of 2K+2
/// alternating signs with a period <= 2K.
BSequenceReport b_sequence_analysis(const QuadIrr& alpha, std::size_t N);

enum class TraceZeroClass { preperiod_1, preperiod_2 };
std::string to_string(TraceZeroClass c);

/// Throws std::invalid_argument unless b = 0.
TraceZeroClass trace_zero_classify(const QuadIrr& alpha);

struct TemplateMatch {
  bool applicable = false;  ///< v_p(alpha) != 0 and the expansion is periodic
  std::size_t offset = 0;   ///< index of the trace-zero quotient a_0 in the template
  bool small_head = false;  ///< |a_0| < p/4
  bool palindromic_interior = false;
  bool tail_is_twice_head = false;
  bool matches = false;
};

/// Matches a periodic expansion of a trace-zero alpha against
/// [a_0, (a_1, ..., a_1, 2a_0)*] (shifted by one when v_p(alpha) > 0).
TemplateMatch match_trace_zero_template(const QuadIrr& alpha, const Expansion& expansion);

struct DtVerdict {
  bool palindromic = false;
  long d = 0;
  long t = 0;
  bool even = false;
  bool a_identity = false;
  bool b_identity = false;
  bool holds() const { return palindromic && a_identity && b_identity; }
};

/// For a palindromic [a_0, a_1, ..., a_1, a_0] of length d+1 (d = 2t or 2t+1):
/// even d: a_0 A_{d-1} + A_{d-2} = A_{t-1}(A_t + A_{t-2}), B_{d-1} = B_{t-1}(B_t + B_{t-2});
/// odd d:  a_0 A_{d-1} + A_{d-2} = A_t^2 + A_{t-1}^2,      B_{d-1} = B_t^2 + B_{t-1}^2.
DtVerdict dt_identities(const QuotientList& cf);

struct RubanProbe {
  ExpansionStatus status = ExpansionStatus::open;
  std::size_t steps = 0;
  Int a1_tilde;
  /// alpha_2 from the stepper equals p^k (sqrt(m) + a~_1 m)/(1 - a~_1^2 m).
  bool formula_matches = false;
  /// Both real embeddings of alpha_2 are negative (m > 0 only).
  bool both_embeddings_negative = false;
  bool real_embedding = false;
};

/// Ruban expansion of p^k sqrt(m) for N steps. Requires p ∤ m, k > 0, sqrt(m) in Q_p.
RubanProbe ruban_nonperiodic_probe(const OddPrime& p, const Int& m, long k, std::size_t N,
                                   std::optional<unsigned long> branch = std::nullopt);

/// delta/p^h with delta^2 = 1 + p^{2h}, delta = 1 mod p.
QuadIrr ruban_family(const OddPrime& p, long h);

}  // namespace padiccf
