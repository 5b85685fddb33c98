#include "padiccf/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace padiccf {
namespace {

Rational p_power(const OddPrime& p, long e) {
  if (e >= 0) return Rational(p.pow(static_cast<unsigned long>(e)));
  return Rational(1) / Rational(p.pow(static_cast<unsigned long>(-e)));
}

long ceil_half(long x) { return x >= 0 ? (x + 1) / 2 : -((-x) / 2); }

bool regular_now(const QuadIrr& a) { return a.valuation() < 0 && conjugate(a).valuation() > 0; }

QuotientList negated(const QuotientList& xs) {
  QuotientList out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.emplace_back(-x.tilde(), x.e(), OddPrime(x.prime()));
  return out;
}

// Longest run of consecutive entries (from index `from`) satisfying pred on neighbours.
template <class Pred>
std::size_t longest_run(const std::vector<int>& s, std::size_t from, Pred ok_single, bool pairwise_alternate) {
  std::size_t best = 0, cur = 0;
  for (std::size_t n = from; n < s.size(); ++n) {
    if (!ok_single(s[n])) {
      cur = 0;
      continue;
    }
    if (pairwise_alternate && cur > 0 && s[n] == s[n - 1])
      cur = 1;
    else
      ++cur;
    best = std::max(best, cur);
  }
  return best;
}

}  // namespace

QuadIrr conjugate(const QuadIrr& alpha) { return alpha.with_state(-alpha.b(), -alpha.c(), alpha.k()); }

QuadIrr neg_inv_conjugate(const QuadIrr& alpha) {
  Int N = alpha.delta() - alpha.b() * alpha.b();
  mpz_divexact(N.get_mpz_t(), N.get_mpz_t(), alpha.c().get_mpz_t());
  long v = 0;
  Int c = strip_p(N, alpha.p(), &v);
  return alpha.with_state(alpha.b(), std::move(c), v - alpha.k());
}

Rational norm(const QuadIrr& alpha) {
  const Rational den = Rational(alpha.c() * alpha.c()) * p_power(alpha.p(), 2 * alpha.k());
  return Rational(alpha.b() * alpha.b() - alpha.delta()) / den;
}

Rational trace(const QuadIrr& alpha) {
  return Rational(2 * alpha.b()) / (Rational(alpha.c()) * p_power(alpha.p(), alpha.k()));
}

bool is_palindrome(const QuotientList& xs) { return std::equal(xs.begin(), xs.end(), xs.rbegin()); }

RegularityReport is_regular(const QuadIrr& alpha, Flavor flavor, std::size_t horizon) {
  RegularityReport r;
  r.v_alpha = alpha.valuation();
  r.v_conj = conjugate(alpha).valuation();
  r.regular = r.v_alpha < 0 && r.v_conj > 0;
  // alpha - alpha^c = 2 delta / (p^k c)
  r.n0 = ceil_half(alpha.root()->half_valuation() - alpha.k());
  r.preperiod_bound = r.n0 + 2;
  QuadIrr cur = alpha;
  for (std::size_t n = 0; n <= horizon; ++n) {
    if (regular_now(cur)) {
      r.first_regular_index = static_cast<long>(n);
      break;
    }
    if (n < horizon) cur = step(cur, flavor).next;
  }
  return r;
}

GaloisVerdict galois_check(const QuadIrr& alpha, const Expansion& expansion) {
  if (expansion.status != ExpansionStatus::periodic)
    throw std::invalid_argument("galois_check: expansion is not periodic");
  GaloisVerdict g;
  g.preperiod_length = expansion.preperiod.size();
  const auto rep = is_regular(alpha, expansion.flavor, expansion.emitted() + 2);
  g.regular = rep.regular;
  g.first_regular_index = rep.first_regular_index;
  const bool a = expansion.preperiod.empty() == rep.regular;
  const bool b = rep.first_regular_index && *rep.first_regular_index == static_cast<long>(g.preperiod_length);
  g.pass = a && b;
  g.witness = "v(alpha)=" + std::to_string(rep.v_alpha) + " v(alpha^c)=" + std::to_string(rep.v_conj) +
              " preperiod=" + std::to_string(g.preperiod_length) + " first_regular=" +
              (rep.first_regular_index ? std::to_string(*rep.first_regular_index) : std::string("none"));
  return g;
}

ReversedPeriod reversed_period_identity(const QuadIrr& alpha, const Expansion& expansion) {
  if (expansion.status != ExpansionStatus::periodic || !expansion.preperiod.empty() || !expansion.period)
    throw std::invalid_argument("reversed_period_identity: needs a purely periodic expansion");
  const OddPrime& p = alpha.p();
  QuotientList rev(expansion.period->rbegin(), expansion.period->rend());
  const long k_rev = rev.front().e();

  ReversedPeriod out;
  out.reversed = periodic_expansion(p, Flavor::browkin, {}, rev, k_rev);
  out.conjugate_form = periodic_expansion(p, Flavor::browkin, {LaurentInt(0, 0, p)}, negated(rev),
                                          -conjugate(alpha).valuation());
  const std::size_t horizon = 4 * rev.size() + 8;
  const auto got_rev = expand(neg_inv_conjugate(alpha), Flavor::browkin, horizon);
  out.reversed_verified = got_rev.status == ExpansionStatus::periodic && got_rev.preperiod.empty() &&
                          *got_rev.period == rev;
  const auto got_conj = expand(conjugate(alpha), Flavor::browkin, horizon);
  out.conjugate_verified = got_conj.status == ExpansionStatus::periodic &&
                           got_conj.preperiod == out.conjugate_form.preperiod &&
                           *got_conj.period == *out.conjugate_form.period;
  out.palindromic = is_palindrome(*expansion.period);
  out.norm = norm(alpha);
  return out;
}

bool reversal_prefix_check(const QuadIrr& alpha, std::size_t n) {
  QuotientList head;
  QuadIrr cur = alpha;
  for (std::size_t i = 0; i <= n; ++i) {
    auto s = step(cur, Flavor::browkin);
    head.push_back(std::move(s.quotient));
    cur = std::move(s.next);
  }
  std::reverse(head.begin(), head.end());
  return leading_quotients(neg_inv_conjugate(cur), Flavor::browkin, n + 1) == head;
}

Int K_bound(const Int& delta) {
  if (delta <= 0) throw std::invalid_argument("K_bound: Delta must be positive");
  Int t;
  mpz_sqrt(t.get_mpz_t(), delta.get_mpz_t());
  return (2 * t + 1) * delta + 1 - t * (t + 1) * (2 * t + 1) / 3;
}

std::string to_string(WindowVerdict v) {
  switch (v) {
    case WindowVerdict::not_triggered: return "not_triggered";
    case WindowVerdict::confirmed: return "confirmed";
    case WindowVerdict::violated: return "violated";
  }
  return "not_triggered";
}

BSequenceReport b_sequence_analysis(const QuadIrr& alpha, std::size_t N) {
  if (N == 0) throw std::invalid_argument("b_sequence_analysis: N must be >= 1");
  BSequenceReport rep;
  auto& tr = rep.trace;
  const Int& delta = alpha.delta();
  if (delta > 0) tr.K_bound = K_bound(delta);
  QuadIrr cur = alpha;
  for (std::size_t n = 0; n <= N; ++n) {
    tr.b_values.push_back(cur.b());
    tr.c_values.push_back(cur.c());
    tr.k_values.push_back(cur.k());
    tr.signs.push_back(sgn(Int(cur.b() * cur.b() - delta)));
    ++rep.abs_b_counts[abs(cur.b())];
    if (n >= 1 && tr.signs.back() < 0) rep.small_b_indices.push_back(static_cast<long>(n));
    if (n < N) cur = step(cur, Flavor::browkin).next;
  }

  const auto ex = expand(alpha, Flavor::browkin, N);
  rep.status = ex.status;
  rep.preperiod_length = ex.preperiod.size();
  if (ex.period) {
    const std::size_t P = ex.period->size();
    rep.period_length = P;
    bool plateau = true;
    for (std::size_t n = rep.preperiod_length; n + P <= N; ++n)
      plateau = plateau && tr.b_values[n] == tr.b_values[n + P];
    rep.plateau_at_period_multiples = plateau;
  }

  rep.longest_negative_run = longest_run(tr.signs, 1, [](int s) { return s < 0; }, false);
  rep.longest_alternating_run = longest_run(tr.signs, 1, [](int s) { return s != 0; }, true);
  if (tr.K_bound) {
    const Int K = *tr.K_bound;
    auto judge = [&](const Int& bound) {
      return rep.period_length && Int(static_cast<unsigned long>(*rep.period_length)) <= bound
                 ? WindowVerdict::confirmed
                 : WindowVerdict::violated;
    };
    if (Int(static_cast<unsigned long>(rep.longest_negative_run)) >= K + 1) rep.negative_window = judge(K);
    if (Int(static_cast<unsigned long>(rep.longest_alternating_run)) >= 2 * K + 2)
      rep.alternating_window = judge(2 * K);
  }
  return rep;
}

std::string to_string(TraceZeroClass c) { return c == TraceZeroClass::preperiod_1 ? "preperiod_1" : "preperiod_2"; }

TraceZeroClass trace_zero_classify(const QuadIrr& alpha) {
  if (alpha.b() != 0) throw std::invalid_argument("trace_zero_classify: b != 0");
  return alpha.valuation() < 0 ? TraceZeroClass::preperiod_1 : TraceZeroClass::preperiod_2;
}

TemplateMatch match_trace_zero_template(const QuadIrr& alpha, const Expansion& expansion) {
  if (alpha.b() != 0) throw std::invalid_argument("match_trace_zero_template: b != 0");
  TemplateMatch m;
  const long v = alpha.valuation();
  if (expansion.status != ExpansionStatus::periodic || v == 0) return m;
  m.applicable = true;
  m.offset = v < 0 ? 0 : 1;
  const PartialQuotient& a0 = expansion.quotient(m.offset);
  m.small_head = 4 * abs(a0.value()) < Rational(alpha.p().value());
  const QuotientList& P = *expansion.period;
  const QuotientList interior(P.begin(), P.end() - 1);
  m.palindromic_interior = is_palindrome(interior);
  m.tail_is_twice_head = P.back() == LaurentInt(2 * a0.tilde(), a0.e(), alpha.p());
  const bool head_ok = m.offset == 0 || expansion.quotient(0).is_zero();
  m.matches = head_ok && expansion.preperiod.size() == m.offset + 1 && m.palindromic_interior &&
              m.tail_is_twice_head;
  return m;
}

DtVerdict dt_identities(const QuotientList& cf) {
  DtVerdict v;
  if (cf.size() < 3) throw std::invalid_argument("dt_identities: need d >= 2");
  v.d = static_cast<long>(cf.size()) - 1;
  v.t = v.d / 2;
  v.even = v.d % 2 == 0;
  v.palindromic = is_palindrome(cf);
  const auto tab = convergents(cf);
  auto A = [&](long n) { return tab.A(n).value(); };
  auto B = [&](long n) { return tab.B(n).value(); };
  const Rational a0 = cf.front().value();
  const long d = v.d, t = v.t;
  const Rational lhs_a = a0 * A(d - 1) + A(d - 2);
  const Rational lhs_b = B(d - 1);
  if (v.even) {
    v.a_identity = lhs_a == A(t - 1) * (A(t) + A(t - 2));
    v.b_identity = lhs_b == B(t - 1) * (B(t) + B(t - 2));
  } else {
    v.a_identity = lhs_a == A(t) * A(t) + A(t - 1) * A(t - 1);
    v.b_identity = lhs_b == B(t) * B(t) + B(t - 1) * B(t - 1);
  }
  return v;
}

RubanProbe ruban_nonperiodic_probe(const OddPrime& p, const Int& m, long k, std::size_t N,
                                   std::optional<unsigned long> branch) {
  if (k <= 0) throw std::invalid_argument("ruban_nonperiodic_probe: k must be positive");
  if (mpz_divisible_ui_p(m.get_mpz_t(), p.value())) throw std::invalid_argument("ruban_nonperiodic_probe: p | m");
  const auto root = sqrt_mod_p(m, p);
  if (!root) throw std::domain_error("ruban_nonperiodic_probe: sqrt(m) not in Q_p");
  const QuadIrr alpha = normalize(p, m, 0, 1, -k, branch.value_or(*root));

  RubanProbe r;
  const auto ex = expand(alpha, Flavor::ruban, N);
  r.status = ex.status;
  r.steps = ex.emitted();

  const auto s0 = step(alpha, Flavor::ruban);
  const auto s1 = step(s0.next, Flavor::ruban);
  r.a1_tilde = s1.quotient.tilde();
  const Int& a = r.a1_tilde;
  const Int den = 1 - a * a * m;
  const Rational pk = p_power(p, k);
  const Surd got = s1.next.surd();
  r.formula_matches = den != 0 && got.r == pk * Rational(a * m) / Rational(den) && got.s == pk / Rational(den);

  r.real_embedding = m > 0;
  if (r.real_embedding && den != 0) {
    // signs of a m - sqrt(m) and a m + sqrt(m)
    const Int am = a * m;
    const int minus = am <= 0 ? -1 : sgn(Int(am * am - m));
    const int plus = am >= 0 ? 1 : sgn(Int(m - am * am));
    r.both_embeddings_negative = minus * sgn(den) < 0 && plus * sgn(den) < 0;
  }
  return r;
}

QuadIrr ruban_family(const OddPrime& p, long h) {
  if (h < 1) throw std::invalid_argument("ruban_family: h must be >= 1");
  const Int ph = p.pow(static_cast<unsigned long>(h));
  return normalize(p, 1 + ph * ph, 0, 1, h, 1);
}

}  // namespace padiccf
