// Acceptance run: one PASS/FAIL line per criterion. With an argument N only
// criterion N runs. Exit status is nonzero when any selected criterion fails.
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "padiccf/analysis.hpp"
#include "padiccf/constructor.hpp"
#include "padiccf/text_io.hpp"

using namespace padiccf;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail = what;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os.precision(3);
  os << s << " s";
  return os.str();
}

Int pw(unsigned long p, unsigned long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, e);
  return r;
}

bool same_value(const QuadIrr& x, const QuadIrr& y) {
  const Surd a = x.surd(), b = y.surd();
  if (a.r != b.r || a.s * a.s * Rational(x.delta()) != b.s * b.s * Rational(y.delta())) return false;
  const long shift = std::max(x.k(), y.k());
  return x.digits(shift, 40) == y.digits(shift, 40);
}

// A random Browkin quotient: exponent e in [e_lo, e_hi], |a| < p/2.
PartialQuotient random_quotient(std::mt19937_64& rng, const OddPrime& p, long e_lo, long e_hi) {
  const long e = e_lo + static_cast<long>(rng() % static_cast<unsigned long>(e_hi - e_lo + 1));
  if (e == 0) return LaurentInt(Int(static_cast<long>(rng() % 21) - 10), 0, p);
  const Int cap = pw(p, static_cast<unsigned long>(e) + 1);  // |tilde| < p^{e+1}/2
  const Int half = (cap - 1) / 2;
  Int t;
  do {
    t = Int(static_cast<unsigned long>(rng() % half.get_ui())) + 1;
  } while (t % Int(p.value()) == 0);
  if (rng() % 2) t = -t;
  return LaurentInt(t, e, p);
}

// ------------------------------------------------------------------ 1..3

Verdict criterion1() {
  Verdict v;
  const auto t0 = Clock::now();
  const OddPrime p(5);
  const Expansion ex = expand(normalize(p, 19, -13, 6, 1, 2), Flavor::browkin);
  const double s = seconds_since(t0);
  const QuotientList expect =
      parse_quotient_list("4/5, -11/5, -3/5, -4/25, 274/125, -4/25, -3/5, -11/5, 4/5, 1/5, 24/25, 1/5", p);
  v.require(ex.status == ExpansionStatus::periodic, "not periodic");
  v.require(ex.preperiod.empty(), "nonempty preperiod");
  v.require(ex.period && *ex.period == expect, "period differs: " + ex.text());
  v.require(s < 1.0, "runtime " + fmt_seconds(s));
  if (v.pass) v.detail = "period 12 exact, " + fmt_seconds(s);
  return v;
}

Verdict criterion2() {
  Verdict v;
  const OddPrime p(5);
  const Expansion ex = expand(normalize(p, 89, 8, 5, 0, 3), Flavor::browkin, 10000);
  const QuotientList expect =
      parse_quotient_list("-9/5, -2/5, -59/25, 2/5, -9/5, 23/25, 3/5, 1/5, 51/25, 8/5, 2/5, -7/5, -12/5, 6/5", p);
  v.require(ex.status == ExpansionStatus::open, "status " + to_string(ex.status));
  v.require(ex.emitted() >= 14 && ex.prefix(14) == expect, "prefix differs");
  v.require(ex.preperiod.size() == 10000, "stopped after " + std::to_string(ex.preperiod.size()));
  if (v.pass) v.detail = "14-quotient prefix exact, open after 10000 steps";
  return v;
}

Verdict criterion3() {
  Verdict v;
  const OddPrime p(3);
  const Expansion ex = expand(normalize(p, 37, 1, 6, 0, 1), Flavor::browkin);
  v.require(ex.status == ExpansionStatus::periodic && ex.preperiod.empty(), ex.text());
  v.require(ex.period && *ex.period == parse_quotient_list("1/3", p), ex.text());
  if (v.pass) v.detail = ex.text();
  return v;
}

// ------------------------------------------------------------------ 4..6

Verdict criterion4() {
  Verdict v;
  const auto t0 = Clock::now();
  const OddPrime p(5);
  const NiceCertificate cert = is_nice(parse_quotient_list("6/5", p));
  v.require(cert.nice(), "[6/5] not nice");
  if (!v.pass) return v;
  const ConstructionResult r = construct(cert, 0);
  v.require(r.omega == 6, "omega " + r.omega.get_str());
  v.require(r.m == -434, "m " + r.m.get_str());
  v.require(r.kt == 5, "k_t " + std::to_string(r.kt));
  v.require(r.c_tilde == -2604, "c~ " + r.c_tilde.get_str());
  v.require(r.verified, "construction checks failed");
  // the limit of [6/5, (-5208/3125, 12/5)*] is a root of 25*434 X^2 + 1
  const PeriodicLimit lim = periodic_limit(r.expansion.preperiod, *r.expansion.period, p);
  v.require(lim.u == 25 * 434 && lim.v == 0 && lim.w == 1, "limit polynomial");
  // 1/(5 sqrt(-434)) = sqrt(-434) / (5 * (-434))
  bool found = false;
  for (unsigned long br : {1ul, 4ul}) {
    const Expansion ex = expand(normalize(p, -434, 0, -434, 1, br), Flavor::browkin);
    found = found || ex.text() == "[6/5, (-5208/3125, 12/5)*]";
  }
  v.require(found, "re-expansion of 1/(5 sqrt(-434))");
  const double s = seconds_since(t0);
  v.require(s < 1.0, "runtime " + fmt_seconds(s));
  if (v.pass) v.detail = "m = -434, k_t = 5, c~ = -2604, " + fmt_seconds(s);
  return v;
}

Verdict criterion5() {
  Verdict v;
  const auto t0 = Clock::now();
  const OddPrime p(3);
  const NiceCertificate cert = is_nice(parse_quotient_list("1/3, 1/3", p));
  v.require(cert.nice(), "[1/3, 1/3] not nice");
  if (!v.pass) return v;
  const ConstructionResult r = construct(cert, 0);
  v.require(r.omega == 20, "omega " + r.omega.get_str());
  v.require(r.b == 34867844 && r.b == (pw(3, 20) - 1) / 100, "b " + r.b.get_str());
  v.require(r.kt == 17, "k_t " + std::to_string(r.kt));
  v.require(r.m == -34867844, "m " + r.m.get_str());
  // 3 sqrt(m) = 66 sqrt(-72041)
  v.require(9 * r.m == Int(66 * 66) * -72041, "3 sqrt(m) != 66 sqrt(-72041)");
  v.require(r.verified, "construction checks failed");
  const double s = seconds_since(t0);
  v.require(s < 5.0, "runtime " + fmt_seconds(s));
  if (v.pass) v.detail = "b = 34867844, k_t = 17, m = -34867844, " + fmt_seconds(s);
  return v;
}

Verdict criterion6() {
  Verdict v;
  const auto t0 = Clock::now();
  v.require(mult_order(5, 36) == 6, "ord_36(5)");
  v.require(mult_order(3, 100) == 20, "ord_100(3)");
  v.require(mult_order(3, 353 * 353) == 124256, "ord_{353^2}(3)");
  const DlogResult d = discrete_log(3, 110, 353 * 353);
  v.require(d.status == DlogStatus::found && d.value == Int(31861), "log_3 110");
  // the logarithm is a logarithm
  Int check;
  mpz_powm_ui(check.get_mpz_t(), Int(3).get_mpz_t(), 31861, Int(353 * 353).get_mpz_t());
  v.require(check == 110, "3^31861 != 110 mod 353^2");
  const double s = seconds_since(t0);
  v.require(s < 5.0, "runtime " + fmt_seconds(s));
  if (v.pass) v.detail = "6, 20, 124256, 31861 in " + fmt_seconds(s);
  return v;
}

// ------------------------------------------------------------------ 7, 8

Verdict criterion7() {
  Verdict v;
  const auto t0 = Clock::now();
  int cases = 0;
  for (unsigned long pv : {3ul, 5ul, 7ul}) {
    const OddPrime p(pv);
    for (unsigned long k = 1; k <= 2; ++k) {
      for (unsigned n = 1; n <= 5 && v.pass; ++n) {
        const std::string at = "p=" + std::to_string(pv) + " k=" + std::to_string(k) + " n=" + std::to_string(n);
        const QuotientList b = beta(p, n, k);
        v.require(b.size() == (std::size_t{1} << n), at + ": length");
        Int sum = 1;
        for (unsigned j = 1; j <= n; ++j) sum += pw(pv, (1ul << j) * k);
        v.require(eval_finite(b) == Rational(sum) / Rational(pw(pv, k)), at + ": value");
        const ConvergentTable tab(b);
        v.require(tab.Btilde(tab.size() - 1) == 1, at + ": B~ != 1");
        v.require(is_nice(b).nice(), at + ": not nice");
        v.require(cala_identities(b, bullet_sequence(b)).holds(), at + ": bullet identities");
        const BetaPolynomials poly = beta_polynomials(p, n, k);
        v.require(poly.all(), at + ": S/U/V/W");
        ++cases;
      }
    }
  }
  const double s = seconds_since(t0);
  v.require(s < 30.0, "runtime " + fmt_seconds(s));
  if (v.pass) v.detail = std::to_string(cases) + " cases, " + fmt_seconds(s);
  return v;
}

// Period 2^n needs a nice list of length 2^{n-1}: beta_{n-1}^1, or [6/5] for n = 1.
Verdict criterion8() {
  Verdict v;
  const auto t0 = Clock::now();
  const OddPrime p(5);
  std::string done;
  for (unsigned n = 1; n <= 4; ++n) {
    const std::string at = "n=" + std::to_string(n);
    const QuotientList cf = n == 1 ? parse_quotient_list("6/5", p) : beta(p, n - 1, 1);
    const NiceCertificate cert = is_nice(cf);
    v.require(cert.nice(), at + ": list not nice");
    if (!cert.nice()) continue;
    try {
      const ConstructionResult r = construct(cert, 0);
      v.require(r.verified, at + ": construction checks failed");
      // independent re-expansion of p^{k0} sqrt(m)
      const Expansion ex = expand(normalize(p, r.m, 0, 1, -r.k0, r.branch.value_or(1)), Flavor::browkin);
      v.require(ex.status == ExpansionStatus::periodic && ex.period->size() == (std::size_t{1} << n),
                at + ": period " + (ex.period ? std::to_string(ex.period->size()) : "none"));
      done += (done.empty() ? "" : ", ") + at + " omega=" + r.omega.get_str();
    } catch (const ResourceLimit& e) {
      v.require(false, at + ": " + e.what());
    }
  }
  const double s = seconds_since(t0);
  v.require(s < 300.0, "runtime " + fmt_seconds(s));
  if (v.pass)
    v.detail = done + ", " + fmt_seconds(s);
  else
    v.detail += " (verified: " + done + ")";
  return v;
}

// ------------------------------------------------------------------ 9

Verdict criterion9() {
  Verdict v;
  int checked = 0;
  const std::pair<unsigned long, long> cases[] = {{3, 2}, {5, 2}, {5, 3}, {7, 3}};
  for (int variant = 1; variant <= 3; ++variant) {
    for (const auto& [pv, t] : cases) {
      if (variant > 1 && (pv < 5 || t < 3)) continue;
      const OddPrime p(pv);
      const std::string at = "variant " + std::to_string(variant) + " p=" + std::to_string(pv) +
                             " t=" + std::to_string(t);
      const Section6Result r = family_section6(variant, p, t);
      v.require(r.verified(), at + ": not verified");
      v.require(r.value.has_value(), at + ": no matching branch");
      if (!r.value) continue;
      // the limit of the claimed list solves 4 p^{2k} X^2 = Delta
      const PeriodicLimit lim = periodic_limit(r.claimed.preperiod, *r.claimed.period, p);
      v.require(lim.v == 0, at + ": limit has nonzero trace");
      v.require(Rational(-lim.w) / Rational(lim.u) == Rational(r.delta) / Rational(4 * pw(pv, 2 * r.k)),
                at + ": limit polynomial");
      v.require(same_value(lim.value, *r.value), at + ": limit differs from the family value");
      v.require(r.literal_quotient == (variant == 3 ? CheckStatus::indeterminate : CheckStatus::pass),
                at + ": literal quotient status");
      ++checked;
    }
  }
  if (v.pass) v.detail = std::to_string(checked) + " family instances; variant 3 literal head indeterminate";
  return v;
}

// ------------------------------------------------------------------ 10

// Random (b + sqrt(Delta))/(p^k c) with sqrt(Delta) in Q_p.
std::optional<QuadIrr> random_quad(std::mt19937_64& rng, const OddPrime& p) {
  const long delta = static_cast<long>(rng() % 4000) - 2000;
  if (delta == 0 || (delta > 0 && is_perfect_square(Int(delta)))) return std::nullopt;
  const PadicSquareInfo info = padic_square_exists(delta, p);
  if (!info.exists) return std::nullopt;
  const long b = static_cast<long>(rng() % 41) - 20;
  long c = static_cast<long>(rng() % 19) - 9;
  if (c == 0) c = 1;
  const long k = static_cast<long>(rng() % 5) - 2;
  const unsigned long br = *sqrt_mod_p(info.unit, p);
  return normalize(p, delta, b, c, k, rng() % 2 ? br : p.value() - br);
}

Verdict criterion10() {
  Verdict v;
  const auto t0 = Clock::now();
  const OddPrime primes[] = {OddPrime(3), OddPrime(5), OddPrime(7), OddPrime(11)};
  std::mt19937_64 rng(20240601);
  std::vector<std::string> done;

  // determinant identity
  for (int i = 0; i < 1000 && v.pass; ++i) {
    const OddPrime& p = primes[rng() % 4];
    QuotientList cf{random_quotient(rng, p, 0, 2)};
    for (std::size_t j = 0, n = rng() % 12; j < n; ++j) cf.push_back(random_quotient(rng, p, 1, 3));
    const ConvergentTable tab(cf);
    for (long n = 0; n < tab.size(); ++n) {
      const Rational det = tab.A(n).value() * tab.B(n - 1).value() - tab.B(n).value() * tab.A(n - 1).value();
      v.require(det == (n % 2 ? 1 : -1), "determinant, case " + std::to_string(i));
      const QuotientList head(cf.begin(), cf.begin() + n + 1);
      v.require(tab.convergent(n) == eval_finite(head), "convergent, case " + std::to_string(i));
    }
  }
  done.push_back("determinant");

  // valuation growth v_p(Q_n - alpha) = 2K_n + k_{n+1}
  for (int i = 0; i < 1000 && v.pass;) {
    const OddPrime& p = primes[rng() % 4];
    const auto alpha = random_quad(rng, p);
    if (!alpha) continue;
    const Expansion ex = expand(*alpha, Flavor::browkin, 21);
    if (ex.emitted() < 2) continue;
    const std::size_t n = std::min<std::size_t>(21, ex.status == ExpansionStatus::periodic ? 21 : ex.emitted());
    const AuditReport rep = valuation_audit(*alpha, ex, convergents(ex.prefix(n)));
    v.require(rep.clean, "valuation growth: " + rep.detail);
    ++i;
  }
  done.push_back("valuation growth");

  // closeness: equal first n+1 quotients -> v_p(alpha - beta) >= 2n+1
  for (int i = 0; i < 1000 && v.pass;) {
    const OddPrime& p = primes[rng() % 3];
    const std::size_t n = rng() % 5;
    QuotientList head{random_quotient(rng, p, 0, 1)};
    for (std::size_t j = 0; j < n; ++j) head.push_back(random_quotient(rng, p, 1, 2));
    QuotientList ta{random_quotient(rng, p, 1, 2), random_quotient(rng, p, 1, 2)};
    QuotientList tb{random_quotient(rng, p, 1, 2), random_quotient(rng, p, 1, 2)};
    if (ta.front() == tb.front()) continue;
    std::optional<PeriodicLimit> la, lb;
    try {
      la = periodic_limit(head, ta, p);
      lb = periodic_limit(head, tb, p);
    } catch (const std::domain_error&) {
      continue;
    }
    const long shift = std::max({la->value.k(), lb->value.k(), 0l});
    const unsigned long N = static_cast<unsigned long>(shift) + 2 * n + 1;
    v.require(la->value.digits(shift, N) == lb->value.digits(shift, N), "closeness, n = " + std::to_string(n));
    ++i;
  }
  done.push_back("closeness");

  // purely periodic <-> regular, over a corpus of periodic expansions
  std::vector<std::pair<QuadIrr, Expansion>> corpus;
  for (int attempts = 0; corpus.size() < 1000 && attempts < 200000; ++attempts) {
    const OddPrime& p = primes[rng() % 3];
    const auto alpha = random_quad(rng, p);
    if (!alpha) continue;
    Expansion ex = expand(*alpha, Flavor::browkin, 300);
    if (ex.status == ExpansionStatus::periodic) corpus.emplace_back(*alpha, std::move(ex));
  }
  v.require(corpus.size() == 1000, "periodic corpus has only " + std::to_string(corpus.size()));
  for (const auto& [alpha, ex] : corpus) {
    const bool regular = alpha.valuation() < 0 && conjugate(alpha).valuation() > 0;
    v.require(ex.preperiod.empty() == regular, "regularity: " + ex.text());
    v.require(galois_check(alpha, ex).pass, "Galois check: " + ex.text());
  }
  done.push_back("regular/purely periodic");

  // palindromic period -> norm -1
  int palindromes = 0;
  for (int attempts = 0; palindromes < 1000 && v.pass && attempts < 100000; ++attempts) {
    const OddPrime& p = primes[rng() % 3];
    const std::size_t half = 1 + rng() % 3;
    QuotientList period;
    for (std::size_t j = 0; j < half; ++j) period.push_back(random_quotient(rng, p, 1, 2));
    for (std::size_t j = half - (rng() % 2 ? 0 : 1); j-- > 0;) period.push_back(period[j]);
    std::optional<PeriodicLimit> lim;
    try {
      lim = periodic_limit({}, period, p);
    } catch (const std::domain_error&) {
      continue;
    }
    const Expansion ex = expand(lim->value, Flavor::browkin);
    if (ex.status != ExpansionStatus::periodic || !ex.preperiod.empty()) continue;
    v.require(is_palindrome(*ex.period), "period not palindromic");
    v.require(lim->w == -lim->u, "norm != -1 for " + ex.text());
    v.require(reversed_period_identity(lim->value, ex).norm == -1, "reported norm");
    ++palindromes;
  }
  v.require(palindromes == 1000, "palindromic corpus has only " + std::to_string(palindromes));
  done.push_back("palindromic norm");

  // trace zero: preperiod 1 when v_p(alpha) < 0, else 2
  int tz = 0;
  for (int attempts = 0; tz < 1000 && attempts < 200000 && v.pass; ++attempts) {
    const OddPrime& p = primes[rng() % 3];
    const long m = static_cast<long>(rng() % 4000) - 2000;
    if (m == 0 || (m > 0 && is_perfect_square(Int(m)))) continue;
    const PadicSquareInfo info = padic_square_exists(m, p);
    if (!info.exists) continue;
    const long k = static_cast<long>(rng() % 5) - 2;
    const QuadIrr alpha = normalize(p, m, 0, 1, k, *sqrt_mod_p(info.unit, p));
    const Expansion ex = expand(alpha, Flavor::browkin, 300);
    if (ex.status != ExpansionStatus::periodic) continue;
    const std::size_t expect = alpha.valuation() < 0 ? 1 : 2;
    v.require(ex.preperiod.size() == expect, "trace zero preperiod: " + ex.text());
    v.require(trace_zero_classify(alpha) == (expect == 1 ? TraceZeroClass::preperiod_1 : TraceZeroClass::preperiod_2),
              "trace zero class");
    ++tz;
  }
  v.require(tz == 1000, "trace-zero corpus has only " + std::to_string(tz));
  done.push_back("trace zero");

  // Browkin expansions of rationals terminate
  for (int i = 0; i < 1000 && v.pass; ++i) {
    const OddPrime& p = primes[rng() % 4];
    const long num = static_cast<long>(rng() % 2000001) - 1000000;
    const long den = 1 + static_cast<long>(rng() % 1000000);
    const Rational q = Rational(num) / Rational(den);
    if (vp(q, p) == kInfiniteValuation) continue;
    const Expansion ex = expand_rational(q, p, Flavor::browkin);
    v.require(ex.status == ExpansionStatus::finite, "rational " + q.get_str() + " not finite");
    v.require(eval_finite(ex.preperiod) == q, "rational " + q.get_str() + " re-evaluates differently");
  }
  done.push_back("rational finiteness");

  // no period 1 or 3 among sqrt(m), |m| <= 2000, p = 5, 7
  int periodic = 0;
  for (unsigned long pv : {5ul, 7ul}) {
    const OddPrime p(pv);
    for (long m = -2000; m <= 2000 && v.pass; ++m) {
      if (m == 0 || (m > 0 && is_perfect_square(Int(m)))) continue;
      const PadicSquareInfo info = padic_square_exists(m, p);
      if (!info.exists) continue;
      const Expansion ex = expand(normalize(p, m, 0, 1, 0, *sqrt_mod_p(info.unit, p)), Flavor::browkin, 1000);
      if (ex.status != ExpansionStatus::periodic) continue;
      ++periodic;
      v.require(ex.period->size() != 1 && ex.period->size() != 3,
                "period " + std::to_string(ex.period->size()) + " for m = " + std::to_string(m));
    }
  }
  done.push_back("period 1/3 scan (" + std::to_string(periodic) + " periodic)");

  if (v.pass) {
    for (const auto& d : done) v.detail += (v.detail.empty() ? "" : ", ") + d;
    v.detail += ", " + fmt_seconds(seconds_since(t0));
  }
  return v;
}

// ------------------------------------------------------------------ 11

Verdict criterion11() {
  Verdict v;
  const OddPrime p(5);
  for (long h = 1; h <= 3; ++h) {
    const Expansion ex = expand(ruban_family(p, h), Flavor::ruban);
    const std::string ph = pw(5, static_cast<unsigned long>(h)).get_str();
    v.require(ex.text() == "[1/" + ph + ", (2/" + ph + ")*]", "h = " + std::to_string(h) + ": " + ex.text());
  }
  int probes = 0;
  for (long m = 2; probes < 10 && m < 1000; ++m) {
    if (m % 5 == 0 || is_perfect_square(Int(m)) || legendre(Int(m), p) != 1) continue;
    const RubanProbe r = ruban_nonperiodic_probe(p, m, 1, 2000);
    const std::string at = "5 sqrt(" + std::to_string(m) + ")";
    v.require(r.status == ExpansionStatus::open && r.steps == 2000, at + ": period found");
    v.require(r.formula_matches, at + ": alpha_2 formula");
    v.require(r.both_embeddings_negative, at + ": alpha_2 sign witness");
    ++probes;
  }
  v.require(probes == 10, "only " + std::to_string(probes) + " probes");
  if (v.pass) v.detail = "family h = 1..3 exact; 10 probes open at 2000 steps with negative alpha_2";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  const std::function<Verdict()> criteria[] = {criterion1, criterion2, criterion3, criterion4,
                                               criterion5, criterion6, criterion7, criterion8,
                                               criterion9, criterion10, criterion11};
  int only = 0;
  if (argc > 1) {
    only = std::atoi(argv[1]);
    if (only < 1 || only > 11) {
      std::cerr << "usage: acceptance [1..11]\n";
      return 2;
    }
  }
  int failures = 0;
  for (int i = 1; i <= 11; ++i) {
    if (only != 0 && i != only) continue;
    Verdict v;
    try {
      v = criteria[i - 1]();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failures += !v.pass;
    std::cout << "criterion " << i << ": " << (v.pass ? "PASS" : "FAIL");
    if (!v.detail.empty()) std::cout << " (" << v.detail << ")";
    std::cout << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
