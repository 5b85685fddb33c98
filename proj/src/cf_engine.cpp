#include "padiccf/cf_engine.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

namespace padiccf {
namespace {

struct StateKey {
  Int b, c;
  long k;
  bool operator==(const StateKey&) const = default;
};

std::size_t hash_int(const Int& x) {
  std::size_t h = static_cast<std::size_t>(mpz_getlimbn(x.get_mpz_t(), 0));
  h ^= static_cast<std::size_t>(mpz_size(x.get_mpz_t())) * 0x9e3779b97f4a7c15ull;
  return h ^ (sgn(x) < 0 ? 0x7f4a7c159e3779b9ull : 0);
}

struct StateHash {
  std::size_t operator()(const StateKey& s) const {
    std::size_t h = hash_int(s.b);
    h = h * 1000003u ^ hash_int(s.c);
    return h * 1000003u ^ std::hash<long>{}(s.k);
  }
};

void fill_bookkeeping(Expansion& ex, long k0) {
  const std::size_t n = ex.emitted();
  ex.k.assign(n == 0 ? 1 : n, 0);
  ex.k[0] = k0;
  for (std::size_t i = 1; i < n; ++i) ex.k[i] = ex.quotient(i).e();
  ex.K.assign(ex.k.size(), 0);
  for (std::size_t i = 1; i < ex.k.size(); ++i) ex.K[i] = ex.K[i - 1] + ex.k[i];
}

void join(std::ostringstream& os, const QuotientList& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? ", " : "") << xs[i].str();
}

}  // namespace

std::string to_string(Flavor f) { return f == Flavor::browkin ? "browkin" : "ruban"; }

Flavor flavor_from_string(const std::string& s) {
  if (s == "browkin") return Flavor::browkin;
  if (s == "ruban") return Flavor::ruban;
  throw std::invalid_argument("unknown flavor: " + s);
}

std::string to_string(ExpansionStatus s) {
  switch (s) {
    case ExpansionStatus::finite: return "finite";
    case ExpansionStatus::periodic: return "periodic";
    case ExpansionStatus::open: return "open";
  }
  return "open";
}

PartialQuotient s_function(const QuadIrr& alpha, Flavor flavor) {
  const OddPrime& p = alpha.p();
  const long k = alpha.k();
  if (k < 0) return LaurentInt(0, 0, p);
  const auto n = static_cast<unsigned long>(k + 1);
  Int r = alpha.digits(k, n);
  if (flavor == Flavor::browkin) r = centered_residue(r, n, p);
  return LaurentInt(std::move(r), k, p);
}

PartialQuotient s_browkin(const QuadIrr& alpha) { return s_function(alpha, Flavor::browkin); }
PartialQuotient s_ruban(const QuadIrr& alpha) { return s_function(alpha, Flavor::ruban); }

PartialQuotient s_rational(const Rational& q, const OddPrime& p, Flavor flavor) {
  if (q == 0) return LaurentInt(0, 0, p);
  const long v = vp(q, p);
  if (v >= 1) return LaurentInt(0, 0, p);
  const auto k = static_cast<unsigned long>(-v);
  const Rational x = q * Rational(p.pow(k));
  const Int m = p.pow(k + 1);
  Int den = x.get_den();
  Int r = x.get_num() * mod_inverse(den % m, m);
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
  if (flavor == Flavor::browkin) r = centered_residue(r, k + 1, p);
  return LaurentInt(std::move(r), static_cast<long>(k), p);
}

StepResult step(const QuadIrr& alpha, Flavor flavor) {
  const OddPrime& p = alpha.p();
  PartialQuotient a = s_function(alpha, flavor);
  Int b_next = -alpha.b();
  if (!a.is_zero())
    b_next += a.tilde() * p.pow(static_cast<unsigned long>(alpha.k() - a.e())) * alpha.c();
  Int N = alpha.delta() - b_next * b_next;
  if (N == 0) throw std::logic_error("step: alpha - a vanished (rational state)");
  mpz_divexact(N.get_mpz_t(), N.get_mpz_t(), alpha.c().get_mpz_t());
  long v = 0;
  Int c_next = strip_p(N, p, &v);
  return {std::move(a), alpha.with_state(std::move(b_next), std::move(c_next), v - alpha.k())};
}

std::size_t Expansion::emitted() const { return preperiod.size() + (period ? period->size() : 0); }

const PartialQuotient& Expansion::quotient(std::size_t i) const {
  if (i < preperiod.size()) return preperiod[i];
  if (period && !period->empty()) return (*period)[(i - preperiod.size()) % period->size()];
  throw std::out_of_range("Expansion::quotient: index past the end");
}

QuotientList Expansion::prefix(std::size_t n) const {
  QuotientList out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(quotient(i));
  return out;
}

std::string Expansion::text() const {
  std::ostringstream os;
  os << '[';
  join(os, preperiod);
  if (status == ExpansionStatus::periodic && period) {
    if (!preperiod.empty()) os << ", ";
    os << '(';
    join(os, *period);
    os << ")*";
  } else if (status == ExpansionStatus::open) {
    os << (preperiod.empty() ? "..." : ", ...");
  }
  os << ']';
  return os.str();
}

Expansion periodic_expansion(const OddPrime& p, Flavor flavor, QuotientList preperiod, QuotientList period,
                             long k0) {
  if (period.empty()) throw std::invalid_argument("periodic_expansion: empty period");
  Expansion ex;
  ex.p = p.value();
  ex.flavor = flavor;
  ex.status = ExpansionStatus::periodic;
  ex.preperiod = std::move(preperiod);
  ex.period = std::move(period);
  fill_bookkeeping(ex, k0);
  return ex;
}

Expansion listed_expansion(const OddPrime& p, Flavor flavor, ExpansionStatus status, QuotientList quotients,
                           std::optional<QuotientList> period, long k0) {
  if (status == ExpansionStatus::periodic) {
    if (!period) throw std::invalid_argument("listed_expansion: periodic status needs a period");
    return periodic_expansion(p, flavor, std::move(quotients), std::move(*period), k0);
  }
  if (period) throw std::invalid_argument("listed_expansion: only periodic expansions carry a period");
  Expansion ex;
  ex.p = p.value();
  ex.flavor = flavor;
  ex.status = status;
  ex.preperiod = std::move(quotients);
  fill_bookkeeping(ex, k0);
  return ex;
}

Expansion expand(const QuadIrr& alpha, Flavor flavor, std::size_t max_steps) {
  if (max_steps == 0) throw std::invalid_argument("expand: max_steps must be >= 1");
  Expansion ex;
  ex.p = alpha.p().value();
  ex.flavor = flavor;
  std::unordered_map<StateKey, std::size_t, StateHash> seen;
  QuotientList qs;
  QuadIrr cur = alpha;
  for (std::size_t i = 0;; ++i) {
    auto [it, fresh] = seen.try_emplace(StateKey{cur.b(), cur.c(), cur.k()}, i);
    if (!fresh) {
      const std::size_t j = it->second;
      ex.status = ExpansionStatus::periodic;
      ex.preperiod.assign(qs.begin(), qs.begin() + static_cast<long>(j));
      ex.period = QuotientList(qs.begin() + static_cast<long>(j), qs.end());
      break;
    }
    if (i == max_steps) {
      ex.status = ExpansionStatus::open;
      ex.preperiod = std::move(qs);
      break;
    }
    auto next = step(cur, flavor);
    qs.push_back(std::move(next.quotient));
    cur = std::move(next.next);
  }
  fill_bookkeeping(ex, -alpha.valuation());
  return ex;
}

Expansion expand_rational(const Rational& q_in, const OddPrime& p, Flavor flavor, std::size_t max_steps) {
  if (max_steps == 0) throw std::invalid_argument("expand_rational: max_steps must be >= 1");
  Rational q = q_in;
  q.canonicalize();
  Expansion ex;
  ex.p = p.value();
  ex.flavor = flavor;
  std::map<Rational, std::size_t> seen;
  QuotientList qs;
  Rational x = q;
  bool done = false;
  for (std::size_t i = 0; i < max_steps; ++i) {
    auto [it, fresh] = seen.try_emplace(x, i);
    if (!fresh) {
      ex.status = ExpansionStatus::periodic;
      ex.preperiod.assign(qs.begin(), qs.begin() + static_cast<long>(it->second));
      ex.period = QuotientList(qs.begin() + static_cast<long>(it->second), qs.end());
      done = true;
      break;
    }
    PartialQuotient a = s_rational(x, p, flavor);
    const Rational d = x - a.value();
    qs.push_back(std::move(a));
    if (d == 0) {
      ex.status = ExpansionStatus::finite;
      ex.preperiod = std::move(qs);
      done = true;
      break;
    }
    x = 1 / d;
  }
  if (!done) {
    if (flavor == Flavor::browkin)
      throw std::logic_error("expand_rational: Browkin expansion of " + q.get_str() +
                             " did not terminate within max_steps");
    ex.status = ExpansionStatus::open;
    ex.preperiod = std::move(qs);
  }
  fill_bookkeeping(ex, q == 0 ? 0 : -vp(q, p));
  return ex;
}

ConvergentTable::ConvergentTable(QuotientList quotients) : quotients_(std::move(quotients)) {
  if (!quotients_.empty()) p_ = quotients_.front().prime();
  const OddPrime p(p_);
  const std::size_t n = quotients_.size();
  At_.reserve(n + 1);
  Bt_.reserve(n + 1);
  At_.push_back(1);
  Bt_.push_back(0);
  Kp_.push_back(0);
  K_.push_back(0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = quotients_[i];
    if (a.prime() != p_) throw std::invalid_argument("ConvergentTable: mixed primes");
    if (i == 0) {
      At_.push_back(a.tilde());
      Bt_.push_back(1);
      Kp_.push_back(a.e());
      K_.push_back(0);
      continue;
    }
    const long ex = a.e() + quotients_[i - 1].e();
    const Int shift = p.pow(static_cast<unsigned long>(ex));
    // Row i+1 is index i; row i-1 is index i-2.
    At_.push_back(a.tilde() * At_[i] + shift * At_[i - 1]);
    Bt_.push_back(a.tilde() * Bt_[i] + shift * Bt_[i - 1]);
    Kp_.push_back(Kp_[i] + a.e());
    K_.push_back(K_[i] + a.e());
  }
  A_.reserve(n + 1);
  B_.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    A_.emplace_back(At_[i], Kp_[i], p);
    B_.emplace_back(Bt_[i], K_[i], p);
  }
}

Rational ConvergentTable::convergent(long n) const {
  const Rational den = B(n).value();
  if (den == 0) throw std::domain_error("convergent: B_n = 0");
  return A(n).value() / den;
}

ConvergentTable convergents(std::span<const PartialQuotient> cf) {
  return ConvergentTable(QuotientList(cf.begin(), cf.end()));
}

Rational eval_finite(std::span<const PartialQuotient> cf) {
  if (cf.empty()) throw std::invalid_argument("eval_finite: empty list");
  Rational x = cf.back().value();
  for (std::size_t i = cf.size() - 1; i-- > 0;) {
    if (x == 0) throw std::domain_error("eval_finite: division by zero");
    x = cf[i].value() + 1 / x;
  }
  return x;
}

QuotientList leading_quotients(const QuadIrr& alpha, Flavor flavor, std::size_t count) {
  QuotientList out;
  out.reserve(count);
  QuadIrr cur = alpha;
  for (std::size_t i = 0; i < count; ++i) {
    auto next = step(cur, flavor);
    out.push_back(std::move(next.quotient));
    cur = std::move(next.next);
  }
  return out;
}

PeriodicLimit periodic_limit(std::span<const PartialQuotient> preperiod,
                             std::span<const PartialQuotient> period, const OddPrime& p, Flavor flavor) {
  if (period.empty()) throw std::invalid_argument("periodic_limit: empty period");
  const auto N = static_cast<long>(period.size());
  const ConvergentTable tail = convergents(period);
  // B_{N-1} beta^2 - (A_{N-1} - B_{N-2}) beta - A_{N-2} = 0.
  const Rational qa = tail.B(N - 1).value();
  const Rational qb = -(tail.A(N - 1).value() - tail.B(N - 2).value());
  const Rational qc = -tail.A(N - 2).value();

  // beta = (x0 + x1 alpha) / (y0 + y1 alpha) through the preperiod.
  const auto j = static_cast<long>(preperiod.size());
  const ConvergentTable head = convergents(preperiod);
  auto P = [&](long n) { return n < -1 ? Rational(0) : head.A(n).value(); };
  auto Q = [&](long n) { return n < -1 ? Rational(1) : head.B(n).value(); };
  const Rational x0 = P(j - 2), x1 = -Q(j - 2), y0 = -P(j - 1), y1 = Q(j - 1);

  Rational cu = qa * x1 * x1 + qb * x1 * y1 + qc * y1 * y1;
  Rational cv = 2 * qa * x0 * x1 + qb * (x0 * y1 + x1 * y0) + 2 * qc * y0 * y1;
  Rational cw = qa * x0 * x0 + qb * x0 * y0 + qc * y0 * y0;
  if (cu == 0) throw std::domain_error("periodic_limit: degenerate (linear) fixed-point equation");

  Int L;
  mpz_lcm(L.get_mpz_t(), cu.get_den_mpz_t(), cv.get_den_mpz_t());
  mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), cw.get_den_mpz_t());
  Int u = Rational(cu * L).get_num(), v = Rational(cv * L).get_num(), w = Rational(cw * L).get_num();
  Int g;
  mpz_gcd(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), w.get_mpz_t());
  if (u < 0) g = -g;
  u /= g;
  v /= g;
  w /= g;

  const Int disc = v * v - 4 * u * w;
  if (is_perfect_square(disc)) throw std::domain_error("periodic_limit: rational limit");
  const PadicSquareInfo info = padic_square_exists(disc, p);
  if (!info.exists) throw std::domain_error("periodic_limit: discriminant has no square root in Q_p");
  const auto r = sqrt_mod_p(info.unit, p);
  if (!r) throw std::domain_error("periodic_limit: discriminant has no square root in Q_p");

  QuotientList expected(preperiod.begin(), preperiod.end());
  for (int rep = 0; rep < 2; ++rep) expected.insert(expected.end(), period.begin(), period.end());

  for (unsigned long br : {*r, p.value() - *r}) {
    QuadIrr cand = normalize(p, disc, -v, 2 * u, 0, br);
    try {
      if (leading_quotients(cand, flavor, expected.size()) == expected) return {u, v, w, std::move(cand)};
    } catch (const std::logic_error&) {
    }
  }
  throw std::domain_error("periodic_limit: no root branch reproduces the given expansion");
}

AuditReport valuation_audit(const QuadIrr& alpha, const Expansion& expansion, const ConvergentTable& table) {
  AuditReport rep;
  const SqrtCache& root = *alpha.root();
  const OddPrime& p = alpha.p();
  const Surd a = alpha.surd();
  const long known = expansion.period ? table.size() : static_cast<long>(expansion.emitted());
  const long last = std::min<long>(table.size(), known) - 1;
  const bool check_a = table.size() > 0 && !table.quotients().front().is_zero();
  auto fail = [&](long n, std::string what) {
    rep.clean = false;
    rep.first_violation = n;
    rep.detail = std::move(what);
  };
  for (long n = 0; n < last; ++n) {
    const long k_next = expansion.quotient(static_cast<std::size_t>(n + 1)).e();
    const long K = table.K(n);
    const auto& An = table.A(n);
    if (check_a && !An.is_zero() && vp(An.value(), p) != -table.Kprime(n)) {
      fail(n, "v_p(A_n) != -K'_n");
      return rep;
    }
    if (vp(table.B(n).value(), p) != -K) {
      fail(n, "v_p(B_n) != -K_n");
      return rep;
    }
    const Surd diff = surd_sub(Surd{table.convergent(n), 0}, a);
    const long got = vp_surd(diff, root);
    if (got != 2 * K + k_next) {
      fail(n, "v_p(Q_n - alpha) = " + std::to_string(got) + ", expected " + std::to_string(2 * K + k_next));
      return rep;
    }
    if (got < 2 * n + 1) {
      fail(n, "v_p(Q_n - alpha) below 2n+1");
      return rep;
    }
    ++rep.checked;
  }
  return rep;
}

}  // namespace padiccf
