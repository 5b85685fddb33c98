#include "padiccf/constructor.hpp"

#include <algorithm>

#include "padiccf/factor.hpp"

namespace padiccf {
namespace {

bool in_Y(const LaurentInt& a, const OddPrime& p) {
  return 2 * abs(a.tilde()) < p.pow(static_cast<unsigned long>(a.e() + 1));
}

LaurentInt negate(const LaurentInt& a) { return LaurentInt(-a.tilde(), a.e(), OddPrime(a.prime())); }

Int sign_pow(long n) { return n % 2 == 0 ? Int(1) : Int(-1); }

Int exact_div(const Int& num, const Int& den, const char* what) {
  if (den == 0 || num % den != 0) throw std::logic_error(std::string("construct: ") + what + " is not integral");
  return num / den;
}

}  // namespace

std::string to_string(NiceStatus s) {
  switch (s) {
    case NiceStatus::nice: return "nice";
    case NiceStatus::not_nice: return "not_nice";
    case NiceStatus::indeterminate: return "indeterminate";
  }
  return "?";
}

bool positive_shortcut(const QuotientList& cf) {
  if (cf.empty()) return false;
  for (const auto& a : cf)
    if (a.sign() <= 0) return false;
  const Rational last = cf.back().value();
  return last * static_cast<long>(cf.back().prime()) > 4;
}

NiceCertificate is_nice(const QuotientList& cf, const DlogBudget& budget) {
  if (cf.empty()) throw std::invalid_argument("is_nice: empty list");
  const OddPrime p(cf.front().prime());
  for (std::size_t i = 0; i < cf.size(); ++i) {
    if (cf[i].prime() != p.value()) throw std::invalid_argument("is_nice: mixed primes");
    if (!in_Y(cf[i], p)) throw std::invalid_argument("is_nice: a_" + std::to_string(i) + " is not in Y");
    if (i >= 1 && cf[i].e() < 1)
      throw std::invalid_argument("is_nice: a_" + std::to_string(i) + " must have a p in its denominator");
  }

  NiceCertificate cert;
  cert.p = p.value();
  cert.cf = cf;
  const long t = cert.t();
  const ConvergentTable table(cf);
  cert.Atilde_last = table.Atilde(t - 1);
  cert.Btilde_last = table.Btilde(t - 1);

  const auto& a0 = cf.front();
  cert.cond_a = a0.e() >= 1 && 4 * abs(a0.tilde()) < p.pow(static_cast<unsigned long>(a0.e() + 1));
  if (!cert.cond_a) {
    cert.failed = 'a';
    cert.detail = a0.e() < 1 ? "|a_0|_p <= 1" : "|a_0| >= p/4";
    return cert;
  }

  cert.shortcut = positive_shortcut(cf);
  const Rational num = table.A(t - 1).value(), den = table.A(t - 2).value();
  if (den == 0) {
    cert.cond_b = true;
    cert.detail = "A_{t-2} = 0";
  } else {
    cert.ratio = num / den;
    cert.cond_b = abs(cert.ratio) * static_cast<long>(p.value()) > 4;
  }
  if (cert.shortcut && !cert.cond_b) throw std::logic_error("is_nice: positivity shortcut contradicted");
  if (!cert.cond_b) {
    cert.failed = 'b';
    cert.detail = "|A_{t-1}/A_{t-2}| = " + Rational(abs(cert.ratio)).get_str() + " <= 4/p";
    return cert;
  }

  const Int M = cert.Atilde_last * cert.Atilde_last;
  const Int Bt = abs(cert.Btilde_last);
  if (Bt == 0) {
    cert.failed = 'c';
    cert.detail = "B~_{t-1} = 0";
    return cert;
  }
  std::vector<Int> qs;
  for (const Int& d : divisors(Bt)) {
    qs.push_back(Bt * d);
    qs.push_back(-Bt * d);
  }
  bool undecided = false;
  for (const Int& q : qs) {
    if (M == 1 || (q - 1) % M == 0) {
      cert.q = q;
      cert.omega0 = 0;
      cert.cond_c = true;
      break;
    }
    const DlogResult r = discrete_log(Int(p.value()), q, M, budget);
    if (r.status == DlogStatus::found) {
      cert.q = q;
      cert.omega0 = *r.value;
      if (r.subgroup_order) cert.order_s = r.subgroup_order;
      cert.cond_c = true;
      break;
    }
    if (r.status == DlogStatus::budget_exceeded) undecided = true;
  }
  if (cert.cond_c) {
    cert.status = NiceStatus::nice;
    cert.failed.reset();
    return cert;
  }
  cert.failed = 'c';
  if (undecided) {
    cert.status = NiceStatus::indeterminate;
    cert.detail = "discrete log over budget for some q";
  } else {
    cert.detail = "no q with B~ | q | B~^2 lies in <p> mod A~_{t-1}^2";
  }
  return cert;
}

ConstructionResult construct(const NiceCertificate& cert, unsigned long h, const ConstructOptions& options) {
  if (!cert.nice()) throw std::invalid_argument("construct: certificate is not nice");
  const OddPrime p(cert.p);
  const QuotientList& cf = cert.cf;
  const long t = cert.t();
  const ConvergentTable table(cf);
  if (table.Atilde(t - 1) != cert.Atilde_last || table.Btilde(t - 1) != cert.Btilde_last)
    throw std::invalid_argument("construct: certificate does not match its list");

  ConstructionResult res;
  res.p = p.value();
  res.t = t;
  res.h = h;
  res.k0 = cf.front().e();
  res.q = cert.q;
  const Int& A1 = cert.Atilde_last;
  const Int& B1 = cert.Btilde_last;
  const Int& A2 = table.Atilde(t - 2);
  const Int& B2 = table.Btilde(t - 2);
  const Int M = A1 * A1;
  const Int P(p.value());

  if (M != 1) {
    Int r;
    const Int q_mod = ((cert.q % M) + M) % M;
    mpz_powm(r.get_mpz_t(), P.get_mpz_t(), cert.omega0.get_mpz_t(), M.get_mpz_t());
    if (r != q_mod) throw std::invalid_argument("construct: q is not p^omega0 mod A~_{t-1}^2");
  }
  res.order_s = cert.order_s ? *cert.order_s : (M == 1 ? Int(1) : mult_order(P, M));

  const long k_prev = cf.back().e();
  const Int floor = Int(res.k0 + 2 * table.K(t - 1));
  Int omega = cert.omega0;
  if (omega <= floor) omega += ((floor - omega) / res.order_s + 1) * res.order_s;

  const Int q_over_B = exact_div(cert.q, B1, "q / B~_{t-1}");
  unsigned long admissible = 0;
  for (;; omega += res.order_s) {
    if (omega > Int(options.max_omega))
      throw ResourceLimit("construct: omega " + omega.get_str() + " exceeds the cap " +
                          std::to_string(options.max_omega));
    const long kt = static_cast<long>(Int(omega - floor).get_si());
    const Int shift = p.pow(static_cast<unsigned long>(kt + k_prev));
    const Int c_tilde = exact_div(-shift * A2 + sign_pow(t - 1) * q_over_B, A1, "c~");
    if (4 * abs(c_tilde) >= p.pow(static_cast<unsigned long>(kt + 1))) continue;
    if (admissible++ < h) continue;
    res.omega = omega;
    res.kt = kt;
    res.c_tilde = c_tilde;
    break;
  }

  const Int pw = p.pow(res.omega.get_ui());
  res.b = exact_div(pw - cert.q, M, "b");
  if (mpz_divisible_ui_p(Int(2 * res.c_tilde).get_mpz_t(), p.value()))
    throw std::logic_error("construct: p divides 2c~");
  res.a_t = LaurentInt(2 * res.c_tilde, res.kt, p);
  const Int q1 = exact_div(B1 * B1, cert.q, "q1");
  res.m = -res.b * q1;
  if (res.m == 0 || mpz_divisible_ui_p(res.m.get_mpz_t(), p.value()))
    throw std::logic_error("construct: p divides m");
  const PadicSquareInfo info = padic_square_exists(res.m, p);
  if (!info.exists || is_perfect_square(res.m)) throw std::logic_error("construct: sqrt(m) is not an irrational of Q_p");

  const Int shift = p.pow(static_cast<unsigned long>(res.kt + k_prev));
  res.eq_A = res.c_tilde * A1 + shift * A2 == sign_pow(t - 1) * q_over_B;
  res.eq_B = res.c_tilde * B1 + shift * B2 == sign_pow(t) * res.b * A1;
  QuotientList full = cf;
  full.push_back(res.a_t);
  const ConvergentTable ft(full);
  res.eq_m = B1 * (ft.Btilde(t) + shift * B2) == res.m * A1 * (ft.Atilde(t) + shift * A2);

  QuotientList period(cf.begin() + 1, cf.end());
  period.push_back(res.a_t);
  for (long i = t - 1; i >= 1; --i) period.push_back(cf[static_cast<std::size_t>(i)]);
  period.push_back(LaurentInt(2 * cf.front().tilde(), res.k0, p));
  res.expansion = periodic_expansion(p, Flavor::browkin, {cf.front()}, period, res.k0);

  if (!options.verify) {
    res.verified = res.eq_A && res.eq_B && res.eq_m;
    return res;
  }

  try {
    const PeriodicLimit lim = periodic_limit(res.expansion.preperiod, period, p);
    const Int scale = p.pow(static_cast<unsigned long>(2 * res.k0)) * res.m;
    res.limit_ok = lim.v == 0 && -lim.u == lim.w * scale;
  } catch (const std::domain_error&) {
    res.limit_ok = false;
  }

  const unsigned long r = *sqrt_mod_p(res.m, p);
  const std::size_t horizon = static_cast<std::size_t>(4 * t + 8);
  for (unsigned long br : {r, p.value() - r}) {
    const Expansion ex = expand(normalize(p, res.m, 0, res.m, res.k0, br), Flavor::browkin, horizon);
    if (ex.status != ExpansionStatus::periodic || ex.preperiod != res.expansion.preperiod || *ex.period != period)
      continue;
    res.branch = br;
    res.reexpansion_ok = true;
    const Expansion root = expand(normalize(p, res.m, 0, 1, -res.k0, br), Flavor::browkin, horizon);
    const QuotientList head{LaurentInt(0, 0, p), cf.front()};
    res.root_expansion_ok =
        root.status == ExpansionStatus::periodic && root.preperiod == head && *root.period == period;
    break;
  }
  res.verified = res.eq_A && res.eq_B && res.eq_m && res.limit_ok && res.reexpansion_ok && res.root_expansion_ok;
  return res;
}

QuotientList beta(const OddPrime& p, unsigned n, unsigned k) {
  if (n < 1 || k < 1) throw std::invalid_argument("beta: n and k must be positive");
  const LaurentInt unit(1, k, p);
  QuotientList cur{unit, unit};
  for (unsigned level = 1; level < n; ++level) {
    QuotientList next;
    next.reserve(2 * cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) {
      next.push_back(i % 2 == 0 ? cur[i] : negate(cur[i]));
      next.push_back(i % 2 == 0 ? unit : negate(unit));
    }
    cur = std::move(next);
  }
  return cur;
}

Int U_tilde_poly(unsigned n, const Int& X) {
  Int s = 1, x = X;
  for (unsigned j = 1; j <= n; ++j) {
    x *= x;  // X^{2^j}
    s += x;
  }
  return s;
}

Int V_tilde_poly(unsigned n, const Int& X) {
  auto pw = [&](unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), X.get_mpz_t(), e);
    return r;
  };
  Int v = pw(2 * ((1ul << (n - 1)) - 1));
  for (unsigned j = 0; j + 2 <= n; ++j) v -= pw(2 * ((1ul << j) - 1));
  return v;
}

Int S_tilde_poly(unsigned n, const Int& X) {
  if (n == 1) return 1;
  const Int X2 = X * X;
  Int s = X2 * S_tilde_poly(n - 1, X2) - 1 - X2;
  Int x = X2;
  for (unsigned j = 2; j <= n - 1; ++j) {
    x *= x;  // X^{2^j}
    s -= 2 * x;
  }
  return s;
}

namespace {

struct Quad {
  Rational x, y, z, w;
};

Quad beta_recursion(const OddPrime& p, unsigned n, unsigned long k) {
  const Rational pk(p.pow(k));
  if (n == 1) return {1 / (pk * pk) + 1, 1 / pk, 1 / pk, Rational(1)};
  // w tracks B_{2i} = (-1)^i (B*_i - B*_{i-1}), so it pairs with y, not z.
  const Quad prev = beta_recursion(p, n - 1, 2 * k);
  return {prev.x + prev.y, prev.y / pk, -pk * (prev.x - prev.z + prev.y - prev.w), -prev.y + prev.w};
}

Rational over_power(const Int& num, const Int& X, unsigned long e) {
  Int d;
  mpz_pow_ui(d.get_mpz_t(), X.get_mpz_t(), e);
  Rational r(num);
  r /= Rational(d);
  return r;
}

}  // namespace

BetaPolynomials beta_polynomials(const OddPrime& p, unsigned n, unsigned k) {
  if (n < 1 || k < 1) throw std::invalid_argument("beta_polynomials: n and k must be positive");
  BetaPolynomials out;
  const Int X = p.pow(k);
  const unsigned long two_n = 1ul << n;
  out.U_tilde = U_tilde_poly(n, X);
  out.V_tilde = V_tilde_poly(n, X);
  out.S_tilde = S_tilde_poly(n, X);
  out.U = over_power(out.U_tilde, X, two_n);
  out.V = over_power(out.V_tilde, X, two_n - 2);
  out.S = over_power(out.S_tilde, X, two_n - 1);
  out.W = over_power(1, X, two_n - 1);

  const ConvergentTable tab(beta(p, n, k));
  const long last = static_cast<long>(two_n) - 1;
  out.S_matches = out.S == tab.A(last - 1).value();
  out.U_matches = out.U == tab.A(last).value();
  out.V_matches = out.V == tab.B(last - 1).value();
  out.W_matches = out.W == tab.B(last).value();
  out.Btilde_one = tab.Btilde(last) == 1;
  const Quad r = beta_recursion(p, n, k);
  out.recursion_matches = r.x == tab.A(last).value() && r.y == tab.B(last).value() &&
                          r.z == tab.A(last - 1).value() && r.w == tab.B(last - 1).value();
  return out;
}

QuotientList bullet_sequence(const QuotientList& alpha) {
  if (alpha.empty()) throw std::invalid_argument("bullet_sequence: empty list");
  const OddPrime p(alpha.front().prime());
  const long k = alpha.front().e();
  if (k < 1) throw std::invalid_argument("bullet_sequence: a_0 must have denominator p^k, k >= 1");
  QuotientList out;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    const auto& a = alpha[i];
    if (a.prime() != p.value() || a.e() != k)
      throw std::invalid_argument("bullet_sequence: every quotient must have denominator p^k");
    const long j = static_cast<long>(i / 2);
    if (i % 2 == 1) {
      if (a.tilde() != sign_pow(j)) throw std::invalid_argument("bullet_sequence: odd entries must be (-1)^j/p^k");
    } else {
      out.emplace_back(sign_pow(j) * a.tilde(), 2 * k, p);
    }
  }
  return out;
}

CalaVerdict cala_identities(const QuotientList& alpha, const QuotientList& bullet) {
  if (bullet_sequence(alpha) != bullet)
    throw std::invalid_argument("cala_identities: bullet is not the bullet sequence of alpha");
  const OddPrime p(alpha.front().prime());
  const Rational pk(p.pow(static_cast<unsigned long>(alpha.front().e())));
  const ConvergentTable ta(alpha), tb(bullet);
  const long len = ta.size();
  auto A = [&](long n) { return ta.A(n).value(); };
  auto B = [&](long n) { return ta.B(n).value(); };
  auto As = [&](long n) { return tb.A(n).value(); };
  auto Bs = [&](long n) { return tb.B(n).value(); };

  CalaVerdict v;
  auto note = [&](bool ok, bool& flag, long i) {
    if (!ok) {
      flag = false;
      if (!v.first_failure) v.first_failure = i;
    }
  };
  for (long i = 0; 2 * i < len; ++i) {
    const Rational sg(sign_pow(i));
    note(B(2 * i) == sg * (Bs(i) - Bs(i - 1)), v.a, i);
    note(A(2 * i) == sg * pk * (As(i) - As(i - 1) + Bs(i) - Bs(i - 1)), v.d, i);
    ++v.checked;
    if (2 * i + 1 < len) {
      note(B(2 * i + 1) == Bs(i) / pk, v.b, i);
      note(A(2 * i + 1) == As(i) + Bs(i), v.c, i);
      ++v.checked;
    }
  }
  return v;
}

}  // namespace padiccf
