#include <algorithm>
#include <random>

#include "doctest.h"
#include "padiccf/constructor.hpp"

using namespace padiccf;

namespace {

QuotientList qlist(const OddPrime& p, std::initializer_list<const char*> xs) {
  QuotientList out;
  for (const char* x : xs) out.push_back(LaurentInt::from_rational(Rational(x), p));
  return out;
}

Int pw(unsigned long p, unsigned long e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, e);
  return r;
}

}  // namespace

TEST_CASE("niceness of the worked lists") {
  for (unsigned long pv : {3ul, 5ul, 7ul, 11ul}) {
    const OddPrime p(pv);
    const std::string P = std::to_string(pv);
    auto c1 = is_nice(qlist(p, {("1/" + P).c_str(), ("1/" + P).c_str()}));
    CHECK(c1.nice());
    CHECK(c1.Btilde_last == 1);
    CHECK(c1.q == 1);
    CHECK(c1.ratio == Rational(pv * pv + 1, pv));

    const std::string a1 = std::to_string(1 - static_cast<long>(pv)) + "/" + P;
    const std::string a2 = std::to_string(1 + pv) + "/" + P;
    auto c3 = is_nice(qlist(p, {("1/" + P).c_str(), a1.c_str(), a2.c_str()}));
    CHECK(c3.nice());
    CHECK(c3.Btilde_last == 1);
    Rational r3(pv * pv * pv + pv * pv + 1, pv * (pv * pv - pv + 1));
    r3.canonicalize();
    CHECK(c3.ratio == r3);
  }
  for (unsigned long pv : {3ul, 5ul, 7ul}) {
    const OddPrime p(pv);
    const long P = static_cast<long>(pv);
    QuotientList cf{LaurentInt(1, 1, p), LaurentInt(-(P * P * P - 1) / 2, 2, p), LaurentInt(1, 1, p),
                    LaurentInt(-2, 2, p), LaurentInt(1, 1, p)};
    auto c5 = is_nice(cf);
    CHECK(c5.nice());
    CHECK(c5.Btilde_last == -1);
    const long p3 = P * P * P, p6 = p3 * p3;
    Rational r5(4 * p6 - 4 * p3 - 2, P * (p6 - 5 * p3 - 2));
    r5.canonicalize();
    CHECK(c5.ratio == r5);
  }
}

TEST_CASE("niceness failures name the condition") {
  const OddPrime p3(3), p5(5);
  auto big = is_nice(qlist(p5, {"7/5"}));  // 7/5 > 5/4
  CHECK_FALSE(big.nice());
  CHECK(big.failed == 'a');
  auto integral = is_nice(qlist(p5, {"1", "1/5"}));
  CHECK(integral.failed == 'a');
  // t = 1, p = 3: |a_0| < 3/4 forces |a_0| < 4/3
  for (const char* a : {"1/3", "-1/3", "2/9", "4/9", "-4/27"}) {
    auto c = is_nice(qlist(p3, {a}));
    CHECK_FALSE(c.nice());
    CHECK(c.failed == 'b');
  }
  CHECK_THROWS_AS(is_nice(qlist(p5, {"1/5", "3"})), std::invalid_argument);   // e(a_1) = 0
  CHECK_THROWS_AS(is_nice(qlist(p5, {"1/5", "13/5"})), std::invalid_argument);  // outside Y
  CHECK_THROWS_AS(is_nice({}), std::invalid_argument);
}

TEST_CASE("condition c via discrete logs") {
  const OddPrime p3(3);
  // [1/3, 110/81]: A~_1 = 353, B~_1 = 110, q = 110 = 3^31861 mod 353^2
  auto c = is_nice(qlist(p3, {"1/3", "110/81"}));
  REQUIRE(c.nice());
  CHECK(c.Atilde_last == 353);
  CHECK(c.q == 110);
  CHECK(c.omega0 == 31861);
  CHECK(positive_shortcut(c.cf));

  // a budget too small to decide
  DlogBudget tiny;
  tiny.brute_force_below = 10;
  tiny.max_table = 4;
  auto u = is_nice(qlist(p3, {"1/3", "110/81"}), tiny);
  CHECK(u.status == NiceStatus::indeterminate);
  CHECK(u.failed == 'c');

  // brute-force oracle for condition c on random two-term lists
  std::mt19937_64 rng(3);
  const OddPrime p5(5);
  int checked = 0;
  for (int i = 0; i < 200; ++i) {
    const long a1 = 1 + static_cast<long>(rng() % 62);
    if (a1 % 5 == 0) continue;
    QuotientList cf{LaurentInt(1, 1, p5), LaurentInt(rng() % 2 ? a1 : -a1, 2, p5)};
    auto cert = is_nice(cf);
    if (!cert.cond_b) continue;
    const Int M = cert.Atilde_last * cert.Atilde_last, B = abs(cert.Btilde_last);
    // all powers of 5 mod M
    std::vector<Int> powers;
    Int x = 1;
    do {
      powers.push_back(x);
      x = (x * 5) % M;
    } while (x != 1 && M != 1);
    bool expect = false;
    for (Int q = B; q <= B * B && !expect; q += B) {
      if ((B * B) % q != 0) continue;
      for (const Int& s : {q, Int(-q)}) {
        const Int r = ((s % M) + M) % M;
        for (const Int& w : powers) expect = expect || w == r || M == 1;
      }
    }
    CHECK(cert.nice() == expect);
    ++checked;
  }
  CHECK(checked > 50);
}

TEST_CASE("positive shortcut") {
  const OddPrime p5(5);
  CHECK(positive_shortcut(qlist(p5, {"1/5", "6/5"})));
  CHECK_FALSE(positive_shortcut(qlist(p5, {"6/5", "1/5"})));  // 1/5 < 4/5
  CHECK_FALSE(positive_shortcut(qlist(p5, {"6/5", "-1/5", "11/5"})));
  // [a_0, 1/p^h] with 0 < a_0 < p/4 is nice for every h
  for (const char* a0 : {"1/5", "2/5", "6/5", "3/25", "26/25"}) {
    for (const char* a1 : {"1/5", "1/25", "1/125"}) {
      auto c = is_nice(qlist(p5, {a0, a1}));
      CHECK(c.nice());
    }
  }
}

TEST_CASE("construction, t = 1") {
  const OddPrime p5(5);
  auto cert = is_nice(qlist(p5, {"6/5"}));
  REQUIRE(cert.nice());
  auto r = construct(cert, 0);
  CHECK(r.omega == 6);
  CHECK(r.order_s == 6);
  CHECK(r.b == 434);
  CHECK(r.kt == 5);
  CHECK(r.c_tilde == -2604);
  CHECK(r.a_t.str() == "-5208/3125");
  CHECK(r.m == -434);
  CHECK(r.expansion.text() == "[6/5, (-5208/3125, 12/5)*]");
  CHECK(r.eq_A);
  CHECK(r.eq_B);
  CHECK(r.eq_m);
  CHECK(r.limit_ok);
  CHECK(r.reexpansion_ok);
  CHECK(r.root_expansion_ok);
  CHECK(r.verified);

  // hand algebra: alpha^2 = 1/(25 * -434); 10850 alpha^2 + 1 = 0
  auto lim = periodic_limit(r.expansion.preperiod, *r.expansion.period, p5);
  CHECK(lim.u == 10850);
  CHECK(lim.v == 0);
  CHECK(lim.w == 1);

  // omega = 12, 18: 1/(10 sqrt(-1695421)) and 1/(5 sqrt(-105963812934))
  auto r1 = construct(cert, 1);
  CHECK(r1.omega == 12);
  CHECK(r1.m == Int(-4) * 1695421);
  CHECK(r1.verified);
  auto r2 = construct(cert, 2);
  CHECK(r2.omega == 18);
  CHECK(r2.m == Int("-105963812934"));
  CHECK(r2.verified);
}

TEST_CASE("construction, t = 2") {
  const OddPrime p3(3);
  auto cert = is_nice(qlist(p3, {"1/3", "1/3"}));
  auto r = construct(cert, 0);
  CHECK(r.omega == 20);
  CHECK(r.b == (pw(3, 20) - 1) / 100);
  CHECK(r.b == 34867844);
  CHECK(r.kt == 17);
  CHECK(r.c_tilde == -38742049);
  CHECK(r.m == -34867844);
  CHECK(r.m == Int(-484) * 72041);  // 3 sqrt(m) = 66 sqrt(-72041)
  CHECK(r.a_t == LaurentInt(-77484098, 17, p3));
  CHECK(r.verified);

  // the next two values listed with omega = 40, 60
  auto r1 = construct(cert, 1);
  CHECK(r1.omega == 40);
  CHECK(r1.m == Int(-484) * Int("251191435104482"));
  auto r2 = construct(cert, 2);
  CHECK(r2.m == Int(-484) * Int("875850377587111642857323"));
}

TEST_CASE("construction from [1/3, 110/81]") {
  const OddPrime p3(3);
  auto cert = is_nice(qlist(p3, {"1/3", "110/81"}));
  auto r = construct(cert, 0);
  CHECK(r.order_s == 124256);
  CHECK(r.omega == 31861);
  CHECK(r.kt == 31852);
  CHECK(r.c_tilde == (-pw(3, 31856) - 1) / 353);
  CHECK(r.b == (pw(3, 31861) - 110) / (353 * 353));
  CHECK(r.eq_A);
  CHECK(r.eq_B);
  CHECK(r.eq_m);
  CHECK(r.verified);
}

TEST_CASE("construction: monotone family and caps") {
  const OddPrime p5(5);
  auto cert = is_nice(qlist(p5, {"1/5", "1/5"}));
  Int last_omega = 0, last_m = 0;
  long last_kt = 0;
  for (unsigned long h = 0; h <= 4; ++h) {
    auto r = construct(cert, h);
    CHECK(r.verified);
    CHECK(r.omega > last_omega);
    CHECK(r.kt > last_kt);
    CHECK(abs(r.m) > abs(last_m));
    last_omega = r.omega;
    last_kt = r.kt;
    last_m = r.m;
  }
  ConstructOptions small;
  small.max_omega = 10;
  CHECK_THROWS_AS(construct(cert, 0, small), ResourceLimit);
  auto bad = is_nice(qlist(p5, {"7/5"}));
  CHECK_THROWS_AS(construct(bad, 0), std::invalid_argument);
  auto corrupt = cert;
  corrupt.omega0 = 1;
  CHECK_THROWS_AS(construct(corrupt, 0), std::invalid_argument);
}

TEST_CASE("construction: random nice seeds verify") {
  std::mt19937_64 rng(11);
  int built = 0;
  for (int i = 0; i < 60 && built < 15; ++i) {
    const OddPrime p(i % 2 ? 5 : 7);
    const long P = static_cast<long>(p.value());
    const long a0 = 1 + static_cast<long>(rng() % static_cast<unsigned long>(P * P / 4));
    const long a1 = 1 + static_cast<long>(rng() % static_cast<unsigned long>(P * P / 2 - 1));
    if (a0 % P == 0 || a1 % P == 0) continue;
    QuotientList cf{LaurentInt(a0, 1, p), LaurentInt(rng() % 2 ? a1 : -a1, 1, p)};
    NiceCertificate cert = is_nice(cf);
    if (!cert.nice()) continue;
    ConstructOptions opt;
    opt.max_omega = 5000;
    try {
      auto r = construct(cert, 0, opt);
      CHECK(r.verified);
      CHECK(r.expansion.period->size() == 4u);
      ++built;
    } catch (const ResourceLimit&) {
    }
  }
  CHECK(built >= 5);
}

TEST_CASE("beta family") {
  const OddPrime p5(5);
  CHECK(beta(p5, 1, 1) == qlist(p5, {"1/5", "1/5"}));
  CHECK(beta(p5, 2, 1) == qlist(p5, {"1/5", "1/5", "-1/5", "-1/5"}));
  CHECK(beta(p5, 2, 2) == qlist(p5, {"1/25", "1/25", "-1/25", "-1/25"}));
  CHECK(beta(p5, 3, 1) == qlist(p5, {"1/5", "1/5", "-1/5", "-1/5", "-1/5", "1/5", "1/5", "-1/5"}));
  CHECK_THROWS(beta(p5, 0, 1));

  CHECK(S_tilde_poly(1, 5) == 1);
  CHECK(S_tilde_poly(2, 5) == -1);
  CHECK(S_tilde_poly(2, 11) == -1);

  for (unsigned long pv : {3ul, 5ul, 7ul}) {
    const OddPrime p(pv);
    for (unsigned k = 1; k <= 3; ++k) {
      for (unsigned n = 1; n <= 6; ++n) {
        const auto b = beta(p, n, k);
        REQUIRE(b.size() == (1u << n));
        // (1 + p^{2k} + p^{4k} + p^{8k} + ... + p^{2^n k}) / p^k
        const Int X = p.pow(k);
        Rational expect(U_tilde_poly(n, X));
        expect /= Rational(X);
        CHECK(eval_finite(b) == expect);
        const auto poly = beta_polynomials(p, n, k);
        CHECK(poly.all());
        CHECK(cala_identities(b, bullet_sequence(b)).holds());
        if (n <= 5) CHECK(is_nice(b).nice());
        if (n >= 3) {
          // S~ = -(1 + 2 * sum of even powers), degree 3*2^{n-2} - 2
          const Int s = -poly.S_tilde;
          CHECK(s % 2 == 1);
          CHECK(s < 2 * pw(pv, 3ul * k << (n - 2)));
        }
      }
    }
  }
}

TEST_CASE("bullet identities on random interleaved lists") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const OddPrime p(trial % 3 == 0 ? 3 : (trial % 3 == 1 ? 5 : 7));
    const long k = 1 + static_cast<long>(rng() % 2);
    const long half = static_cast<long>(p.pow(static_cast<unsigned long>(k + 1)).get_si() / 2);
    const std::size_t len = 1 + rng() % 12;
    QuotientList cf;
    for (std::size_t i = 0; i < len; ++i) {
      if (i % 2 == 1) {
        cf.emplace_back((i / 2) % 2 ? -1 : 1, k, p);
        continue;
      }
      long x = 0;
      while (x % static_cast<long>(p.value()) == 0)
        x = static_cast<long>(rng() % static_cast<unsigned long>(2 * half + 1)) - half;
      cf.emplace_back(x, k, p);
    }
    auto v = cala_identities(cf, bullet_sequence(cf));
    CHECK(v.holds());
    CHECK(v.checked == static_cast<long>(len));
  }
  const OddPrime p5(5);
  CHECK_THROWS_AS(bullet_sequence(qlist(p5, {"1/5", "2/5"})), std::invalid_argument);
  CHECK_THROWS_AS(bullet_sequence(qlist(p5, {"1/5", "1/25"})), std::invalid_argument);
  auto b = beta(p5, 2, 1);
  CHECK_THROWS_AS(cala_identities(b, beta(p5, 1, 1)), std::invalid_argument);
}

TEST_CASE("closed-form families") {
  struct Case {
    unsigned long p;
    long t;
  };
  for (const Case c : {Case{3, 2}, Case{5, 2}, Case{5, 3}, Case{7, 3}, Case{7, 4}, Case{11, 3}}) {
    const OddPrime p(c.p);
    for (int variant = 1; variant <= 3; ++variant) {
      if (variant > 1 && (c.p < 5 || c.t < 3)) {
        CHECK_THROWS_AS(family_section6(variant, p, c.t), std::domain_error);
        continue;
      }
      auto r = family_section6(variant, p, c.t);
      CHECK(r.expansion_matches);
      CHECK(r.matrix_route_matches);
      CHECK(r.charpoly_matches);
      CHECK(r.verified());
      REQUIRE(r.value);
      // the limit of the claimed list equals the family value on the matched branch
      auto lim = periodic_limit(r.claimed.preperiod, *r.claimed.period, p);
      const Surd x = lim.value.surd(), y = r.value->surd();
      CHECK(x.r == y.r);
      CHECK(x.s * x.s * Rational(lim.value.delta()) == y.s * y.s * Rational(r.value->delta()));
      const long shift = std::max(lim.value.k(), r.value->k());
      CHECK(lim.value.digits(shift, 40) == r.value->digits(shift, 40));
      CHECK(r.literal_quotient == (variant == 3 ? CheckStatus::indeterminate : CheckStatus::pass));
    }
  }
  auto v1 = family_section6(1, OddPrime(3), 2);
  CHECK(v1.claimed.text() == "[4/3, (-2/3, -1/3, 2/3, -1/3)*]");
  CHECK(v1.delta == -80);
  // x^2 + 2(2/3^4 - 1)x + 1
  CHECK(v1.trace == Rational(-2) * (Rational(2, 81) - 1));
  CHECK(v1.det == 1);
  auto v3 = family_section6(3, OddPrime(5), 3);
  CHECK(v3.claimed.preperiod.front().str() == "12/5");
  CHECK(v3.literal_note.find("13/5") != std::string::npos);
  CHECK_THROWS_AS(family_section6(4, OddPrime(5), 3), std::domain_error);
  CHECK_THROWS_AS(family_section6(1, OddPrime(5), 1), std::domain_error);
}

TEST_CASE("niceness search") {
  const OddPrime p5(5), p3(3);
  SearchLimits lim;
  lim.num_bound = 10;
  lim.exp_bound = 2;
  auto s1 = nice_search(p5, 1, QuotientPool::all, lim);
  // every [a_0] with 4/5 < |a_0| < 5/4, |a_0|_5 > 1
  std::vector<Rational> expect;
  for (long e = 1; e <= 2; ++e)
    for (long n = 1; n <= 10; ++n) {
      if (n % 5 == 0) continue;
      for (long s : {1, -1}) {
        Rational a(s * n, e == 1 ? 5 : 25);
        if (abs(a) * 5 > 4 && abs(a) * 4 < 5) expect.push_back(a);
      }
    }
  REQUIRE(s1.hits.size() == expect.size());
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(s1.hits[i].certificate.cf.front().value() == expect[i]);

  CHECK(nice_search(p3, 1, QuotientPool::all, lim).hits.empty());

  SearchLimits pos;
  pos.num_bound = 12;
  pos.exp_bound = 2;
  auto s2 = nice_search(p5, 2, QuotientPool::pos, pos);
  CHECK_FALSE(s2.hits.empty());
  // [a_0, 1/5^h] with 0 < a_0 < 5/4 are all found
  std::size_t seen = 0;
  for (const auto& hit : s2.hits)
    if (hit.certificate.cf[1].tilde() == 1) ++seen;
  std::size_t heads = search_pool(p5, 2, 0, QuotientPool::pos, pos).size();
  CHECK(seen == 2 * heads);

  // jobs and cursors do not change the stream
  SearchLimits par = pos;
  par.jobs = 4;
  auto s3 = nice_search(p5, 2, QuotientPool::pos, par);
  REQUIRE(s3.hits.size() == s2.hits.size());
  for (std::size_t i = 0; i < s2.hits.size(); ++i) CHECK(s3.hits[i].index == s2.hits[i].index);
  SearchLimits first = pos;
  first.max_candidates = s2.space_size / 3;
  auto a = nice_search(p5, 2, QuotientPool::pos, first);
  SearchLimits rest = pos;
  rest.cursor = a.next_cursor;
  auto b = nice_search(p5, 2, QuotientPool::pos, rest);
  CHECK(a.hits.size() + b.hits.size() == s2.hits.size());
  CHECK(b.next_cursor == s2.space_size);

  auto c3 = nice_search(p5, 3, QuotientPool::conj3, pos);
  for (const auto& hit : c3.hits) {
    CHECK(hit.certificate.cf[0] == LaurentInt(1, 1, p5));
    CHECK(hit.certificate.cf[1] == LaurentInt(1, 1, p5));
  }
  CHECK_THROWS_AS(pool_from_string("odd"), std::invalid_argument);
}
