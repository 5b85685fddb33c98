#include "padiccf/factor.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace padiccf {
namespace {

constexpr unsigned long kTrialLimit = 1u << 16;

bool probably_prime(const Int& n) { return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0; }

// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
Int pollard_brent(const Int& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    Int y = 2, x, q = 1, g = 1, ys;
    const unsigned long m = 128;
    unsigned long r = 1;
    auto f = [&](const Int& v) {
      Int t = v * v + c;
      mpz_mod(t.get_mpz_t(), t.get_mpz_t(), n.get_mpz_t());
      return t;
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) y = f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          Int d = x - y;
          q = q * abs(d);
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        Int d = abs(Int(x - ys));
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split(const Int& n, std::map<Int, unsigned>& out) {
  if (n == 1) return;
  if (probably_prime(n)) {
    ++out[n];
    return;
  }
  Int d = pollard_brent(n);
  split(d, out);
  split(Int(n / d), out);
}

}  // namespace

Factorization factorize(const Int& n) {
  if (n == 0) throw std::invalid_argument("factorize: zero");
  Int rest = abs(n);
  std::map<Int, unsigned> found;
  for (unsigned long d = 2; d < kTrialLimit && rest > 1; d += (d == 2 ? 1 : 2)) {
    if (Int(d) * d > rest) break;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
      ++found[Int(d)];
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), d);
    }
  }
  split(rest, found);
  return {found.begin(), found.end()};
}

std::vector<Int> divisors(const Int& n) {
  std::vector<Int> out{1};
  for (const auto& [prime, exp] : factorize(n)) {
    const std::size_t base = out.size();
    Int pk = 1;
    for (unsigned e = 1; e <= exp; ++e) {
      pk *= prime;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace padiccf
