#pragma once

#include <utility>
#include <vector>

#include "padiccf/padic_core.hpp"

namespace padiccf {

using Factorization = std::vector<std::pair<Int, unsigned>>;

/// Prime factorization of |n| (n != 0), primes ascending. Trial division,
/// then Pollard-Brent rho on what remains.
Factorization factorize(const Int& n);

/// All positive divisors of |n|, ascending.
std::vector<Int> divisors(const Int& n);

}  // namespace padiccf
