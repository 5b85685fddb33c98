#include <algorithm>
#include <limits>
#include <thread>

#include "padiccf/constructor.hpp"

namespace padiccf {

std::string to_string(QuotientPool pool) {
  switch (pool) {
    case QuotientPool::all: return "all";
    case QuotientPool::pos: return "pos";
    case QuotientPool::conj3: return "conj3";
  }
  return "?";
}

QuotientPool pool_from_string(const std::string& s) {
  if (s == "all") return QuotientPool::all;
  if (s == "pos") return QuotientPool::pos;
  if (s == "conj3") return QuotientPool::conj3;
  throw std::invalid_argument("unknown quotient pool '" + s + "' (all|pos|conj3)");
}

QuotientList search_pool(const OddPrime& p, long t, long i, QuotientPool pool, const SearchLimits& limits) {
  if (t < 1 || i < 0 || i >= t) throw std::invalid_argument("search_pool: position out of range");
  if (pool == QuotientPool::conj3 && i < t - 1) return {LaurentInt(1, 1, p)};
  const bool signed_pool = pool != QuotientPool::pos;
  // a_0 must satisfy |a_0| < p/4, the rest |a_i| < p/2.
  const int bound_factor = i == 0 ? 4 : 2;
  QuotientList out;
  for (unsigned long e = 1; e <= limits.exp_bound; ++e) {
    const Int cap = p.pow(e + 1);
    for (unsigned long n = 1; n <= limits.num_bound; ++n) {
      if (n % p.value() == 0) continue;
      if (bound_factor * Int(n) >= cap) break;
      out.emplace_back(Int(n), static_cast<long>(e), p);
      if (signed_pool) out.emplace_back(-Int(n), static_cast<long>(e), p);
    }
  }
  return out;
}

SearchSummary nice_search(const OddPrime& p, long t, QuotientPool pool, const SearchLimits& limits,
                          const std::function<void(const SearchHit&)>& sink) {
  std::vector<QuotientList> pools;
  for (long i = 0; i < t; ++i) pools.push_back(search_pool(p, t, i, pool, limits));

  using u64 = unsigned long long;
  SearchSummary summary;
  u64 space = 1;
  for (const auto& pl : pools) {
    if (pl.empty()) {
      space = 0;
      break;
    }
    if (space > std::numeric_limits<u64>::max() / pl.size())
      throw std::invalid_argument("nice_search: search space does not fit in 64 bits");
    space *= pl.size();
  }
  summary.space_size = space;
  const u64 begin = std::min(limits.cursor, space);
  u64 end = space;
  if (limits.max_candidates != 0 && space - begin > limits.max_candidates) end = begin + limits.max_candidates;

  auto decode = [&](u64 index) {
    QuotientList cf(pools.size());
    for (std::size_t i = pools.size(); i-- > 0;) {
      cf[i] = pools[i][index % pools[i].size()];
      index /= pools[i].size();
    }
    return cf;
  };

  struct Partial {
    std::vector<SearchHit> hits;
    u64 indeterminate = 0;
  };
  auto run = [&](u64 lo, u64 hi, Partial& out, bool stream) {
    for (u64 idx = lo; idx < hi; ++idx) {
      NiceCertificate cert = is_nice(decode(idx), limits.budget);
      if (cert.status == NiceStatus::indeterminate) ++out.indeterminate;
      if (!cert.nice()) continue;
      out.hits.push_back({idx, std::move(cert)});
      if (stream && sink) sink(out.hits.back());
    }
  };

  const unsigned jobs = std::max(1u, limits.jobs);
  if (jobs == 1 || end - begin < 2) {
    Partial part;
    run(begin, end, part, true);
    summary.hits = std::move(part.hits);
    summary.indeterminate = part.indeterminate;
  } else {
    std::vector<Partial> parts(jobs);
    std::vector<std::thread> workers;
    const u64 chunk = (end - begin + jobs - 1) / jobs;
    for (unsigned j = 0; j < jobs; ++j) {
      const u64 lo = std::min(end, begin + j * chunk), hi = std::min(end, lo + chunk);
      workers.emplace_back([&, lo, hi, j] { run(lo, hi, parts[j], false); });
    }
    for (auto& w : workers) w.join();
    // Contiguous chunks in order: concatenation keeps enumeration order.
    for (auto& part : parts) {
      summary.indeterminate += part.indeterminate;
      for (auto& hit : part.hits) {
        if (sink) sink(hit);
        summary.hits.push_back(std::move(hit));
      }
    }
  }
  summary.examined = end - begin;
  summary.next_cursor = end;
  return summary;
}

}  // namespace padiccf
