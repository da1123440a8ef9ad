#include "gaplab/tuple_toolkit.hpp"

#include <algorithm>

#include "gaplab/prime_engine.hpp"

namespace gaplab::tuples {

namespace {

void check_distinct_sorted(std::vector<int64_t>& offsets) {
  if (offsets.empty())
    throw parameter_error("tuple: need at least one offset");
  std::sort(offsets.begin(), offsets.end());
  if (std::adjacent_find(offsets.begin(), offsets.end()) != offsets.end())
    throw parameter_error("tuple: offsets must be distinct");
}

uint64_t mod_residue(int64_t v, uint64_t p) {
  int64_t r = v % static_cast<int64_t>(p);
  if (r < 0) r += static_cast<int64_t>(p);
  return static_cast<uint64_t>(r);
}

}  // namespace

bool is_admissible(std::vector<int64_t> offsets) {
  check_distinct_sorted(offsets);
  uint64_t m = offsets.size();
  for (uint64_t p : primes::simple_primes_up_to(m)) {
    std::vector<bool> seen(p, false);
    uint64_t occupied = 0;
    for (int64_t h : offsets) {
      uint64_t r = mod_residue(h, p);
      if (!seen[r]) {
        seen[r] = true;
        ++occupied;
      }
    }
    if (occupied == p) return false;
  }
  return true;
}

std::map<uint64_t, std::set<uint64_t>> occupancy_profile(
    std::vector<int64_t> offsets) {
  check_distinct_sorted(offsets);
  std::map<uint64_t, std::set<uint64_t>> profile;
  for (uint64_t p : primes::simple_primes_up_to(offsets.size())) {
    std::set<uint64_t>& classes = profile[p];
    for (int64_t h : offsets) classes.insert(mod_residue(h, p));
  }
  return profile;
}

namespace {

// h_t | h_i - h_j must keep failing for every t and i != j after adding
// `candidate` to `chosen` (whose own pairwise conditions already hold).
bool divisibility_ok(const std::vector<uint64_t>& chosen, uint64_t candidate) {
  for (uint64_t h : chosen) {
    uint64_t diff = candidate - h;  // candidate > h: pool is ascending
    if (diff % candidate == 0) return false;
    for (uint64_t t : chosen)
      if (diff % t == 0) return false;
  }
  // candidate as a divisor of the older pairwise differences
  for (size_t i = 0; i < chosen.size(); ++i)
    for (size_t j = i + 1; j < chosen.size(); ++j)
      if ((chosen[j] - chosen[i]) % candidate == 0) return false;
  return true;
}

bool dfs(const std::vector<uint64_t>& pool, size_t start, unsigned remaining,
         std::vector<uint64_t>& chosen, uint64_t& nodes) {
  if (remaining == 0) return true;
  for (size_t i = start; i + remaining <= pool.size(); ++i) {
    ++nodes;
    if (!divisibility_ok(chosen, pool[i])) continue;
    chosen.push_back(pool[i]);
    if (dfs(pool, i + 1, remaining - 1, chosen, nodes)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace

TupleSearch find_tuple_42(unsigned m, uint64_t c3, uint64_t c4) {
  if (m < 1) throw parameter_error("find_tuple_42: m must be >= 1");
  if (!(m < c3 && c3 < c4))
    throw parameter_error("find_tuple_42: need m < c3 < c4");
  std::vector<uint64_t> pool;
  for (uint64_t p : primes::simple_primes_up_to(c4 - 1))
    if (p > c3) pool.push_back(p);

  TupleSearch result;
  std::vector<uint64_t> chosen;
  chosen.reserve(m);
  if (dfs(pool, 0, m, chosen, result.nodes_visited)) {
    AdmissibleTuple t;
    for (uint64_t h : chosen) t.offsets.push_back(static_cast<int64_t>(h));
    // distinct primes exceeding every pairwise difference are always
    // admissible; checked anyway
    if (!is_admissible(t.offsets))
      throw parameter_error("find_tuple_42: search produced an inadmissible tuple");
    result.tuple = std::move(t);
  }
  return result;
}

}  // namespace gaplab::tuples
