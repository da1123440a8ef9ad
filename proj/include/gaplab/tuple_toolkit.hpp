#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "gaplab/errors.hpp"

namespace gaplab::tuples {

// Sorted distinct integer offsets h_1 < ... < h_m.
struct AdmissibleTuple {
  std::vector<int64_t> offsets;

  size_t size() const { return offsets.size(); }
};

// True iff for every prime p <= |H| some residue class mod p is free of H.
// Primes p > |H| can never be fully occupied by |H| points, so they need no
// check. Throws parameter_error on duplicate offsets.
bool is_admissible(std::vector<int64_t> offsets);

// Residues occupied by H for every prime p <= |H|.
std::map<uint64_t, std::set<uint64_t>> occupancy_profile(
    std::vector<int64_t> offsets);

struct TupleSearch {
  std::optional<AdmissibleTuple> tuple;
  uint64_t nodes_visited = 0;
};

// Lexicographically first tuple of m primes h_1 < ... < h_m inside the open
// interval (c3, c4) with h_t never dividing a pairwise difference h_i - h_j.
// Depth-first over ascending primes; a miss reports the search size.
TupleSearch find_tuple_42(unsigned m, uint64_t c3, uint64_t c4);

}  // namespace gaplab::tuples
