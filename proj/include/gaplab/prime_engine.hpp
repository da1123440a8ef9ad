#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gaplab/errors.hpp"

namespace gaplab::primes {

struct SieveConfig {
  uint64_t segment_length = 1ull << 20;  // numbers per segment
  uint64_t enumeration_cap = 10'000'000'000ull;
  unsigned threads = 1;
};

// One sieved block [base, base + length). flags[j] is set iff base + j is prime.
struct SieveSegment {
  uint64_t base = 0;
  uint64_t length = 0;
  std::vector<bool> flags;

  bool prime_at(uint64_t j) const { return flags[j]; }
};

// Deterministic Miller-Rabin, exact for all n < 2^64.
bool is_prime(uint64_t n);

// Plain sieve of Eratosthenes; intended for limits up to ~10^7 (base primes etc.).
std::vector<uint64_t> simple_primes_up_to(uint64_t limit);

SieveSegment sieve_segment(uint64_t base, uint64_t length);

// All primes in [2, limit], ascending. Throws capacity_error when
// limit exceeds cfg.enumeration_cap.
std::vector<uint64_t> primes_up_to(uint64_t limit, const SieveConfig& cfg = {});

// Streams primes in [lo, hi) in ascending order with segment-sized memory.
void for_each_prime(uint64_t lo, uint64_t hi,
                    const std::function<void(uint64_t)>& fn,
                    const SieveConfig& cfg = {});

std::vector<uint64_t> primes_in_range(uint64_t lo, uint64_t hi,
                                      const SieveConfig& cfg = {});

// pi(hi - 1) - pi(lo - 1). Segments are sieved in parallel when cfg.threads > 1.
uint64_t count_primes(uint64_t lo, uint64_t hi, const SieveConfig& cfg = {});

// p_1 = 2, p_2 = 3, ...
uint64_t nth_prime(uint64_t n, const SieveConfig& cfg = {});

// Pull-style ascending prime stream starting at the first prime >= start.
class PrimeStream {
 public:
  explicit PrimeStream(uint64_t start = 0, SieveConfig cfg = {});

  // Next prime in ascending order; throws capacity_error past the cap.
  uint64_t next();

 private:
  void refill();

  SieveConfig cfg_;
  uint64_t next_base_ = 0;
  std::vector<uint64_t> base_primes_;
  uint64_t base_limit_ = 0;
  std::vector<uint64_t> buf_;
  size_t pos_ = 0;
};

}  // namespace gaplab::primes
