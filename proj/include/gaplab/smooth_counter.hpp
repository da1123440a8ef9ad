#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "gaplab/construction_params.hpp"
#include "gaplab/errors.hpp"

namespace gaplab::smooth {

// Exact Psi(x, y): the count of n <= x whose prime factors are all <= y
// (n = 1 included). Uses Psi(x, p_k) = Psi(x, p_{k-1}) + Psi(x/p_k, p_k)
// with a memo shared across calls.
class PsiCounter {
 public:
  explicit PsiCounter(uint64_t x_cap = 10'000'000'000ull) : x_cap_(x_cap) {}

  uint64_t psi(uint64_t x, uint64_t y);

 private:
  uint64_t rec(uint64_t x, uint32_t idx);

  uint64_t x_cap_;
  std::vector<uint64_t> primes_;
  std::unordered_map<uint64_t, uint64_t> memo_;
};

// One-shot convenience wrapper.
uint64_t psi_exact(uint64_t x, uint64_t y);

// x * exp[-(log_3 y / log y) * log x + log_2 y]. The error term of the bound
// it mimics is dropped, so this is reported only, never asserted.
double psi_rankin_bound(double x, double y);

// (log U)^(m+1) * Psi(U, w): the budget for survivors with only small prime
// factors.
double smooth_survivor_bound(uint64_t U, uint64_t w, unsigned m);

struct SurvivorEstimate {
  uint64_t n0_exact = 0;   // #{n in (R/2, U]: n = p * q^a * prod h_i^{a_i}}
  double n0_pnt = 0.0;     // prime-number-theorem approximation
  double smooth_term = 0.0;  // smooth_survivor_bound(U, w, m)
};

SurvivorEstimate survivor_estimate(const cover::ConstructionParams& params);

}  // namespace gaplab::smooth
