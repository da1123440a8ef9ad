#include "gaplab/smooth_counter.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include "gaplab/prime_engine.hpp"

namespace gaplab::smooth {

uint64_t PsiCounter::psi(uint64_t x, uint64_t y) {
  if (x < 1) throw parameter_error("psi: x must be >= 1");
  if (y < 2) throw parameter_error("psi: y must be >= 2");
  // keys pack x and a prime index into 64 bits: x < 2^34, index < 2^30
  uint64_t hard_cap = std::min<uint64_t>(x_cap_, (1ull << 34) - 1);
  if (x > hard_cap) throw capacity_error("psi: x beyond configured cap");
  if (y >= x) return x;  // every n <= x qualifies
  if (primes_.empty() || primes_.back() < y) {
    // primes_ only ever extends the same ascending list, so memoized
    // indices stay valid
    primes_ = primes::simple_primes_up_to(y);
  }
  uint32_t idx = static_cast<uint32_t>(
      std::upper_bound(primes_.begin(), primes_.end(), y) - primes_.begin());
  return rec(x, idx);
}

uint64_t PsiCounter::rec(uint64_t x, uint32_t idx) {
  if (x == 0) return 0;
  if (idx == 0) return 1;                  // only n = 1
  if (idx == 1) return std::bit_width(x);  // powers of two up to x
  uint64_t p = primes_[idx - 1];
  // with all primes up to x available, every n <= x counts
  if (p >= x) return x;
  uint64_t key = (x << 30) | idx;
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  uint64_t value = rec(x, idx - 1) + rec(x / p, idx);
  memo_[key] = value;
  return value;
}

uint64_t psi_exact(uint64_t x, uint64_t y) {
  PsiCounter counter;
  return counter.psi(x, y);
}

double psi_rankin_bound(double x, double y) {
  if (!(x >= 1.0)) throw parameter_error("psi_rankin_bound: x must be >= 1");
  double ly = std::log(y);
  double l2y = std::log(ly);
  double l3y = l2y > 0 ? std::log(l2y) : -1.0;
  if (!(l3y > 0))
    throw parameter_error("psi_rankin_bound: y must exceed e^e");
  return x * std::exp(-(l3y / ly) * std::log(x) + l2y);
}

double smooth_survivor_bound(uint64_t U, uint64_t w, unsigned m) {
  if (U < 2 || w < 2)
    throw parameter_error("smooth_survivor_bound: need U >= 2, w >= 2");
  double logU = std::log(static_cast<double>(U));
  return std::pow(logU, static_cast<double>(m) + 1.0) *
         static_cast<double>(psi_exact(U, w));
}

SurvivorEstimate survivor_estimate(const cover::ConstructionParams& params) {
  cover::validate_params(params);
  SurvivorEstimate est;

  // exact side: enumerate s = q^a * prod h_i^{a_i} <= U, then collect the
  // distinct n = p * s landing in (R/2, U]
  std::vector<uint64_t> base;
  if (params.excluded_q) base.push_back(*params.excluded_q);
  for (uint64_t h : params.tuple) base.push_back(h);
  std::vector<uint64_t> products{1};
  for (uint64_t b : base) {
    std::vector<uint64_t> grown;
    for (uint64_t s : products) {
      for (unsigned __int128 v = s; v <= params.U; v *= b)
        grown.push_back(static_cast<uint64_t>(v));
    }
    products = std::move(grown);
  }
  std::vector<uint64_t> all_primes = primes::simple_primes_up_to(params.U);
  std::unordered_set<uint64_t> seen;
  for (uint64_t s : products) {
    for (uint64_t p : all_primes) {
      unsigned __int128 n = static_cast<unsigned __int128>(p) * s;
      if (n > params.U) break;
      uint64_t n64 = static_cast<uint64_t>(n);
      if (2 * n64 > params.R) seen.insert(n64);
    }
  }
  est.n0_exact = seen.size();

  // closed-form geometric factors of the approximation
  double factor = 1.0;
  if (params.excluded_q)
    factor /= 1.0 - 1.0 / static_cast<double>(*params.excluded_q);
  for (uint64_t h : params.tuple)
    factor /= 1.0 - 1.0 / static_cast<double>(h);
  double U = static_cast<double>(params.U);
  double R = static_cast<double>(params.R);
  est.n0_pnt = (U / std::log(U)) * factor - (R / (2.0 * std::log(R))) * factor;

  est.smooth_term = smooth_survivor_bound(params.U, params.w, params.m);
  return est;
}

}  // namespace gaplab::smooth
