#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gaplab/prime_engine.hpp"

namespace gaplab::gaps {

// One consecutive-prime gap: d = next_prime(p) - p, n = index of p (p_1 = 2).
struct GapRow {
  uint64_t n = 0;
  uint64_t p = 0;
  uint64_t d = 0;
};

struct GapStreamOptions {
  // Number of primes below lo. Supplied to avoid a recount when lo > 2.
  std::optional<uint64_t> primes_below_lo;
};

// Emits one row per adjacent prime pair inside [lo, hi). Indices are absolute
// (p_1 = 2); when lo > 2 they come from the hint or a full recount.
void for_each_gap(uint64_t lo, uint64_t hi,
                  const std::function<void(const GapRow&)>& fn,
                  const GapStreamOptions& opt = {},
                  const primes::SieveConfig& cfg = {});

struct MeanGapCheck {
  uint64_t n = 0;
  uint64_t p_next = 0;   // p_{N+1}
  double mean = 0.0;     // (p_{N+1} - 2) / N
  double log_n = 0.0;
  double ratio = 0.0;    // mean / log N
};

MeanGapCheck mean_gap_check(uint64_t N, const primes::SieveConfig& cfg = {});

enum class RecordStat { forward, backward, two_sided, chain };

RecordStat record_stat_from_name(const std::string& name);
const char* record_stat_name(RecordStat s);

// A successive record of one of the four gap statistics.
//
//   forward    at n: d_{n+1} / max(d_{n-k+1..n})          window d_{n-k+1..n+1}
//   backward   at n: d_{n-k} / max(d_{n-k+1..n})          window d_{n-k..n}
//   two_sided  at n: min(d_{n-k}, d_{n+1}) / max(d_{n-k+1..n}),
//                                                         window d_{n-k..n+1}
//   chain      at j: min(d_j..d_{j+k-1}), reported at the first gap of the
//              window (so p is the prime opening the run), den = 1
struct RatioRecord {
  uint64_t n = 0;
  uint64_t p = 0;                 // anchor prime p_n (chain: p_j)
  uint64_t num = 0;
  uint64_t den = 1;
  std::vector<uint64_t> window;   // the gaps entering numerator and denominator
};

// Scans gaps of primes below hi (anchor condition: the anchor's successor
// prime stays below hi; windows may reach slightly beyond to complete).
std::vector<RatioRecord> ratio_records(RecordStat stat, unsigned k, uint64_t hi,
                                       const primes::SieveConfig& cfg = {});

// Same scan over a synthetic gap list d_1, d_2, ... with p_1 = first_p.
std::vector<RatioRecord> ratio_records_from_gaps(RecordStat stat, unsigned k,
                                                 const std::vector<uint64_t>& gaps,
                                                 uint64_t first_p = 2);

// CSV projection used by the CLI and the determinism checks.
std::string records_to_csv(RecordStat stat, unsigned k,
                           const std::vector<RatioRecord>& records);

// log_2(x) * log_4(x) / log_3(x)^2 with log_v the v-fold iterated natural log.
// Domain: x > e^(e^e) + 1.
double rankin_f(double x);

// Same function evaluated from log(x), for arguments beyond double range.
double rankin_f_from_log(double log_x);

// Smallest admissible argument of rankin_f (e^(e^e)).
double rankin_f_pole();

}  // namespace gaplab::gaps
