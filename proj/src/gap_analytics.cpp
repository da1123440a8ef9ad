#include "gaplab/gap_analytics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

namespace gaplab::gaps {

namespace {

// Exact fraction comparison: a/b > c/d.
bool fraction_greater(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
  return static_cast<unsigned __int128>(a) * d >
         static_cast<unsigned __int128>(c) * b;
}

struct StatShape {
  uint64_t anchor_start;  // first index where the statistic is defined
  // window index range relative to anchor n
  int64_t lo_off;
  int64_t hi_off;
};

StatShape shape_for(RecordStat stat, unsigned k) {
  switch (stat) {
    case RecordStat::forward:
      return {k, -static_cast<int64_t>(k) + 1, 1};
    case RecordStat::backward:
      return {k + 1ull, -static_cast<int64_t>(k), 0};
    case RecordStat::two_sided:
      return {k + 1ull, -static_cast<int64_t>(k), 1};
    case RecordStat::chain:
      return {1, 0, static_cast<int64_t>(k) - 1};
  }
  throw parameter_error("unknown record statistic");
}

// Core scan over gaps d_1, d_2, ... pulled from next_gap (nullopt = end).
// hi, when set, bounds the anchor: p_{n+1} < hi (chain: p_n < hi).
std::vector<RatioRecord> scan_records(
    RecordStat stat, unsigned k,
    const std::function<std::optional<uint64_t>()>& next_gap, uint64_t first_p,
    std::optional<uint64_t> hi) {
  if (k < 1) throw parameter_error("record scan: k must be >= 1");
  StatShape sh = shape_for(stat, k);

  std::deque<uint64_t> buf;  // buf[i] = d_{base + i}
  uint64_t base = 1;
  bool exhausted = false;
  auto ensure = [&](uint64_t idx) {
    while (!exhausted && base + buf.size() <= idx) {
      std::optional<uint64_t> g = next_gap();
      if (!g) {
        exhausted = true;
        break;
      }
      buf.push_back(*g);
    }
    return base + buf.size() > idx;
  };
  auto gap_at = [&](uint64_t idx) { return buf[idx - base]; };

  std::vector<RatioRecord> records;
  uint64_t best_num = 0, best_den = 1;
  uint64_t n = 1;
  uint64_t p = first_p;  // p_n
  auto clamped_lo = [&](uint64_t at) {
    int64_t v = static_cast<int64_t>(at) + sh.lo_off;
    return v < 1 ? 1ull : static_cast<uint64_t>(v);
  };
  while (true) {
    uint64_t lo_idx = clamped_lo(n);
    uint64_t hi_idx = n + sh.hi_off;
    if (!ensure(hi_idx)) break;
    if (hi) {
      uint64_t boundary_p =
          (stat == RecordStat::chain) ? p : p + gap_at(n);  // p_{n+1}
      if (boundary_p >= *hi) break;
    }
    if (n >= sh.anchor_start) {
      uint64_t num = 0, den = 1;
      std::vector<uint64_t> window;
      window.reserve(hi_idx - lo_idx + 1);
      for (uint64_t j = lo_idx; j <= hi_idx; ++j) window.push_back(gap_at(j));
      switch (stat) {
        case RecordStat::forward: {
          num = gap_at(n + 1);
          den = *std::max_element(window.begin(), window.end() - 1);
          break;
        }
        case RecordStat::backward: {
          num = gap_at(n - k);
          den = *std::max_element(window.begin() + 1, window.end());
          break;
        }
        case RecordStat::two_sided: {
          num = std::min(gap_at(n - k), gap_at(n + 1));
          den = *std::max_element(window.begin() + 1, window.end() - 1);
          break;
        }
        case RecordStat::chain: {
          num = *std::min_element(window.begin(), window.end());
          den = 1;
          break;
        }
      }
      if (fraction_greater(num, den, best_num, best_den)) {
        records.push_back(RatioRecord{n, p, num, den, std::move(window)});
        best_num = num;
        best_den = den;
      }
    }
    p += gap_at(n);
    ++n;
    uint64_t next_lo = clamped_lo(n);
    while (base < next_lo && !buf.empty()) {
      buf.pop_front();
      ++base;
    }
  }
  return records;
}

}  // namespace

void for_each_gap(uint64_t lo, uint64_t hi,
                  const std::function<void(const GapRow&)>& fn,
                  const GapStreamOptions& opt, const primes::SieveConfig& cfg) {
  if (lo >= hi) throw parameter_error("gap stream: need lo < hi");
  uint64_t n;
  if (lo <= 2) {
    n = 1;
  } else if (opt.primes_below_lo) {
    n = *opt.primes_below_lo + 1;
  } else {
    n = primes::count_primes(0, lo, cfg) + 1;
  }
  uint64_t prev = 0;
  primes::for_each_prime(lo, hi, [&](uint64_t cur) {
    if (prev != 0) {
      fn(GapRow{n, prev, cur - prev});
      ++n;
    }
    prev = cur;
  }, cfg);
}

MeanGapCheck mean_gap_check(uint64_t N, const primes::SieveConfig& cfg) {
  if (N < 1) throw parameter_error("mean_gap_check: N must be >= 1");
  MeanGapCheck out;
  out.n = N;
  out.p_next = primes::nth_prime(N + 1, cfg);
  out.mean = static_cast<double>(out.p_next - 2) / static_cast<double>(N);
  out.log_n = std::log(static_cast<double>(N));
  out.ratio = out.mean / out.log_n;
  return out;
}

RecordStat record_stat_from_name(const std::string& name) {
  if (name == "forward") return RecordStat::forward;
  if (name == "backward") return RecordStat::backward;
  if (name == "twosided") return RecordStat::two_sided;
  if (name == "chain") return RecordStat::chain;
  throw parameter_error("unknown record statistic: " + name);
}

const char* record_stat_name(RecordStat s) {
  switch (s) {
    case RecordStat::forward: return "forward";
    case RecordStat::backward: return "backward";
    case RecordStat::two_sided: return "twosided";
    case RecordStat::chain: return "chain";
  }
  return "?";
}

std::vector<RatioRecord> ratio_records(RecordStat stat, unsigned k, uint64_t hi,
                                       const primes::SieveConfig& cfg) {
  if (hi < 3) throw parameter_error("record scan: hi too small");
  if (hi > cfg.enumeration_cap)
    throw capacity_error("record scan: hi exceeds enumeration cap");
  primes::PrimeStream stream(0, cfg);
  uint64_t prev = stream.next();  // 2
  auto next_gap = [&]() -> std::optional<uint64_t> {
    uint64_t cur = stream.next();
    uint64_t d = cur - prev;
    prev = cur;
    return d;
  };
  return scan_records(stat, k, next_gap, 2, hi);
}

std::vector<RatioRecord> ratio_records_from_gaps(
    RecordStat stat, unsigned k, const std::vector<uint64_t>& gaps,
    uint64_t first_p) {
  size_t i = 0;
  auto next_gap = [&]() -> std::optional<uint64_t> {
    if (i >= gaps.size()) return std::nullopt;
    return gaps[i++];
  };
  return scan_records(stat, k, next_gap, first_p, std::nullopt);
}

std::string records_to_csv(RecordStat stat, unsigned k,
                           const std::vector<RatioRecord>& records) {
  std::ostringstream os;
  os << "# schema: gaplab/records-v1 stat: " << record_stat_name(stat)
     << " k: " << k << "\n";
  os << "n,p_n,value_num,value_den,window\n";
  for (const RatioRecord& r : records) {
    os << r.n << ',' << r.p << ',' << r.num << ',' << r.den << ',';
    for (size_t i = 0; i < r.window.size(); ++i) {
      if (i) os << ';';
      os << r.window[i];
    }
    os << "\n";
  }
  return os.str();
}

double rankin_f_pole() { return std::exp(std::exp(std::exp(1.0))); }

double rankin_f_from_log(double log_x) {
  // Guard matches rankin_f's x > e^(e^e) + 1.
  double threshold = std::log(rankin_f_pole() + 1.0);
  if (!(log_x > threshold))
    throw parameter_error("rankin_f: argument at or below e^(e^e) + 1");
  double l2 = std::log(log_x);
  double l3 = std::log(l2);
  double l4 = std::log(l3);
  return l2 * l4 / (l3 * l3);
}

double rankin_f(double x) {
  if (!(x > rankin_f_pole() + 1.0))
    throw parameter_error("rankin_f: argument at or below e^(e^e) + 1");
  return rankin_f_from_log(std::log(x));
}

}  // namespace gaplab::gaps
