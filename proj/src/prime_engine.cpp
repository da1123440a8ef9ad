#include "gaplab/prime_engine.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace gaplab::primes {

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

uint64_t powmod(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Witness set proven sufficient for all n < 3.3 * 10^24 (covers the full
// 64-bit range).
constexpr uint64_t kWitnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool miller_rabin(uint64_t n) {
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : kWitnesses) {
    if (a % n == 0) continue;
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

uint64_t isqrt64(uint64_t n) {
  uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
  auto sq = [](uint64_t v) {
    return static_cast<unsigned __int128>(v) * v;
  };
  while (r > 0 && sq(r) > n) --r;
  while (sq(r + 1) <= n) ++r;
  return r;
}

// Composite bitmap over the odd numbers of [lo, hi): bit k corresponds to
// first_odd + 2k, set means composite. base_primes must reach sqrt(hi - 1)
// and contain only odd primes.
struct OddBitmap {
  uint64_t first_odd = 0;
  uint64_t count = 0;
  std::vector<uint64_t> words;

  bool composite(uint64_t k) const {
    return (words[k >> 6] >> (k & 63)) & 1;
  }
};

OddBitmap sieve_odds(uint64_t lo, uint64_t hi,
                     const std::vector<uint64_t>& odd_base_primes) {
  OddBitmap bm;
  bm.first_odd = lo | 1;
  if (lo == 0) bm.first_odd = 1;
  if (bm.first_odd >= hi) {
    bm.count = 0;
    return bm;
  }
  bm.count = (hi - bm.first_odd + 1) / 2;
  bm.words.assign((bm.count + 63) / 64, 0);
  for (uint64_t p : odd_base_primes) {
    if (p * p >= hi) break;
    uint64_t start = p * p;
    if (start < lo) {
      uint64_t q = (lo + p - 1) / p;
      if ((q & 1) == 0) ++q;  // only odd multiples
      start = q * p;
    }
    for (uint64_t mult = start; mult < hi; mult += 2 * p) {
      uint64_t k = (mult - bm.first_odd) / 2;
      bm.words[k >> 6] |= (1ull << (k & 63));
    }
  }
  // 1 is not prime.
  if (bm.first_odd == 1) bm.words[0] |= 1;
  return bm;
}

std::vector<uint64_t> odd_base_primes_for(uint64_t hi) {
  if (hi <= 9) return {};
  std::vector<uint64_t> base = simple_primes_up_to(isqrt64(hi - 1));
  base.erase(base.begin());  // drop 2
  return base;
}

uint64_t count_block(uint64_t lo, uint64_t hi,
                     const std::vector<uint64_t>& odd_base) {
  uint64_t n = 0;
  if (lo <= 2 && 2 < hi) ++n;
  OddBitmap bm = sieve_odds(lo, hi, odd_base);
  for (uint64_t k = 0; k < bm.count; ++k)
    if (!bm.composite(k)) ++n;
  return n;
}

}  // namespace

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                     23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  return miller_rabin(n);
}

std::vector<uint64_t> simple_primes_up_to(uint64_t limit) {
  std::vector<uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (uint64_t i = 2; i * i <= limit; ++i) {
    if (composite[i]) continue;
    for (uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  for (uint64_t i = 2; i <= limit; ++i)
    if (!composite[i]) out.push_back(i);
  return out;
}

SieveSegment sieve_segment(uint64_t base, uint64_t length) {
  if (length == 0) throw parameter_error("sieve_segment: length must be > 0");
  SieveSegment seg;
  seg.base = base;
  seg.length = length;
  seg.flags.assign(length, false);
  uint64_t hi = base + length;
  if (base <= 2 && 2 < hi) seg.flags[2 - base] = true;
  OddBitmap bm = sieve_odds(base, hi, odd_base_primes_for(hi));
  for (uint64_t k = 0; k < bm.count; ++k) {
    if (!bm.composite(k)) seg.flags[bm.first_odd + 2 * k - base] = true;
  }
  return seg;
}

std::vector<uint64_t> primes_up_to(uint64_t limit, const SieveConfig& cfg) {
  if (limit > cfg.enumeration_cap)
    throw capacity_error("primes_up_to: limit exceeds enumeration cap");
  std::vector<uint64_t> out;
  if (limit < 2) return out;
  if (limit >= 10) {
    double x = static_cast<double>(limit);
    out.reserve(static_cast<size_t>(1.2 * x / std::log(x)) + 16);
  }
  for_each_prime(0, limit + 1, [&](uint64_t p) { out.push_back(p); }, cfg);
  return out;
}

void for_each_prime(uint64_t lo, uint64_t hi,
                    const std::function<void(uint64_t)>& fn,
                    const SieveConfig& cfg) {
  if (hi > cfg.enumeration_cap + 1)
    throw capacity_error("for_each_prime: range exceeds enumeration cap");
  if (lo >= hi) return;
  std::vector<uint64_t> odd_base = odd_base_primes_for(hi);
  if (lo <= 2 && 2 < hi) fn(2);
  uint64_t seg_len = std::max<uint64_t>(cfg.segment_length, 64);
  for (uint64_t seg_lo = lo; seg_lo < hi; ) {
    uint64_t seg_hi = std::min(hi, seg_lo + seg_len);
    OddBitmap bm = sieve_odds(seg_lo, seg_hi, odd_base);
    for (uint64_t k = 0; k < bm.count; ++k)
      if (!bm.composite(k)) fn(bm.first_odd + 2 * k);
    seg_lo = seg_hi;
  }
}

std::vector<uint64_t> primes_in_range(uint64_t lo, uint64_t hi,
                                      const SieveConfig& cfg) {
  std::vector<uint64_t> out;
  for_each_prime(lo, hi, [&](uint64_t p) { out.push_back(p); }, cfg);
  return out;
}

uint64_t count_primes(uint64_t lo, uint64_t hi, const SieveConfig& cfg) {
  if (hi > cfg.enumeration_cap + 1)
    throw capacity_error("count_primes: range exceeds enumeration cap");
  if (lo >= hi) return 0;
  std::vector<uint64_t> odd_base = odd_base_primes_for(hi);
  unsigned threads = std::max(1u, cfg.threads);
  uint64_t seg_len = std::max<uint64_t>(cfg.segment_length, 64);
  if (threads == 1 || hi - lo <= seg_len) {
    uint64_t total = 0;
    for (uint64_t seg_lo = lo; seg_lo < hi; ) {
      uint64_t seg_hi = std::min(hi, seg_lo + seg_len);
      total += count_block(seg_lo, seg_hi, odd_base);
      seg_lo = seg_hi;
    }
    return total;
  }
  // Segments are independent; hand each worker a stride of them.
  uint64_t n_segments = (hi - lo + seg_len - 1) / seg_len;
  std::vector<uint64_t> partial(threads, 0);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      uint64_t sum = 0;
      for (uint64_t s = t; s < n_segments; s += threads) {
        uint64_t seg_lo = lo + s * seg_len;
        uint64_t seg_hi = std::min(hi, seg_lo + seg_len);
        sum += count_block(seg_lo, seg_hi, odd_base);
      }
      partial[t] = sum;
    });
  }
  for (auto& th : pool) th.join();
  uint64_t total = 0;
  for (uint64_t s : partial) total += s;
  return total;
}

uint64_t nth_prime(uint64_t n, const SieveConfig& cfg) {
  if (n == 0) throw parameter_error("nth_prime: index starts at 1");
  PrimeStream stream(0, cfg);
  uint64_t p = 0;
  for (uint64_t i = 0; i < n; ++i) p = stream.next();
  return p;
}

PrimeStream::PrimeStream(uint64_t start, SieveConfig cfg)
    : cfg_(cfg), next_base_(start) {}

uint64_t PrimeStream::next() {
  while (pos_ >= buf_.size()) refill();
  return buf_[pos_++];
}

void PrimeStream::refill() {
  if (next_base_ > cfg_.enumeration_cap)
    throw capacity_error("PrimeStream: past enumeration cap");
  uint64_t seg_len = std::max<uint64_t>(cfg_.segment_length, 64);
  uint64_t hi = std::min(next_base_ + seg_len, cfg_.enumeration_cap + 1);
  if (base_limit_ < hi) {
    base_limit_ = std::max<uint64_t>(hi * 2, 1ull << 16);
    if (base_limit_ > cfg_.enumeration_cap + 1)
      base_limit_ = cfg_.enumeration_cap + 1;
    base_primes_ = odd_base_primes_for(base_limit_);
  }
  buf_.clear();
  pos_ = 0;
  if (next_base_ <= 2 && 2 < hi) buf_.push_back(2);
  OddBitmap bm = sieve_odds(next_base_, hi, base_primes_);
  for (uint64_t k = 0; k < bm.count; ++k)
    if (!bm.composite(k)) buf_.push_back(bm.first_odd + 2 * k);
  next_base_ = hi;
}

}  // namespace gaplab::primes
