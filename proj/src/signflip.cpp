#include "gaplab/signflip.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gaplab::signs {

namespace {

bool all_zero(const std::vector<mpq_class>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](const mpq_class& x) { return sgn(x) == 0; });
}

}  // namespace

SignPattern make_pattern(std::vector<mpq_class> alphas) {
  if (alphas.empty()) throw parameter_error("pattern: needs coefficients");
  if (all_zero(alphas))
    throw parameter_error("pattern: coefficients must not all be zero");
  for (mpq_class& a : alphas) a.canonicalize();
  return SignPattern{std::move(alphas)};
}

SignPattern pattern_from_string(const std::string& text) {
  std::vector<mpq_class> alphas;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw parameter_error("pattern: empty coefficient");
    mpq_class q;
    if (q.set_str(item, 10) != 0)
      throw parameter_error("pattern: cannot parse coefficient '" + item + "'");
    q.canonicalize();
    alphas.push_back(q);
  }
  return make_pattern(std::move(alphas));
}

SignPattern alpha_from_a(const std::vector<mpq_class>& a) {
  if (a.size() < 2) throw parameter_error("alpha_from_a: need k >= 2");
  mpq_class sum = 0;
  for (const mpq_class& x : a) sum += x;
  if (sgn(sum) != 0)
    throw parameter_error(
        "alpha_from_a: coefficients must sum to zero (necessary for sign "
        "changes)");
  std::vector<mpq_class> alphas;
  mpq_class prefix = 0;
  for (size_t j = 0; j + 1 < a.size(); ++j) {
    prefix += a[j];
    alphas.push_back(prefix);
  }
  return make_pattern(std::move(alphas));
}

mpq_class weighted_sum(const SignPattern& pattern, uint64_t n,
                       const primes::SieveConfig& cfg) {
  if (n < 1) throw parameter_error("weighted_sum: n starts at 1");
  size_t l = pattern.size();
  // d_{n+1}..d_{n+l} need primes p_{n+1}..p_{n+l+1}
  primes::PrimeStream stream(0, cfg);
  for (uint64_t i = 1; i < n + 1; ++i) stream.next();
  uint64_t prev = stream.next();  // p_{n+1}
  mpq_class sum = 0;
  for (size_t i = 0; i < l; ++i) {
    uint64_t cur = stream.next();
    sum += pattern.alphas[i] * mpq_class(static_cast<unsigned long>(cur - prev));
    prev = cur;
  }
  return sum;
}

ConditionFlags condition_flags(const SignPattern& pattern) {
  ConditionFlags flags;
  int first_sign = 0, last_sign = 0;
  bool saw_positive = false, saw_negative = false;
  mpq_class sum = 0, abs_sum = 0;
  for (const mpq_class& a : pattern.alphas) {
    int s = sgn(a);
    sum += a;
    abs_sum += abs(a);
    if (s != 0) {
      if (first_sign == 0) first_sign = s;
      last_sign = s;
      saw_positive |= s > 0;
      saw_negative |= s < 0;
    }
  }
  flags.polya = saw_positive && saw_negative;
  mpq_class ratio(sum / abs_sum);  // abs_sum > 0: not all zero
  flags.sum_ratio = std::abs(ratio.get_d());
  flags.ends_opposed = first_sign != 0 && last_sign != 0 &&
                       first_sign != last_sign;
  for (size_t j = 0; j < pattern.size(); ++j) {
    const mpq_class& aj = pattern.alphas[j];
    if (sgn(aj) == 0) continue;
    mpq_class others = 0;
    bool signs_opposed = true;
    for (size_t i = 0; i < pattern.size(); ++i) {
      if (i == j) continue;
      others += abs(pattern.alphas[i]);
      if (sgn(pattern.alphas[i]) != 0 &&
          sgn(pattern.alphas[i]) == sgn(aj))
        signs_opposed = false;
    }
    if (others < abs(aj) && signs_opposed) {
      flags.dominant_term = true;
      break;
    }
  }
  return flags;
}

SignChangeReport scan_sign_changes(const SignPattern& pattern, uint64_t N,
                                   const primes::SieveConfig& cfg) {
  size_t l = pattern.size();
  if (N < l + 2) throw parameter_error("scan_sign_changes: N too small");
  SignChangeReport report;
  report.scan_n = N;
  report.flags = condition_flags(pattern);

  // integer fast path when every coefficient is integral and the running sum
  // provably fits
  bool integral = std::all_of(
      pattern.alphas.begin(), pattern.alphas.end(),
      [](const mpq_class& a) { return a.get_den() == 1; });
  std::vector<int64_t> int_alphas;
  if (integral) {
    for (const mpq_class& a : pattern.alphas) {
      // keep l * |alpha| * gap far away from int64 range
      if (!a.get_num().fits_slong_p() ||
          abs(a.get_num()) >= mpz_class(1) << 31) {
        integral = false;
        break;
      }
      int_alphas.push_back(a.get_num().get_si());
    }
  }

  primes::PrimeStream stream(0, cfg);
  uint64_t prev = stream.next();  // 2
  std::vector<uint64_t> ring(l, 0);  // gaps d_{n+1}..d_{n+l} for current n
  // prefill d_2..d_{l+1} (ring for n = 1)
  for (size_t i = 0; i < l + 1; ++i) {
    uint64_t cur = stream.next();
    if (i > 0) ring[i - 1] = cur - prev;
    prev = cur;
  }

  int last_sign = 0;
  size_t head = 0;  // ring[head] = d_{n+1}
  for (uint64_t n = 1; n <= N; ++n) {
    int s;
    if (integral) {
      int64_t sum = 0;
      for (size_t i = 0; i < l; ++i)
        sum += int_alphas[i] * static_cast<int64_t>(ring[(head + i) % l]);
      s = sum > 0 ? 1 : (sum < 0 ? -1 : 0);
    } else {
      mpq_class sum = 0;
      for (size_t i = 0; i < l; ++i)
        sum += pattern.alphas[i] *
               mpq_class(static_cast<unsigned long>(ring[(head + i) % l]));
      s = sgn(sum);
    }
    if (s > 0) ++report.positives;
    else if (s < 0) ++report.negatives;
    else ++report.zeros;
    if (s != 0) {
      if (last_sign != 0 && s != last_sign)
        report.change_positions.push_back(n);
      last_sign = s;
    }
    // slide the window: drop d_{n+1}, load d_{n+l+1}
    uint64_t cur = stream.next();
    ring[head] = cur - prev;
    prev = cur;
    head = (head + 1) % l;
  }
  return report;
}

}  // namespace gaplab::signs
