#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "gaplab/prime_engine.hpp"

namespace gaplab::signs {

// Coefficient vector (alpha_1, ..., alpha_l) of the weighted gap sum
// sum_i alpha_i * d_{n+i}. Exact rationals; not all zero.
struct SignPattern {
  std::vector<mpq_class> alphas;

  size_t size() const { return alphas.size(); }
};

SignPattern make_pattern(std::vector<mpq_class> alphas);

// Parses "1,-1" or "1/2,-3/2".
SignPattern pattern_from_string(const std::string& text);

// alpha_j = a_1 + ... + a_j for the zero-sum vector a (length k >= 2);
// l = k - 1. Rejects sum(a) != 0, which is necessary for sign changes of
// sum a_i p_{n+i}.
SignPattern alpha_from_a(const std::vector<mpq_class>& a);

// sum_i alpha_i d_{n+i}, exact.
mpq_class weighted_sum(const SignPattern& pattern, uint64_t n,
                       const primes::SieveConfig& cfg = {});

struct ConditionFlags {
  bool polya = false;        // nonzero coefficients not all of one sign
  double sum_ratio = 0.0;    // |sum alpha_i| / sum |alpha_i|
  bool dominant_term = false;  // some |alpha_j| > sum of the others, signs opposed
  bool ends_opposed = false;   // first and last nonzero coefficients differ in sign
};

ConditionFlags condition_flags(const SignPattern& pattern);

struct SignChangeReport {
  uint64_t scan_n = 0;
  std::vector<uint64_t> change_positions;  // n where the sign flips
  uint64_t positives = 0, negatives = 0, zeros = 0;
  ConditionFlags flags;
};

// Evaluates n = 1..N. Zero values are recorded but neutral: they neither
// count as changes nor reset the last seen sign.
SignChangeReport scan_sign_changes(const SignPattern& pattern, uint64_t N,
                                   const primes::SieveConfig& cfg = {});

}  // namespace gaplab::signs
