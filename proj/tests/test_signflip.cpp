#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gaplab/signflip.hpp"
#include "oracles.hpp"

using namespace gaplab;

namespace {

std::vector<mpq_class> q_vec(std::initializer_list<long> ints) {
  std::vector<mpq_class> out;
  for (long v : ints) out.emplace_back(v);
  return out;
}

}  // namespace

TEST_CASE("prefix sums of a zero-sum vector") {
  signs::SignPattern p1 = signs::alpha_from_a(q_vec({1, -1}));
  REQUIRE(p1.size() == 1);
  CHECK(p1.alphas[0] == 1);

  signs::SignPattern p2 = signs::alpha_from_a(q_vec({1, -2, 1}));
  REQUIRE(p2.size() == 2);
  CHECK(p2.alphas[0] == 1);
  CHECK(p2.alphas[1] == -1);

  CHECK_THROWS_AS(signs::alpha_from_a(q_vec({1, -2})), parameter_error);
  CHECK_THROWS_AS(signs::alpha_from_a(q_vec({1})), parameter_error);
}

TEST_CASE("the prefix-sum identity holds numerically") {
  // sum alpha_i d_{n+i} = -sum a_i p_{n+i} for zero-sum a
  std::vector<uint64_t> primes_list = oracle::trial_primes_up_to(20'000);
  std::mt19937_64 rng(5150);
  for (int round = 0; round < 20; ++round) {
    size_t k = 2 + rng() % 4;
    std::vector<mpq_class> a;
    long running = 0;
    for (size_t i = 0; i + 1 < k; ++i) {
      long v = static_cast<long>(rng() % 11) - 5;
      a.emplace_back(v);
      running += v;
    }
    a.emplace_back(-running);
    if (std::all_of(a.begin(), a.end(),
                    [](const mpq_class& x) { return sgn(x) == 0; }))
      continue;
    signs::SignPattern pattern = signs::alpha_from_a(a);

    for (int trial = 0; trial < 5; ++trial) {
      uint64_t n = 1 + rng() % 1000;
      mpq_class lhs = signs::weighted_sum(pattern, n);
      mpq_class rhs = 0;
      for (size_t i = 1; i <= k; ++i)
        rhs -= a[i - 1] * mpq_class(static_cast<unsigned long>(
                              primes_list.at(n + i - 1)));
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("weighted sums at hand-checked spots") {
  signs::SignPattern single = signs::make_pattern(q_vec({1}));
  CHECK(signs::weighted_sum(single, 1) == 2);  // d_2 = 5 - 3
  CHECK(signs::weighted_sum(single, 3) == 4);  // d_4 = 11 - 7

  signs::SignPattern diff = signs::make_pattern(q_vec({1, -1}));
  CHECK(signs::weighted_sum(diff, 1) == 0);  // d_2 - d_3 = 2 - 2
  CHECK(signs::weighted_sum(diff, 3) == 2);  // d_4 - d_5 = 4 - 2
}

TEST_CASE("rational coefficients stay exact") {
  signs::SignPattern p = signs::pattern_from_string("1/3,-1/3");
  mpq_class v = signs::weighted_sum(p, 1);  // (d_2 - d_3)/3 = 0
  CHECK(v == 0);
  signs::SignPattern q = signs::pattern_from_string("2/7,5");
  CHECK(q.alphas[0] == mpq_class(2, 7));
  CHECK_THROWS_AS(signs::pattern_from_string("0,0"), parameter_error);
  CHECK_THROWS_AS(signs::pattern_from_string("abc"), parameter_error);
}

TEST_CASE("condition flags on the documented patterns") {
  signs::ConditionFlags f1 = signs::condition_flags(
      signs::make_pattern(q_vec({1, -1})));
  CHECK(f1.polya);
  CHECK(f1.sum_ratio == doctest::Approx(0.0));
  CHECK_FALSE(f1.dominant_term);  // equality is not enough
  CHECK(f1.ends_opposed);

  signs::ConditionFlags f2 = signs::condition_flags(
      signs::make_pattern(q_vec({-1, 3, -1})));
  CHECK(f2.dominant_term);  // j = 2: 1 + 1 < 3 with opposite signs
  CHECK(f2.polya);
  CHECK_FALSE(f2.ends_opposed);

  signs::ConditionFlags f3 = signs::condition_flags(
      signs::make_pattern(q_vec({2, 1})));
  CHECK_FALSE(f3.polya);
  CHECK_FALSE(f3.ends_opposed);
  CHECK(f3.sum_ratio == doctest::Approx(1.0));

  // zeros at the edges defer to the first and last nonzero entries
  signs::ConditionFlags f4 = signs::condition_flags(
      signs::make_pattern(q_vec({0, 2, -5, 0})));
  CHECK(f4.ends_opposed);
}

TEST_CASE("same-sign patterns never change sign") {
  signs::SignChangeReport r = signs::scan_sign_changes(
      signs::make_pattern(q_vec({1, 1})), 10'000);
  CHECK(r.change_positions.empty());
  CHECK(r.negatives == 0);
  CHECK(r.zeros == 0);
  CHECK(r.positives == 10'000);
}

TEST_CASE("difference pattern matches the oracle count") {
  std::vector<uint64_t> g = oracle::gap_table(200'000);
  signs::SignChangeReport r = signs::scan_sign_changes(
      signs::make_pattern(q_vec({1, -1})), 10'000);
  uint64_t expect = oracle::sign_change_count({1, -1}, g, 10'000);
  CHECK(r.change_positions.size() == expect);
  CHECK(r.change_positions.size() > 100);
  CHECK(r.positives + r.negatives + r.zeros == 10'000);

  // longer scans only accumulate more changes
  signs::SignChangeReport longer = signs::scan_sign_changes(
      signs::make_pattern(q_vec({1, -1})), 17'000);
  CHECK(longer.change_positions.size() > r.change_positions.size());
}

TEST_CASE("zeros are neutral and do not reset the sign") {
  // d_2 - d_3 = 0, then the next nonzero value continues against the
  // last nonzero sign, not against the zero
  signs::SignPattern diff = signs::make_pattern(q_vec({1, -1}));
  signs::SignChangeReport r = signs::scan_sign_changes(diff, 50);
  CHECK(r.zeros > 0);
  // change positions must all carry a nonzero value
  for (uint64_t n : r.change_positions) {
    mpq_class v = signs::weighted_sum(diff, n);
    CHECK(sgn(v) != 0);
  }
  // recompute transitions by hand
  int last = 0;
  std::vector<uint64_t> expect;
  for (uint64_t n = 1; n <= 50; ++n) {
    int s = sgn(signs::weighted_sum(diff, n));
    if (s != 0) {
      if (last != 0 && s != last) expect.push_back(n);
      last = s;
    }
  }
  CHECK(r.change_positions == expect);
}

TEST_CASE("scaling invariance") {
  std::mt19937_64 rng(8080);
  for (int round = 0; round < 10; ++round) {
    std::vector<mpq_class> alphas;
    size_t l = 2 + rng() % 3;
    for (size_t i = 0; i < l; ++i)
      alphas.emplace_back(static_cast<long>(rng() % 9) - 4);
    if (std::all_of(alphas.begin(), alphas.end(),
                    [](const mpq_class& x) { return sgn(x) == 0; }))
      continue;
    signs::SignPattern base = signs::make_pattern(alphas);

    std::vector<mpq_class> scaled_up, negated;
    for (const mpq_class& a : alphas) {
      scaled_up.push_back(a * mpq_class(3, 2));
      negated.push_back(a * mpq_class(-2));
    }
    signs::SignChangeReport rb = signs::scan_sign_changes(base, 2000);
    signs::SignChangeReport ru =
        signs::scan_sign_changes(signs::make_pattern(scaled_up), 2000);
    signs::SignChangeReport rn =
        signs::scan_sign_changes(signs::make_pattern(negated), 2000);

    CHECK(rb.change_positions == ru.change_positions);
    CHECK(rb.positives == ru.positives);
    CHECK(rb.negatives == ru.negatives);

    CHECK(rb.change_positions == rn.change_positions);
    CHECK(rb.positives == rn.negatives);
    CHECK(rb.negatives == rn.positives);
    CHECK(rb.zeros == rn.zeros);

    signs::ConditionFlags fb = signs::condition_flags(base);
    signs::ConditionFlags fu =
        signs::condition_flags(signs::make_pattern(scaled_up));
    CHECK(fb.polya == fu.polya);
    CHECK(fb.dominant_term == fu.dominant_term);
    CHECK(fb.ends_opposed == fu.ends_opposed);
    CHECK(fb.sum_ratio == doctest::Approx(fu.sum_ratio));
  }
}

TEST_CASE("opposed ends witness sign changes at desk scale") {
  for (const char* alphas : {"1,-1", "2,-3", "1,0,-1"}) {
    signs::SignPattern p = signs::pattern_from_string(alphas);
    REQUIRE(signs::condition_flags(p).ends_opposed);
    signs::SignChangeReport r = signs::scan_sign_changes(p, 100'000);
    CHECK(r.change_positions.size() > 0);
  }
}
