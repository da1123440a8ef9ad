#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gaplab/certificate_json.hpp"
#include "gaplab/covering.hpp"
#include "gaplab/gap_analytics.hpp"
#include "gaplab/prime_engine.hpp"
#include "gaplab/tuple_toolkit.hpp"
#include "oracles.hpp"

using namespace gaplab;
using cover::ConstructionParams;
using cover::DeriveOverrides;

namespace {

ConstructionParams r30_params() {
  DeriveOverrides o;
  o.v = 4;
  o.w = 13;
  o.U = 60;
  return cover::derive_params(30, 2, {5, 7}, std::nullopt, o);
}

}  // namespace

TEST_CASE("derive keeps consistent explicit values") {
  ConstructionParams p = r30_params();
  CHECK(p.v == 4);
  CHECK(p.w == 13);
  CHECK(p.U == 60);
  CHECK_FALSE(p.clamped);

  cover::PrimeClasses c = cover::prime_classes(p);
  CHECK(c.p1 == std::vector<uint64_t>{2, 3});
  CHECK(c.p2 == std::vector<uint64_t>{11, 13});  // 5, 7 belong to the tuple
  CHECK(c.p3.empty());                           // (13, 15] holds no prime
  CHECK(c.p4 == std::vector<uint64_t>{17, 19, 23, 29});
}

TEST_CASE("derived cuts collapse at small R and get clamped") {
  DeriveOverrides o;
  o.U = 100;
  ConstructionParams p = cover::derive_params(200, 2, {5, 7}, std::nullopt, o);
  // log^3(200) = 149 overshoots w < 100, so both cuts collapse
  CHECK(p.clamped);
  CHECK(p.v >= 2);
  CHECK(p.v < p.w);
  CHECK(2 * p.w < 200);
}

TEST_CASE("derived U follows c0 * R * f(R) in analysis mode") {
  DeriveOverrides o;
  ConstructionParams p = cover::derive_params(100'000'000, 2, {5, 7}, 0.5, o);
  double f = gaps::rankin_f(1e8);
  double u_real = 0.5 * 1e8 * f;
  CHECK(p.U == static_cast<uint64_t>(u_real));
  CHECK(std::abs(static_cast<double>(p.U) / (1e8 * f) - 0.5) <
        1.0 / (1e8 * f) + 1e-12);
}

TEST_CASE("inconsistent explicit cuts are rejected") {
  DeriveOverrides o;
  o.U = 60;
  o.v = 13;
  o.w = 13;
  CHECK_THROWS_AS(cover::derive_params(30, 2, {5, 7}, std::nullopt, o),
                  parameter_error);
  o.v = 4;
  o.w = 15;  // 15 >= 30/2
  CHECK_THROWS_AS(cover::derive_params(30, 2, {5, 7}, std::nullopt, o),
                  parameter_error);
  o.w = 13;
  CHECK_THROWS_AS(cover::derive_params(30, 2, {5, 31}, std::nullopt, o),
                  parameter_error);  // tuple member beyond R
  CHECK_THROWS_AS(cover::derive_params(30, 2, {5, 9}, std::nullopt, o),
                  parameter_error);  // tuple member not prime
  DeriveOverrides oq = o;
  oq.q = 7;
  CHECK_THROWS_AS(cover::derive_params(30, 2, {5, 7}, std::nullopt, oq),
                  parameter_error);  // q inside the tuple
}

TEST_CASE("U is required when it cannot be derived") {
  DeriveOverrides o;
  CHECK_THROWS_AS(cover::derive_params(30, 2, {5, 7}, std::nullopt, o),
                  parameter_error);
  CHECK_THROWS_AS(cover::derive_params(30, 2, {5, 7}, 0.5, o),
                  parameter_error);  // R below the rankin_f domain
}

TEST_CASE("survivors of the R=30 system") {
  ConstructionParams p = r30_params();
  cover::Survivors s = cover::enumerate_survivors(p);

  // direct gcd sweep against the zero-residue classes P1 u P3 = {2, 3}
  // (P4 members like 17 stay in: they are exactly what stage 4 matches);
  // tuple positions removed, 1 is a survivor
  std::vector<uint64_t> expect;
  for (uint64_t n = 1; n <= 60; ++n) {
    if (n % 2 == 0 || n % 3 == 0) continue;
    if (n == 5 || n == 7) continue;
    expect.push_back(n);
  }
  CHECK(s.plus == expect);
  CHECK(s.minus == expect);

  // evens are gone
  for (uint64_t n : s.plus) CHECK(n % 2 == 1);

  // form tags partition the set; smooth-form members have no factor > 13
  CHECK(s.large_prime_form.size() + s.smooth_form.size() == s.plus.size());
  for (uint64_t n : s.smooth_form) {
    uint64_t rest = n;
    for (uint64_t q = 2; q <= 13; ++q)
      while (rest % q == 0) rest /= q;
    CHECK(rest == 1);
  }
  for (uint64_t n : s.large_prime_form) {
    uint64_t rest = n;
    for (uint64_t q = 2; q <= 13; ++q)
      while (rest % q == 0) rest /= q;
    CHECK(rest > 13);
  }
}

TEST_CASE("greedy stage with no middle primes leaves one trajectory entry") {
  DeriveOverrides o;
  o.v = 2;
  o.w = 3;
  o.U = 30;
  // tuple {3} swallows the only candidate for the middle class
  ConstructionParams p = cover::derive_params(20, 1, {3}, std::nullopt, o);
  cover::PrimeClasses c = cover::prime_classes(p);
  CHECK(c.p2.empty());

  cover::ResidueAssignment a;
  cover::assign_zero_stages(p, a);
  cover::Survivors s = cover::enumerate_survivors(p);
  std::vector<uint64_t> trajectory = cover::greedy_stage2(p, s, a);
  CHECK(trajectory == std::vector<uint64_t>{s.plus.size()});
}

TEST_CASE("greedy assigns every middle prime") {
  DeriveOverrides o;
  o.v = 4;
  o.w = 12;
  o.U = 9;
  ConstructionParams p = cover::derive_params(30, 0, {}, std::nullopt, o);
  cover::PrimeClasses c = cover::prime_classes(p);
  CHECK(c.p2 == std::vector<uint64_t>{5, 7, 11});

  cover::ResidueAssignment a;
  cover::assign_zero_stages(p, a);
  cover::Survivors s = cover::enumerate_survivors(p);
  std::vector<uint64_t> traj = cover::greedy_stage2(p, s, a);
  CHECK(a.count(5) == 1);
  CHECK(a.count(7) == 1);
  CHECK(a.count(11) == 1);
  CHECK(traj.size() == 4);
}

TEST_CASE("single survivor drives the single greedy choice") {
  // P2 = {11}, empty tuple, one injected survivor 9:
  // alpha = 2 removes it (9 = -2 mod 11); the tie against alpha = 9
  // breaks toward the smaller residue
  DeriveOverrides o;
  o.v = 8;
  o.w = 12;
  o.U = 9;
  ConstructionParams p = cover::derive_params(26, 0, {}, std::nullopt, o);
  cover::PrimeClasses c = cover::prime_classes(p);
  REQUIRE(c.p2 == std::vector<uint64_t>{11});

  cover::ResidueAssignment a;
  cover::Survivors s;
  s.plus = {9};
  s.minus = {9};
  std::vector<uint64_t> traj = cover::greedy_stage2(p, s, a);
  CHECK(a[11].alpha == 2);
  CHECK(traj == std::vector<uint64_t>{1, 0});
  CHECK(s.plus.empty());
}

TEST_CASE("trajectory equals a recount after replaying choices") {
  ConstructionParams p = r30_params();
  cover::ResidueAssignment a;
  cover::assign_zero_stages(p, a);
  cover::Survivors s = cover::enumerate_survivors(p);
  std::vector<uint64_t> before = s.plus;
  std::vector<uint64_t> traj = cover::greedy_stage2(p, s, a);

  cover::PrimeClasses c = cover::prime_classes(p);
  REQUIRE(traj.size() == c.p2.size() + 1);
  std::vector<uint64_t> replay = before;
  CHECK(traj[0] == replay.size());
  for (size_t j = 0; j < c.p2.size(); ++j) {
    uint64_t prime = c.p2[j];
    uint64_t alpha = a.at(prime).alpha;
    uint64_t removed = (prime - alpha) % prime;
    std::erase_if(replay, [&](uint64_t n) { return n % prime == removed; });
    CHECK(traj[j + 1] == replay.size());
    CHECK(traj[j + 1] <= traj[j]);
  }
}

TEST_CASE("matching the worked single-survivor example") {
  // survivor 59 against fresh P4 primes {17, 19, 23, 29}, tuple {5, 7}
  DeriveOverrides o;
  o.v = 4;
  o.w = 13;
  o.U = 60;
  ConstructionParams p = cover::derive_params(30, 2, {5, 7}, std::nullopt, o);
  cover::ResidueAssignment a;
  cover::Survivors s;
  s.plus = {59};
  cover::MatchResult match = cover::match_stage4(p, s, a);
  REQUIRE(match.matched.size() == 1);
  CHECK(match.matched[0].first == 59);
  CHECK(match.matched[0].second == 17);  // 54 and 52 have no factor in P4
  CHECK(a.at(17).alpha == 9);            // -59 mod 17
  CHECK(match.uncovered.empty());
}

TEST_CASE("matching respects forbidden divisors and stays injective") {
  std::mt19937_64 rng(420042);
  for (int round = 0; round < 40; ++round) {
    uint64_t R = 40 + (rng() % 6) * 30;
    DeriveOverrides o;
    o.v = 2;
    o.w = 3;
    o.U = R;
    ConstructionParams p = cover::derive_params(R, 2, {5, 7}, std::nullopt, o);
    cover::ResidueAssignment a;
    cover::assign_zero_stages(p, a);
    cover::Survivors s = cover::enumerate_survivors(p);
    cover::greedy_stage2(p, s, a);
    cover::MatchResult match = cover::match_stage4(p, s, a);

    std::set<uint64_t> used;
    for (const auto& [n, prime] : match.matched) {
      CHECK(used.insert(prime).second);  // injective
      CHECK(2 * prime > R);
      CHECK(prime <= R);
      int64_t p_i = static_cast<int64_t>(prime);
      CHECK(n % p_i != 0);
      for (uint64_t h : p.tuple) CHECK((n - static_cast<int64_t>(h)) % p_i != 0);
      // the assignment really covers n
      CHECK(((n + static_cast<int64_t>(a.at(prime).alpha)) % p_i + p_i) % p_i == 0);
    }
  }
}

TEST_CASE("full pipeline on the R=30 system verifies") {
  ConstructionParams p = r30_params();
  cover::Certificate cert = cover::build_certificate(p);
  cover::VerifyReport report = cover::verify_certificate(cert);
  CHECK(report.ok);
  CHECK(report.issues.empty());

  // every prime <= 30 is assigned; 5 and 7 carry the tuple stage
  CHECK(cert.assignment.size() == 10);
  CHECK(cert.assignment.at(5).stage == cover::Stage::H);
  CHECK(cert.assignment.at(7).stage == cover::Stage::H);
  CHECK(cert.assignment.at(2).alpha == 0);
  CHECK(cert.assignment.at(3).alpha == 0);

  // nu = 0 is covered by any zero-stage prime
  CHECK(cover::position_covered(cert.assignment, 0));
  CHECK(cover::coverage_witness(cert.assignment, 0).value() == 2);

  // tuple positions stay open
  CHECK_FALSE(cover::position_covered(cert.assignment, 5));
  CHECK_FALSE(cover::position_covered(cert.assignment, 7));
}

TEST_CASE("big-integer route agrees with per-prime coverage") {
  ConstructionParams p = r30_params();
  cover::Certificate cert = cover::build_certificate(p);
  cover::RealizedGap gap = cover::realize_gap(cert);

  for (const auto& [prime, entry] : cert.assignment) {
    mpz_class res = gap.z % static_cast<unsigned long>(prime);
    CHECK(res.get_ui() == entry.alpha);
  }
  for (int64_t nu = -static_cast<int64_t>(p.U); nu <= static_cast<int64_t>(p.U);
       ++nu) {
    bool covered = cover::position_covered(cert.assignment, nu);
    CHECK(covered == oracle::gcd_covered(gap.z, gap.modulus, nu));
  }
  // tuple preservation at the realized integer
  for (uint64_t h : p.tuple) {
    mpz_class g = gcd(mpz_class(gap.z + h), gap.modulus);
    CHECK(g == 1);
  }
}

TEST_CASE("witness integer turns covered positions into composites") {
  ConstructionParams p = r30_params();
  cover::Certificate cert = cover::build_certificate(p);
  cover::RealizedGap gap = cover::realize_gap(cert);

  CHECK(gap.witness_x > p.R + p.U);
  REQUIRE(gap.witness_x.fits_ulong_p());
  uint64_t x = gap.witness_x.get_ui();
  for (const cover::PositionReport& pr : gap.positions) {
    if (pr.witness != 0) {
      uint64_t value = x + pr.nu;
      CHECK(value % pr.witness == 0);
      CHECK(value > pr.witness);
      CHECK_FALSE(primes::is_prime(value));
    }
  }
}

TEST_CASE("verification notices a corrupted residue") {
  ConstructionParams p = r30_params();
  cover::Certificate cert = cover::build_certificate(p);

  cover::Certificate bad = cert;
  // point a prime straight at a tuple offset
  uint64_t target = 11;
  bad.assignment.at(target).alpha =
      static_cast<uint64_t>((target - p.tuple[0] % target) % target);
  cover::VerifyReport report = cover::verify_certificate(bad);
  CHECK_FALSE(report.ok);
  bool named = false;
  for (const std::string& issue : report.issues)
    if (issue.find("11") != std::string::npos) named = true;
  CHECK(named);
}

TEST_CASE("verification notices structural damage") {
  ConstructionParams p = r30_params();
  cover::Certificate cert = cover::build_certificate(p);

  cover::Certificate missing = cert;
  missing.assignment.erase(23);
  CHECK_THROWS_AS(cover::verify_certificate(missing), certificate_error);

  cover::Certificate out_of_range = cert;
  out_of_range.assignment.at(23).alpha = 23;
  CHECK_THROWS_AS(cover::verify_certificate(out_of_range), certificate_error);
}

TEST_CASE("deleting a matched prime opens its survivor") {
  ConstructionParams p = r30_params();
  cover::Certificate cert = cover::build_certificate(p);
  REQUIRE(!cert.matched.empty());
  bool exercised = false;
  for (const auto& [nu, prime] : cert.matched) {
    // survivors with a unique witness must fall open on deletion
    cover::ResidueAssignment without = cert.assignment;
    without.erase(prime);
    if (!cover::position_covered(without, nu)) {
      exercised = true;
      uint64_t u_before = cover::max_covered_u(cert.assignment, p.tuple);
      uint64_t u_after = cover::max_covered_u(without, p.tuple);
      CHECK(u_after <= u_before);
    }
  }
  CHECK(exercised);
}

TEST_CASE("max covered radius on a toy assignment") {
  cover::ResidueAssignment toy;
  toy[2] = cover::Entry{0, cover::Stage::P1};
  toy[3] = cover::Entry{0, cover::Stage::P1};
  CHECK(cover::max_covered_u(toy, {}) == 0);  // 1 is open
  // covering 1 and -1 extends the radius to the next hole at 5
  toy[5] = cover::Entry{4, cover::Stage::P4};   // covers +1
  toy[7] = cover::Entry{1, cover::Stage::P4};   // covers -1
  CHECK(cover::max_covered_u(toy, {}) == 4);
  // with 5 exempt as a tuple position the next hole is +7
  CHECK(cover::max_covered_u(toy, {5}) == 6);
}

TEST_CASE("deleting any entry never grows the covered radius") {
  ConstructionParams p = r30_params();
  cover::Certificate cert = cover::build_certificate(p);
  uint64_t full = cover::max_covered_u(cert.assignment, p.tuple);
  for (const auto& [prime, entry] : cert.assignment) {
    cover::ResidueAssignment without = cert.assignment;
    without.erase(prime);
    CHECK(cover::max_covered_u(without, p.tuple) <= full);
  }
}

TEST_CASE("soundness sweep over small parameter grids") {
  std::mt19937_64 rng(90210);
  for (int round = 0; round < 25; ++round) {
    uint64_t R = 20 + rng() % 180;
    unsigned m = 1 + rng() % 3;
    tuples::TupleSearch t = tuples::find_tuple_42(m, m + 1, R);
    if (!t.tuple) continue;
    std::vector<uint64_t> tuple;
    for (int64_t h : t.tuple->offsets) tuple.push_back(static_cast<uint64_t>(h));
    DeriveOverrides o;
    o.U = 1 + rng() % (2 * R);
    ConstructionParams p;
    try {
      p = cover::derive_params(R, m, tuple, std::nullopt, o);
    } catch (const parameter_error&) {
      continue;
    }
    cover::Certificate cert = cover::build_certificate(p);
    cover::VerifyReport report = cover::verify_certificate(cert);
    CHECK(report.ok);
    if (cert.full) CHECK(report.full);
  }
}

TEST_CASE("stage-2 diagnostics") {
  ConstructionParams p = r30_params();
  cover::Certificate cert = cover::build_certificate(p);
  cover::Stage2Diagnostics d = cover::stage2_diagnostics(cert);
  CHECK(d.n0 == cert.trajectory.front());
  CHECK(d.n_final == cert.trajectory.back());
  CHECK(d.mertens_prediction > 0);
  CHECK(d.bad_class_counts.size() == 2);  // P2 = {11, 13}

  // prediction shrinks as the middle class grows
  double one = cover::mertens_prediction(100, {11});
  double two = cover::mertens_prediction(100, {11, 13});
  CHECK(two < one);
  CHECK(cover::mertens_prediction(100, {}) == 100.0);
}

TEST_CASE("auto-U search returns a full certificate") {
  auto result = cover::find_max_full_u(30, 2, {5, 7});
  REQUIRE(result.has_value());
  CHECK(result->cert.full);
  CHECK(result->cert.achieved_u >= result->cert.params.U);
  cover::VerifyReport report = cover::verify_certificate(result->cert);
  CHECK(report.ok);
  CHECK(report.full);
}

TEST_CASE("certificates serialize canonically and round-trip") {
  ConstructionParams p = r30_params();
  cover::Certificate a = cover::build_certificate(p);
  cover::Certificate b = cover::build_certificate(p);
  std::string sa = cover::certificate_to_string(a);
  std::string sb = cover::certificate_to_string(b);
  CHECK(sa == sb);  // determinism, byte for byte

  cover::Certificate parsed = cover::certificate_from_string(sa);
  CHECK(cover::certificate_to_string(parsed) == sa);
  cover::VerifyReport report = cover::verify_certificate(parsed);
  CHECK(report.ok);

  CHECK_THROWS_AS(cover::certificate_from_string("{\"schema\":\"nope\"}"),
                  certificate_error);
  CHECK_THROWS_AS(cover::certificate_from_string("not json"),
                  certificate_error);
}

TEST_CASE("excluded prime stays out of the modulus") {
  DeriveOverrides o;
  o.v = 4;
  o.w = 13;
  o.U = 40;
  o.q = 11;
  ConstructionParams p = cover::derive_params(30, 2, {5, 7}, std::nullopt, o);
  cover::Certificate cert = cover::build_certificate(p);
  CHECK(cert.assignment.count(11) == 0);
  cover::VerifyReport report = cover::verify_certificate(cert);
  CHECK(report.ok);
  cover::RealizedGap gap = cover::realize_gap(cert);
  CHECK(gap.modulus % 11 != 0);
}

TEST_CASE("paper-literal objective changes only the scoring side") {
  DeriveOverrides o;
  o.v = 4;
  o.w = 13;
  o.U = 60;
  o.paper_literal = true;
  ConstructionParams lit = cover::derive_params(30, 2, {5, 7}, std::nullopt, o);
  cover::Certificate cert = cover::build_certificate(lit);
  cover::VerifyReport report = cover::verify_certificate(cert);
  CHECK(report.ok);
  CHECK(cert.params.paper_literal);
}
