#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "gaplab/construction_params.hpp"

namespace gaplab::cover {

enum class Stage { P1, P2, P3, P4, H };

const char* stage_name(Stage s);
Stage stage_from_name(const std::string& name);

struct Entry {
  uint64_t alpha = 0;
  Stage stage = Stage::P1;
};

// prime -> residue; the covering system itself. z = alpha_p (mod p) for every
// entry, so position nu is covered by p iff nu = -alpha_p (mod p).
using ResidueAssignment = std::map<uint64_t, Entry>;

// Positions in [1, U] not yet forced composite after the zero-residue stage.
// `plus` are candidates for +n, `minus` for -n; both start as the same set.
struct Survivors {
  std::vector<uint64_t> plus;
  std::vector<uint64_t> minus;
  // form tags for the initial set: value has a prime factor > w or not
  std::vector<uint64_t> large_prime_form;
  std::vector<uint64_t> smooth_form;
};

struct MatchResult {
  // survivor -> P4 prime in processing order (|n| descending, + before -)
  std::vector<std::pair<int64_t, uint64_t>> matched;
  std::vector<int64_t> uncovered;  // survivors left when the primes ran out
};

struct Certificate {
  ConstructionParams params;
  ResidueAssignment assignment;
  std::vector<uint64_t> trajectory;  // |S+| after each P2 prime, N_0 first
  std::vector<std::pair<int64_t, uint64_t>> matched;
  std::vector<int64_t> open_positions;  // uncovered nu in [-U, U], ascending
  std::vector<int64_t> uncovered;       // unmatched survivors (partial builds)
  uint64_t achieved_u = 0;              // radius of full coverage around 0
  bool full = true;
};

// --- pipeline stages -------------------------------------------------------

// Stage 1/3: alpha_p = 0 for every P1 and P3 prime.
void assign_zero_stages(const ConstructionParams& params, ResidueAssignment& a);

// n in [1, U] with gcd(n, prod P1*P3) = 1 and n not in H. The tuple positions
// stay out so they can remain uncovered; n = 1 is present and is matched like
// any other survivor.
Survivors enumerate_survivors(const ConstructionParams& params);

// Greedy residue choice for each P2 prime in ascending order, restricted to
// alpha != -h_i (mod p). Objective: survivors removed from both sides
// (positive side only in paper_literal mode); ties break to the smallest
// residue. Returns the survivor trajectory, N_0 first.
std::vector<uint64_t> greedy_stage2(const ConstructionParams& params,
                                    Survivors& s, ResidueAssignment& a);

// Injective matching of the remaining survivors into unused P4 primes.
// Survivors ordered by decreasing |n| (positive first on ties), primes
// ascending; p is unusable when p | n - h_i, p | n, or p = q. Survivors
// already covered by an earlier stage-4 pick are skipped. Exhaustion yields a
// partial result, not an error.
MatchResult match_stage4(const ConstructionParams& params, const Survivors& s,
                         ResidueAssignment& a);

// Assigns leftover P4 primes and the tuple primes themselves (smallest
// residue avoiding all -h_i), computes the coverage table over [-U, U] and
// the achieved radius, and assembles the certificate.
Certificate finalize(const ConstructionParams& params, ResidueAssignment a,
                     std::vector<uint64_t> trajectory, MatchResult match);

// enumerate -> greedy -> match -> finalize.
Certificate build_certificate(const ConstructionParams& params);

// --- coverage queries ------------------------------------------------------

bool position_covered(const ResidueAssignment& a, int64_t nu);

// Smallest witnessing prime, if any.
std::optional<uint64_t> coverage_witness(const ResidueAssignment& a,
                                         int64_t nu);

// Largest U' such that every nu in [-U', U'] outside {h_i} u {-h_i} is
// covered. Exact outward scan from 0.
uint64_t max_covered_u(const ResidueAssignment& a,
                       const std::vector<uint64_t>& tuple);

// --- verification ----------------------------------------------------------

struct VerifyReport {
  bool ok = false;        // structure + constraints + tables all consistent
  bool full = false;      // open positions within [-U, U] are only +-h_i
  std::vector<std::string> issues;
};

// Recomputes everything from (params, assignment) alone; trajectory and
// matched metadata are not trusted. Throws certificate_error on structural
// damage (missing prime, residue out of range).
VerifyReport verify_certificate(const Certificate& cert);

// --- realization -----------------------------------------------------------

struct PositionReport {
  int64_t nu = 0;
  bool tuple_position = false;  // nu = +h_i: kept open by construction
  bool mirror_position = false;  // nu = -h_i: may be open or covered
  uint64_t witness = 0;       // witnessing prime, 0 when open
  int prime_status = -1;      // tuple positions: 1 prime, 0 composite, -1 unknown
};

struct RealizedGap {
  mpz_class z;          // CRT solution in [0, modulus)
  mpz_class modulus;    // product of all assigned primes
  mpz_class witness_x;  // least representative > R + U
  std::vector<PositionReport> positions;  // nu in [-U, U]
};

RealizedGap realize_gap(const Certificate& cert);

// --- diagnostics -----------------------------------------------------------

struct Stage2Diagnostics {
  uint64_t n0 = 0;
  uint64_t n_final = 0;
  double mertens_prediction = 0.0;  // N_0 * prod_{p in P2} (1 - 1/p)
  // per P2 prime: survivors sitting in the forbidden classes h_i (mod p),
  // next to the budget N_j / (4 log^2 R)
  std::vector<std::pair<uint64_t, double>> bad_class_counts;
};

// Replays the stage-2 choices recorded in the certificate. Reporting only;
// nothing here is asserted by the pipeline.
Stage2Diagnostics stage2_diagnostics(const Certificate& cert);

double mertens_prediction(uint64_t n0, const std::vector<uint64_t>& p2);

// --- search helper ---------------------------------------------------------

struct AutoUResult {
  Certificate cert;
  uint64_t builds_tried = 0;
};

// Largest U <= u_hi (default 8R) whose build fully covers [-U, U]; scans
// downward so the result is exact and reproducible.
std::optional<AutoUResult> find_max_full_u(uint64_t R, unsigned m,
                                           std::vector<uint64_t> tuple,
                                           const DeriveOverrides& o = {},
                                           uint64_t u_hi = 0);

}  // namespace gaplab::cover
