#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gaplab/errors.hpp"

namespace gaplab::cover {

// Full parameterization of a covering-system build over the primes <= R.
//
// Prime classes (q and all tuple members excluded from every class):
//   P1 = {p <= v},  P2 = (v, w],  P3 = (w, R/2],  P4 = (R/2, R]
struct ConstructionParams {
  uint64_t R = 0;                   // sieving limit, >= 10
  uint64_t U = 0;                   // target half-length of the covered run
  unsigned m = 0;                   // tuple size
  std::vector<uint64_t> tuple;      // H = {h_i}: sorted distinct primes <= R
  uint64_t v = 0;                   // P1/P2 cut, 2 <= v < w
  uint64_t w = 0;                   // P2/P3 cut, w < R/2
  std::optional<uint64_t> excluded_q;  // optional prime left out of the modulus
  std::optional<double> c0;         // recorded when U was derived from it
  bool paper_literal = false;       // stage-2 objective counts positive side only
  bool clamped = false;             // derived v/w fell outside range and were clamped
};

struct DeriveOverrides {
  std::optional<uint64_t> v;
  std::optional<uint64_t> w;
  std::optional<uint64_t> U;
  std::optional<uint64_t> q;
  bool paper_literal = false;
};

// Builds params from R, m and the tuple. Derivations:
//   v = round(log^3 R), w = round(exp[(log R * log_3 R / log_2 R) / (m + 5)]),
//   U = floor(c0 * R * rankin_f(R)) when R is inside rankin_f's domain.
// Derived v/w falling outside 2 <= v < w < R/2 are clamped (flagged);
// explicit overrides out of range are a parameter_error instead. U must be
// supplied explicitly whenever it cannot be derived.
ConstructionParams derive_params(uint64_t R, unsigned m,
                                 std::vector<uint64_t> tuple,
                                 std::optional<double> c0 = std::nullopt,
                                 const DeriveOverrides& o = {});

// Throws parameter_error on any violated invariant.
void validate_params(const ConstructionParams& params);

struct PrimeClasses {
  std::vector<uint64_t> p1, p2, p3, p4;
};

PrimeClasses prime_classes(const ConstructionParams& params);

}  // namespace gaplab::cover
