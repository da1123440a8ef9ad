#include "gaplab/construction_params.hpp"

#include <algorithm>
#include <cmath>

#include "gaplab/gap_analytics.hpp"
#include "gaplab/prime_engine.hpp"
#include "gaplab/tuple_toolkit.hpp"

namespace gaplab::cover {

namespace {

constexpr uint64_t kMaxU = 100'000'000;

uint64_t max_w(uint64_t R) { return (R - 1) / 2; }  // largest integer < R/2

}  // namespace

ConstructionParams derive_params(uint64_t R, unsigned m,
                                 std::vector<uint64_t> tuple,
                                 std::optional<double> c0,
                                 const DeriveOverrides& o) {
  if (R < 10) throw parameter_error("derive_params: R must be >= 10");
  std::sort(tuple.begin(), tuple.end());
  if (tuple.size() != m)
    throw parameter_error("derive_params: tuple size does not match m");

  ConstructionParams p;
  p.R = R;
  p.m = m;
  p.tuple = std::move(tuple);
  p.excluded_q = o.q;
  p.c0 = c0;
  p.paper_literal = o.paper_literal;

  double logR = std::log(static_cast<double>(R));
  uint64_t w_cap = max_w(R);
  if (w_cap < 3)
    throw parameter_error("derive_params: R too small to fit 2 <= v < w < R/2");

  if (o.w) {
    if (*o.w < 3 || *o.w > w_cap)
      throw parameter_error("derive_params: explicit w outside 2 < w < R/2");
    p.w = *o.w;
  } else {
    // w = exp[(log R * log_3 R / log_2 R) / (m + 5)]; the iterated logs only
    // separate for astronomically large R, so clamp into range.
    double l2 = std::log(logR);
    double l3 = l2 > 0 ? std::log(l2) : -1.0;
    uint64_t w_raw = 3;
    if (l3 > 0) {
      double expo = logR * l3 / l2 / static_cast<double>(m + 5);
      w_raw = static_cast<uint64_t>(std::llround(std::exp(expo)));
    }
    p.w = std::clamp<uint64_t>(w_raw, 3, w_cap);
    if (p.w != w_raw) p.clamped = true;
  }

  if (o.v) {
    if (*o.v < 2 || *o.v >= p.w)
      throw parameter_error("derive_params: explicit v outside 2 <= v < w");
    p.v = *o.v;
  } else {
    uint64_t v_raw =
        static_cast<uint64_t>(std::llround(logR * logR * logR));
    p.v = std::clamp<uint64_t>(v_raw, 2, p.w - 1);
    if (p.v != v_raw) p.clamped = true;
  }

  if (o.U) {
    p.U = *o.U;
  } else {
    if (!c0)
      throw parameter_error("derive_params: U needs an explicit value or c0");
    double fr;
    try {
      fr = gaps::rankin_f(static_cast<double>(R));
    } catch (const parameter_error&) {
      throw parameter_error(
          "derive_params: R below the rankin_f domain; give U explicitly");
    }
    double u = *c0 * static_cast<double>(R) * fr;
    if (!(u >= 1.0))
      throw parameter_error("derive_params: derived U is below 1");
    p.U = static_cast<uint64_t>(u);
  }

  validate_params(p);
  return p;
}

void validate_params(const ConstructionParams& params) {
  if (params.R < 10) throw parameter_error("params: R must be >= 10");
  if (params.U < 1) throw parameter_error("params: U must be >= 1");
  if (params.U > kMaxU) throw capacity_error("params: U beyond supported size");
  if (!(2 <= params.v && params.v < params.w && params.w <= max_w(params.R)))
    throw parameter_error("params: need 2 <= v < w < R/2");
  if (params.m != params.tuple.size())
    throw parameter_error("params: tuple size does not match m");
  std::vector<int64_t> as_int;
  for (uint64_t h : params.tuple) {
    if (h > params.R) throw parameter_error("params: tuple member exceeds R");
    if (!primes::is_prime(h))
      throw parameter_error("params: tuple members must be prime");
    as_int.push_back(static_cast<int64_t>(h));
  }
  if (!std::is_sorted(params.tuple.begin(), params.tuple.end()))
    throw parameter_error("params: tuple must be sorted");
  if (!params.tuple.empty() && !tuples::is_admissible(as_int))
    throw parameter_error("params: tuple is not admissible");
  if (params.excluded_q) {
    if (!primes::is_prime(*params.excluded_q))
      throw parameter_error("params: excluded q must be prime");
    if (std::find(params.tuple.begin(), params.tuple.end(),
                  *params.excluded_q) != params.tuple.end())
      throw parameter_error("params: excluded q cannot be a tuple member");
  }
}

PrimeClasses prime_classes(const ConstructionParams& params) {
  PrimeClasses c;
  for (uint64_t p : primes::simple_primes_up_to(params.R)) {
    if (params.excluded_q && p == *params.excluded_q) continue;
    if (std::find(params.tuple.begin(), params.tuple.end(), p) !=
        params.tuple.end())
      continue;  // tuple primes get their own stage
    if (p <= params.v) c.p1.push_back(p);
    else if (p <= params.w) c.p2.push_back(p);
    else if (2 * p <= params.R) c.p3.push_back(p);
    else c.p4.push_back(p);
  }
  return c;
}

}  // namespace gaplab::cover
