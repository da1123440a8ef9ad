#include "gaplab/covering.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "gaplab/prime_engine.hpp"

namespace gaplab::cover {

namespace {

uint64_t mod_residue(int64_t v, uint64_t p) {
  int64_t r = v % static_cast<int64_t>(p);
  if (r < 0) r += static_cast<int64_t>(p);
  return static_cast<uint64_t>(r);
}

// Residues forbidden for alpha_p: alpha = -h_i (mod p) would cover the tuple
// position h_i.
std::set<uint64_t> forbidden_residues(const ConstructionParams& params,
                                      uint64_t p) {
  std::set<uint64_t> out;
  for (uint64_t h : params.tuple)
    out.insert(mod_residue(-static_cast<int64_t>(h), p));
  return out;
}

}  // namespace

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::P1: return "P1";
    case Stage::P2: return "P2";
    case Stage::P3: return "P3";
    case Stage::P4: return "P4";
    case Stage::H: return "H";
  }
  return "?";
}

Stage stage_from_name(const std::string& name) {
  if (name == "P1") return Stage::P1;
  if (name == "P2") return Stage::P2;
  if (name == "P3") return Stage::P3;
  if (name == "P4") return Stage::P4;
  if (name == "H") return Stage::H;
  throw certificate_error("unknown stage tag: " + name);
}

void assign_zero_stages(const ConstructionParams& params,
                        ResidueAssignment& a) {
  PrimeClasses classes = prime_classes(params);
  for (uint64_t p : classes.p1) a[p] = Entry{0, Stage::P1};
  for (uint64_t p : classes.p3) a[p] = Entry{0, Stage::P3};
}

Survivors enumerate_survivors(const ConstructionParams& params) {
  validate_params(params);
  PrimeClasses classes = prime_classes(params);
  std::vector<uint8_t> alive(params.U + 1, 1);
  alive[0] = 0;
  auto knock_out = [&](uint64_t p) {
    for (uint64_t n = p; n <= params.U; n += p) alive[n] = 0;
  };
  for (uint64_t p : classes.p1) knock_out(p);
  for (uint64_t p : classes.p3) knock_out(p);
  for (uint64_t h : params.tuple)
    if (h <= params.U) alive[h] = 0;

  Survivors s;
  std::vector<uint64_t> w_primes = primes::simple_primes_up_to(params.w);
  for (uint64_t n = 1; n <= params.U; ++n) {
    if (!alive[n]) continue;
    s.plus.push_back(n);
    s.minus.push_back(n);
    uint64_t rest = n;
    for (uint64_t p : w_primes) {
      if (p * p > rest) break;
      while (rest % p == 0) rest /= p;
    }
    if (rest > params.w) s.large_prime_form.push_back(n);
    else s.smooth_form.push_back(n);
  }
  return s;
}

std::vector<uint64_t> greedy_stage2(const ConstructionParams& params,
                                    Survivors& s, ResidueAssignment& a) {
  PrimeClasses classes = prime_classes(params);
  std::vector<uint64_t> trajectory;
  trajectory.push_back(s.plus.size());
  for (uint64_t p : classes.p2) {
    std::set<uint64_t> forbidden = forbidden_residues(params, p);
    // bucket both sides mod p; removals(alpha) = plus[n = -alpha] + minus[n = +alpha]
    std::vector<uint64_t> cnt_plus(p, 0), cnt_minus(p, 0);
    for (uint64_t n : s.plus) ++cnt_plus[n % p];
    for (uint64_t n : s.minus) ++cnt_minus[n % p];
    uint64_t best_alpha = p, best_gain = 0;
    bool have = false;
    for (uint64_t alpha = 0; alpha < p; ++alpha) {
      if (forbidden.count(alpha)) continue;
      uint64_t gain = cnt_plus[(p - alpha) % p];
      if (!params.paper_literal) gain += cnt_minus[alpha];
      if (!have || gain > best_gain) {
        have = true;
        best_alpha = alpha;
        best_gain = gain;
      }
    }
    if (!have)
      throw parameter_error("greedy_stage2: no permitted residue mod " +
                            std::to_string(p));
    a[p] = Entry{best_alpha, Stage::P2};
    uint64_t rm_plus = (p - best_alpha) % p;
    std::erase_if(s.plus, [&](uint64_t n) { return n % p == rm_plus; });
    std::erase_if(s.minus, [&](uint64_t n) { return n % p == best_alpha; });
    trajectory.push_back(s.plus.size());
  }
  return trajectory;
}

MatchResult match_stage4(const ConstructionParams& params, const Survivors& s,
                         ResidueAssignment& a) {
  PrimeClasses classes = prime_classes(params);
  std::vector<int64_t> order;
  for (uint64_t n : s.plus) order.push_back(static_cast<int64_t>(n));
  for (uint64_t n : s.minus) order.push_back(-static_cast<int64_t>(n));
  std::sort(order.begin(), order.end(), [](int64_t x, int64_t y) {
    uint64_t ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax > ay;  // decreasing magnitude
    return x > y;                  // positive before negative
  });

  std::set<uint64_t> unused(classes.p4.begin(), classes.p4.end());
  MatchResult result;
  for (int64_t n : order) {
    if (position_covered(a, n)) continue;  // an earlier pick got it already
    uint64_t chosen = 0;
    for (uint64_t p : unused) {
      if (mod_residue(n, p) == 0) continue;  // p | n
      bool bad = false;
      for (uint64_t h : params.tuple) {
        if (mod_residue(n - static_cast<int64_t>(h), p) == 0) {
          bad = true;  // covering n with p would also hit z + h
          break;
        }
      }
      if (!bad) {
        chosen = p;
        break;
      }
    }
    if (chosen == 0) {
      result.uncovered.push_back(n);
      continue;
    }
    unused.erase(chosen);
    a[chosen] = Entry{mod_residue(-n, chosen), Stage::P4};
    result.matched.emplace_back(n, chosen);
  }
  return result;
}

Certificate finalize(const ConstructionParams& params, ResidueAssignment a,
                     std::vector<uint64_t> trajectory, MatchResult match) {
  PrimeClasses classes = prime_classes(params);
  auto smallest_allowed = [&](uint64_t p) {
    std::set<uint64_t> forbidden = forbidden_residues(params, p);
    for (uint64_t alpha = 0; alpha < p; ++alpha)
      if (!forbidden.count(alpha)) return alpha;
    throw parameter_error("finalize: no permitted residue mod " +
                          std::to_string(p));
  };
  for (uint64_t p : classes.p4)
    if (!a.count(p)) a[p] = Entry{smallest_allowed(p), Stage::P4};
  for (uint64_t h : params.tuple) a[h] = Entry{smallest_allowed(h), Stage::H};

  Certificate cert;
  cert.params = params;
  cert.trajectory = std::move(trajectory);
  cert.matched = std::move(match.matched);
  cert.uncovered = std::move(match.uncovered);
  cert.assignment = std::move(a);

  int64_t u = static_cast<int64_t>(params.U);
  for (int64_t nu = -u; nu <= u; ++nu) {
    if (!position_covered(cert.assignment, nu))
      cert.open_positions.push_back(nu);
  }
  cert.achieved_u = max_covered_u(cert.assignment, params.tuple);

  cert.full = cert.uncovered.empty();
  for (int64_t nu : cert.open_positions) {
    uint64_t mag = static_cast<uint64_t>(nu < 0 ? -nu : nu);
    if (!std::binary_search(params.tuple.begin(), params.tuple.end(), mag))
      cert.full = false;
  }
  // a covered tuple position is a construction bug and must surface
  for (uint64_t h : params.tuple) {
    if (h <= params.U &&
        position_covered(cert.assignment, static_cast<int64_t>(h)))
      cert.full = false;
  }
  return cert;
}

Certificate build_certificate(const ConstructionParams& params) {
  validate_params(params);
  ResidueAssignment a;
  assign_zero_stages(params, a);
  Survivors s = enumerate_survivors(params);
  std::vector<uint64_t> trajectory = greedy_stage2(params, s, a);
  MatchResult match = match_stage4(params, s, a);
  return finalize(params, std::move(a), std::move(trajectory),
                  std::move(match));
}

bool position_covered(const ResidueAssignment& a, int64_t nu) {
  for (const auto& [p, e] : a) {
    if (mod_residue(nu + static_cast<int64_t>(e.alpha), p) == 0) return true;
  }
  return false;
}

std::optional<uint64_t> coverage_witness(const ResidueAssignment& a,
                                         int64_t nu) {
  for (const auto& [p, e] : a) {
    if (mod_residue(nu + static_cast<int64_t>(e.alpha), p) == 0) return p;
  }
  return std::nullopt;
}

uint64_t max_covered_u(const ResidueAssignment& a,
                       const std::vector<uint64_t>& tuple) {
  if (!position_covered(a, 0)) return 0;
  for (uint64_t u = 1;; ++u) {
    if (std::find(tuple.begin(), tuple.end(), u) != tuple.end()) continue;
    int64_t nu = static_cast<int64_t>(u);
    if (!position_covered(a, nu) || !position_covered(a, -nu)) return u - 1;
  }
}

VerifyReport verify_certificate(const Certificate& cert) {
  const ConstructionParams& params = cert.params;
  try {
    validate_params(params);
  } catch (const parameter_error& e) {
    throw certificate_error(std::string("certificate parameters invalid: ") +
                            e.what());
  }
  VerifyReport report;

  // structural pass: exactly one residue in range for every prime <= R
  // except q, with stage tags matching the classes
  PrimeClasses classes = prime_classes(params);
  std::map<uint64_t, Stage> expected;
  for (uint64_t p : classes.p1) expected[p] = Stage::P1;
  for (uint64_t p : classes.p2) expected[p] = Stage::P2;
  for (uint64_t p : classes.p3) expected[p] = Stage::P3;
  for (uint64_t p : classes.p4) expected[p] = Stage::P4;
  for (uint64_t h : params.tuple) expected[h] = Stage::H;
  for (const auto& [p, stage] : expected) {
    auto it = cert.assignment.find(p);
    if (it == cert.assignment.end())
      throw certificate_error("assignment misses prime " + std::to_string(p));
    if (it->second.alpha >= p)
      throw certificate_error("residue out of range at prime " +
                              std::to_string(p));
    if (it->second.stage != stage)
      throw certificate_error("stage tag mismatch at prime " +
                              std::to_string(p));
  }
  for (const auto& [p, e] : cert.assignment) {
    if (!expected.count(p))
      throw certificate_error("assignment holds a foreign prime " +
                              std::to_string(p));
    if ((e.stage == Stage::P1 || e.stage == Stage::P3) && e.alpha != 0)
      throw certificate_error("nonzero residue in a zero stage at prime " +
                              std::to_string(p));
  }

  bool ok = true;
  // tuple-preservation constraint at every prime
  for (const auto& [p, e] : cert.assignment) {
    for (uint64_t h : params.tuple) {
      if (mod_residue(-static_cast<int64_t>(h), p) == e.alpha) {
        std::ostringstream os;
        os << "alpha_" << p << " = " << e.alpha << " covers tuple offset "
           << h;
        report.issues.push_back(os.str());
        ok = false;
      }
    }
  }

  // coverage table recomputed from the assignment alone
  std::vector<int64_t> open;
  int64_t u = static_cast<int64_t>(params.U);
  for (int64_t nu = -u; nu <= u; ++nu)
    if (!position_covered(cert.assignment, nu)) open.push_back(nu);
  if (open != cert.open_positions) {
    int64_t divergent = 0;
    for (size_t i = 0; i < std::max(open.size(), cert.open_positions.size());
         ++i) {
      if (i >= open.size()) { divergent = cert.open_positions[i]; break; }
      if (i >= cert.open_positions.size()) { divergent = open[i]; break; }
      if (open[i] != cert.open_positions[i]) { divergent = open[i]; break; }
    }
    std::ostringstream os;
    os << "open-position list mismatches a recount, first at nu = "
       << divergent;
    report.issues.push_back(os.str());
    ok = false;
  }

  uint64_t achieved = max_covered_u(cert.assignment, params.tuple);
  if (achieved != cert.achieved_u) {
    std::ostringstream os;
    os << "achieved_u claims " << cert.achieved_u << " but scan gives "
       << achieved;
    report.issues.push_back(os.str());
    ok = false;
  }

  report.full = true;
  for (int64_t nu : open) {
    uint64_t mag = static_cast<uint64_t>(nu < 0 ? -nu : nu);
    if (!std::binary_search(params.tuple.begin(), params.tuple.end(), mag)) {
      report.full = false;
      break;
    }
  }
  for (uint64_t h : params.tuple) {
    if (h <= params.U &&
        position_covered(cert.assignment, static_cast<int64_t>(h))) {
      std::ostringstream os;
      os << "tuple position " << h << " is covered";
      report.issues.push_back(os.str());
      ok = false;
      report.full = false;
    }
  }
  if (cert.full != (report.full && cert.uncovered.empty())) {
    report.issues.push_back("full/partial flag does not match the tables");
    ok = false;
  }
  report.ok = ok;
  return report;
}

RealizedGap realize_gap(const Certificate& cert) {
  RealizedGap out;
  out.z = 0;
  out.modulus = 1;
  // incremental CRT over the assigned primes
  for (const auto& [p, e] : cert.assignment) {
    mpz_class pz = static_cast<unsigned long>(p);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), out.modulus.get_mpz_t(), pz.get_mpz_t()) ==
        0)
      throw certificate_error("realize_gap: moduli are not coprime");
    mpz_class target = static_cast<unsigned long>(e.alpha);
    mpz_class t = ((target - out.z) * inv) % pz;
    if (t < 0) t += pz;
    out.z += out.modulus * t;
    out.modulus *= pz;
  }

  // least representative with every covered x + nu a proper multiple
  mpz_class min_x = cert.params.R + cert.params.U + 1;
  out.witness_x = out.z;
  if (out.witness_x < min_x) {
    mpz_class deficit = min_x - out.witness_x;
    mpz_class steps = deficit / out.modulus;
    if (deficit % out.modulus != 0) steps += 1;
    out.witness_x += steps * out.modulus;
  }

  int64_t u = static_cast<int64_t>(cert.params.U);
  for (int64_t nu = -u; nu <= u; ++nu) {
    PositionReport pr;
    pr.nu = nu;
    uint64_t mag = static_cast<uint64_t>(nu < 0 ? -nu : nu);
    bool in_tuple = std::binary_search(cert.params.tuple.begin(),
                                       cert.params.tuple.end(), mag);
    pr.tuple_position = nu > 0 && in_tuple;
    pr.mirror_position = nu < 0 && in_tuple;
    if (auto w = coverage_witness(cert.assignment, nu)) pr.witness = *w;
    if (pr.tuple_position) {
      mpz_class value = out.witness_x + nu;
      if (value.fits_ulong_p()) {
        pr.prime_status = primes::is_prime(value.get_ui()) ? 1 : 0;
      }
    }
    out.positions.push_back(pr);
  }
  return out;
}

double mertens_prediction(uint64_t n0, const std::vector<uint64_t>& p2) {
  double pred = static_cast<double>(n0);
  for (uint64_t p : p2) pred *= 1.0 - 1.0 / static_cast<double>(p);
  return pred;
}

Stage2Diagnostics stage2_diagnostics(const Certificate& cert) {
  if (cert.trajectory.empty())
    throw parameter_error("stage2_diagnostics: empty trajectory");
  const ConstructionParams& params = cert.params;
  PrimeClasses classes = prime_classes(params);
  Stage2Diagnostics d;
  d.n0 = cert.trajectory.front();
  d.n_final = cert.trajectory.back();
  d.mertens_prediction = mertens_prediction(d.n0, classes.p2);

  double logR = std::log(static_cast<double>(params.R));
  Survivors s = enumerate_survivors(params);
  for (uint64_t p : classes.p2) {
    uint64_t bad = 0;
    for (uint64_t n : s.plus)
      for (uint64_t h : params.tuple)
        if (n % p == h % p) {
          ++bad;
          break;
        }
    double budget = static_cast<double>(s.plus.size()) / (4.0 * logR * logR);
    d.bad_class_counts.emplace_back(bad, budget);
    // replay this step's recorded choice
    auto it = cert.assignment.find(p);
    if (it == cert.assignment.end())
      throw certificate_error("stage2_diagnostics: assignment misses P2 prime");
    uint64_t alpha = it->second.alpha;
    uint64_t rm_plus = (p - alpha) % p;
    std::erase_if(s.plus, [&](uint64_t n) { return n % p == rm_plus; });
  }
  return d;
}

std::optional<AutoUResult> find_max_full_u(uint64_t R, unsigned m,
                                           std::vector<uint64_t> tuple,
                                           const DeriveOverrides& o,
                                           uint64_t u_hi) {
  if (u_hi == 0) u_hi = 8 * R;
  uint64_t builds = 0;
  for (uint64_t u = u_hi; u >= 1; --u) {
    DeriveOverrides local = o;
    local.U = u;
    ConstructionParams params = derive_params(R, m, tuple, std::nullopt, local);
    Certificate cert = build_certificate(params);
    ++builds;
    if (cert.full && cert.achieved_u >= u)
      return AutoUResult{std::move(cert), builds};
  }
  return std::nullopt;
}

}  // namespace gaplab::cover
