// gaplab: prime gaps, record statistics, admissible tuples, smooth counts,
// covering-system certificates and sign-change scans from one binary.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gaplab/certificate_json.hpp"
#include "gaplab/covering.hpp"
#include "gaplab/gap_analytics.hpp"
#include "gaplab/prime_engine.hpp"
#include "gaplab/signflip.hpp"
#include "gaplab/smooth_counter.hpp"
#include "gaplab/tuple_toolkit.hpp"
#include "gaplab/version.hpp"
#include "sha256.hpp"

using nlohmann::json;
using namespace gaplab;

namespace {

struct GlobalOpts {
  unsigned threads = 1;
  uint64_t seed = 0;  // reserved; every implemented path is deterministic
  std::string out;
  bool manifest = false;
  std::vector<std::string> argv_copy;
};

primes::SieveConfig sieve_config(const GlobalOpts& g) {
  primes::SieveConfig cfg;
  cfg.threads = g.threads;
  return cfg;
}

std::vector<uint64_t> parse_u64_list(const std::string& text) {
  std::vector<uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw parameter_error("empty element in list: " + text);
    size_t used = 0;
    unsigned long long v = std::stoull(item, &used);
    if (used != item.size())
      throw parameter_error("cannot parse integer '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw parameter_error("empty list");
  return out;
}

std::vector<int64_t> parse_i64_list(const std::string& text) {
  std::vector<int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw parameter_error("empty element in list: " + text);
    size_t used = 0;
    long long v = std::stoll(item, &used);
    if (used != item.size())
      throw parameter_error("cannot parse integer '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw parameter_error("empty list");
  return out;
}

// Emits the subcommand output and, on request, a manifest fingerprinting it.
void deliver(const GlobalOpts& g, const std::string& output) {
  if (g.out.empty()) {
    if (g.manifest)
      throw parameter_error("--manifest needs --out to place the manifest");
    std::cout << output;
    return;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) throw parameter_error("cannot open output file: " + g.out);
  file << output;
  file.close();
  if (g.manifest) {
    json m;
    m["schema"] = kManifestSchema;
    m["version"] = kVersion;
    m["command"] = g.argv_copy;
    m["output"] = g.out;
    m["sha256"] = tool::Sha256::of(output);
    std::ofstream mf(g.out + ".manifest.json", std::ios::binary);
    mf << m.dump(2) << "\n";
  }
}

// --- primes ------------------------------------------------------------

int run_primes(const GlobalOpts& g, uint64_t lo, uint64_t hi, bool count_only) {
  primes::SieveConfig cfg = sieve_config(g);
  std::ostringstream os;
  if (count_only) {
    os << primes::count_primes(lo, hi, cfg) << "\n";
  } else {
    primes::for_each_prime(lo, hi, [&](uint64_t p) { os << p << "\n"; }, cfg);
  }
  deliver(g, os.str());
  return 0;
}

// --- gaps --------------------------------------------------------------

int run_gap_records(const GlobalOpts& g, const std::string& stat_name,
                    unsigned k, uint64_t hi, const std::string& format) {
  gaps::RecordStat stat = gaps::record_stat_from_name(stat_name);
  std::vector<gaps::RatioRecord> records =
      gaps::ratio_records(stat, k, hi, sieve_config(g));
  if (format == "csv") {
    deliver(g, gaps::records_to_csv(stat, k, records));
  } else if (format == "json") {
    json j;
    j["schema"] = kRecordsSchema;
    j["stat"] = stat_name;
    j["k"] = k;
    j["hi"] = hi;
    json rows = json::array();
    for (const gaps::RatioRecord& r : records) {
      json row;
      row["n"] = r.n;
      row["p"] = r.p;
      row["num"] = r.num;
      row["den"] = r.den;
      row["window"] = r.window;
      rows.push_back(row);
    }
    j["records"] = rows;
    deliver(g, j.dump(2) + "\n");
  } else {
    throw parameter_error("unknown format: " + format);
  }
  return 0;
}

int run_gap_mean(const GlobalOpts& g, uint64_t n) {
  gaps::MeanGapCheck c = gaps::mean_gap_check(n, sieve_config(g));
  std::ostringstream os;
  os << "N " << c.n << "\n"
     << "p_next " << c.p_next << "\n"
     << "mean " << c.mean << "\n"
     << "log_N " << c.log_n << "\n"
     << "ratio " << c.ratio << "\n";
  deliver(g, os.str());
  return 0;
}

// --- tuples ------------------------------------------------------------

int run_tuples_find(const GlobalOpts& g, unsigned m, uint64_t lo, uint64_t hi) {
  tuples::TupleSearch found = tuples::find_tuple_42(m, lo, hi);
  std::ostringstream os;
  if (found.tuple) {
    for (size_t i = 0; i < found.tuple->offsets.size(); ++i)
      os << (i ? "," : "") << found.tuple->offsets[i];
    os << "\n";
    deliver(g, os.str());
    return 0;
  }
  os << "no tuple in range (searched " << found.nodes_visited << " nodes)\n";
  deliver(g, os.str());
  return 2;
}

int run_tuples_check(const GlobalOpts& g, const std::string& list,
                     bool profile) {
  std::vector<int64_t> offsets = parse_i64_list(list);
  bool admissible = tuples::is_admissible(offsets);
  std::ostringstream os;
  os << (admissible ? "admissible" : "inadmissible") << "\n";
  if (profile) {
    for (const auto& [p, classes] : tuples::occupancy_profile(offsets)) {
      os << "mod " << p << ":";
      for (uint64_t r : classes) os << " " << r;
      os << " (" << classes.size() << "/" << p << ")\n";
    }
  }
  deliver(g, os.str());
  return 0;
}

// --- smooth ------------------------------------------------------------

int run_smooth_psi(const GlobalOpts& g, uint64_t x, uint64_t y) {
  std::ostringstream os;
  os << smooth::psi_exact(x, y) << "\n";
  deliver(g, os.str());
  return 0;
}

int run_smooth_rankin_bound(const GlobalOpts& g, double x, double y) {
  std::ostringstream os;
  os << smooth::psi_rankin_bound(x, y) << "\n";
  deliver(g, os.str());
  return 0;
}

int run_smooth_survivor_bound(const GlobalOpts& g, uint64_t u, uint64_t w,
                              unsigned m) {
  std::ostringstream os;
  os << smooth::smooth_survivor_bound(u, w, m) << "\n";
  deliver(g, os.str());
  return 0;
}

int run_smooth_survivors(const GlobalOpts& g, uint64_t R, uint64_t U,
                         const std::string& tuple_list,
                         std::optional<uint64_t> q, std::optional<uint64_t> v,
                         std::optional<uint64_t> w) {
  std::vector<uint64_t> tuple;
  if (!tuple_list.empty()) tuple = parse_u64_list(tuple_list);
  cover::DeriveOverrides o;
  o.U = U;
  o.q = q;
  o.v = v;
  o.w = w;
  unsigned m = tuple.size();
  cover::ConstructionParams params =
      cover::derive_params(R, m, std::move(tuple), std::nullopt, o);
  smooth::SurvivorEstimate est = smooth::survivor_estimate(params);
  std::ostringstream os;
  os << "n0_exact " << est.n0_exact << "\n"
     << "n0_pnt " << est.n0_pnt << "\n"
     << "smooth_term " << est.smooth_term << "\n";
  deliver(g, os.str());
  return 0;
}

// --- cover -------------------------------------------------------------

int run_cover_build(const GlobalOpts& g, uint64_t R,
                    const std::string& tuple_list, std::optional<uint64_t> U,
                    bool auto_u, std::optional<uint64_t> q,
                    std::optional<uint64_t> v, std::optional<uint64_t> w,
                    std::optional<double> c0, bool paper_literal, bool diag) {
  std::vector<uint64_t> tuple;
  if (!tuple_list.empty()) tuple = parse_u64_list(tuple_list);
  unsigned m = tuple.size();
  cover::DeriveOverrides o;
  o.q = q;
  o.v = v;
  o.w = w;
  o.paper_literal = paper_literal;

  cover::Certificate cert;
  if (auto_u) {
    uint64_t u_hi = U.value_or(0);
    std::optional<cover::AutoUResult> found =
        cover::find_max_full_u(R, m, std::move(tuple), o, u_hi);
    if (!found)
      throw parameter_error("no fully covered radius found for these inputs");
    cert = std::move(found->cert);
  } else {
    o.U = U;
    cover::ConstructionParams params =
        cover::derive_params(R, m, std::move(tuple), c0, o);
    cert = cover::build_certificate(params);
  }

  std::string text = cover::certificate_to_string(cert);
  std::cerr << "built: R=" << cert.params.R << " U=" << cert.params.U
            << " achieved_U=" << cert.achieved_u
            << " status=" << (cert.full ? "full" : "partial") << "\n";
  if (diag) {
    cover::Stage2Diagnostics d = cover::stage2_diagnostics(cert);
    std::cerr << "stage2: N0=" << d.n0 << " N_final=" << d.n_final
              << " mertens_prediction=" << d.mertens_prediction << "\n";
    for (size_t j = 0; j < d.bad_class_counts.size(); ++j)
      std::cerr << "  step " << j + 1 << ": bad-class survivors "
                << d.bad_class_counts[j].first << " budget "
                << d.bad_class_counts[j].second << "\n";
  }
  deliver(g, text);
  return 0;
}

cover::Certificate load_certificate(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw parameter_error("cannot open certificate: " + path);
  std::stringstream buf;
  buf << file.rdbuf();
  return cover::certificate_from_string(buf.str());
}

int run_cover_verify(const GlobalOpts& g, const std::string& path) {
  cover::Certificate cert = load_certificate(path);
  cover::VerifyReport report = cover::verify_certificate(cert);
  std::ostringstream os;
  os << (report.ok ? "consistent" : "INVALID") << " "
     << (report.full ? "full" : "partial") << " achieved_U=" << cert.achieved_u
     << "\n";
  for (const std::string& issue : report.issues) os << issue << "\n";
  deliver(g, os.str());
  return report.ok ? 0 : 4;
}

int run_cover_realize(const GlobalOpts& g, const std::string& path) {
  cover::Certificate cert = load_certificate(path);
  cover::RealizedGap gap = cover::realize_gap(cert);
  std::ostringstream os;
  os << "z " << gap.z.get_str() << "\n";
  os << "modulus " << gap.modulus.get_str() << "\n";
  os << "witness_x " << gap.witness_x.get_str() << "\n";
  for (const cover::PositionReport& pr : gap.positions) {
    os << pr.nu << " ";
    if (pr.tuple_position) {
      os << "tuple";
      if (pr.prime_status == 1) os << " prime";
      else if (pr.prime_status == 0) os << " composite";
    } else if (pr.witness != 0) {
      os << "composite by " << pr.witness;
      if (pr.mirror_position) os << " (tuple mirror)";
    } else if (pr.mirror_position) {
      os << "tuple mirror open";
    } else {
      os << "open";
    }
    os << "\n";
  }
  deliver(g, os.str());
  return 0;
}

// --- signs -------------------------------------------------------------

int run_signs_scan(const GlobalOpts& g, const std::string& alphas, uint64_t N,
                   const std::string& format) {
  signs::SignPattern pattern = signs::pattern_from_string(alphas);
  signs::SignChangeReport report =
      signs::scan_sign_changes(pattern, N, sieve_config(g));
  if (format == "json") {
    json j;
    j["schema"] = kSignScanSchema;
    j["alphas"] = alphas;
    j["N"] = N;
    j["changes"] = report.change_positions.size();
    j["positions"] = report.change_positions;
    j["positives"] = report.positives;
    j["negatives"] = report.negatives;
    j["zeros"] = report.zeros;
    j["flags"]["polya"] = report.flags.polya;
    j["flags"]["sum_ratio"] = report.flags.sum_ratio;
    j["flags"]["dominant_term"] = report.flags.dominant_term;
    j["flags"]["ends_opposed"] = report.flags.ends_opposed;
    deliver(g, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    os << "changes " << report.change_positions.size() << "\n"
       << "positives " << report.positives << "\n"
       << "negatives " << report.negatives << "\n"
       << "zeros " << report.zeros << "\n"
       << "polya " << (report.flags.polya ? "yes" : "no") << "\n"
       << "sum_ratio " << report.flags.sum_ratio << "\n"
       << "dominant_term " << (report.flags.dominant_term ? "yes" : "no") << "\n"
       << "ends_opposed " << (report.flags.ends_opposed ? "yes" : "no") << "\n";
    deliver(g, os.str());
  }
  return 0;
}

int run_signs_from_a(const GlobalOpts& g, const std::string& list) {
  std::vector<mpq_class> a;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    mpq_class q;
    if (item.empty() || q.set_str(item, 10) != 0)
      throw parameter_error("cannot parse coefficient '" + item + "'");
    q.canonicalize();
    a.push_back(q);
  }
  signs::SignPattern pattern = signs::alpha_from_a(a);
  std::ostringstream os;
  for (size_t i = 0; i < pattern.alphas.size(); ++i)
    os << (i ? "," : "") << pattern.alphas[i].get_str();
  os << "\n";
  deliver(g, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prime-gap laboratory"};
  app.require_subcommand(1);

  GlobalOpts g;
  for (int i = 0; i < argc; ++i) g.argv_copy.push_back(argv[i]);
  app.add_option("--threads", g.threads, "worker threads for sieving");
  app.add_option("--seed", g.seed,
                 "reserved for future sampling diagnostics (unused)");
  app.add_option("--out", g.out, "write primary output to this file");
  app.add_flag("--manifest", g.manifest,
               "write <out>.manifest.json with a digest of the output");

  // primes
  auto* cmd_primes = app.add_subcommand("primes", "enumerate or count primes");
  uint64_t p_lo = 0, p_hi = 0;
  bool p_count = false;
  cmd_primes->add_option("--lo", p_lo, "range start (inclusive)");
  cmd_primes->add_option("--hi", p_hi, "range end (exclusive)")->required();
  cmd_primes->add_flag("--count-only", p_count, "print only the count");

  // gaps
  auto* cmd_gaps = app.add_subcommand("gaps", "consecutive-gap statistics");
  cmd_gaps->require_subcommand(1);
  auto* cmd_records = cmd_gaps->add_subcommand("records", "gap-ratio records");
  std::string r_stat = "forward", r_format = "csv";
  unsigned r_k = 1;
  uint64_t r_hi = 0;
  cmd_records->add_option("--stat", r_stat,
                          "forward | backward | twosided | chain");
  cmd_records->add_option("--k", r_k, "window size k >= 1");
  cmd_records->add_option("--hi", r_hi, "scan primes below this bound")
      ->required();
  cmd_records->add_option("--format", r_format, "csv | json");
  auto* cmd_mean = cmd_gaps->add_subcommand("mean", "mean-gap growth check");
  uint64_t mean_n = 0;
  cmd_mean->add_option("--N", mean_n, "number of gaps to average")->required();

  // tuples
  auto* cmd_tuples = app.add_subcommand("tuples", "admissible prime tuples");
  cmd_tuples->require_subcommand(1);
  auto* cmd_tfind = cmd_tuples->add_subcommand("find", "search a tuple");
  unsigned t_m = 0;
  uint64_t t_lo = 0, t_hi = 0;
  cmd_tfind->add_option("--m", t_m, "tuple size")->required();
  cmd_tfind->add_option("--lo", t_lo, "open lower bound")->required();
  cmd_tfind->add_option("--hi", t_hi, "open upper bound")->required();
  auto* cmd_tcheck = cmd_tuples->add_subcommand("check", "test admissibility");
  std::string t_list;
  bool t_profile = false;
  cmd_tcheck->add_option("offsets", t_list, "comma-separated offsets")
      ->required();
  cmd_tcheck->add_flag("--profile", t_profile, "print residue occupancy");

  // smooth
  auto* cmd_smooth = app.add_subcommand("smooth", "smooth-number counting");
  cmd_smooth->require_subcommand(1);
  auto* cmd_psi = cmd_smooth->add_subcommand("psi", "exact Psi(x, y)");
  uint64_t s_x = 0, s_y = 0;
  cmd_psi->add_option("--x", s_x)->required();
  cmd_psi->add_option("--y", s_y)->required();
  auto* cmd_rb = cmd_smooth->add_subcommand(
      "rankin-bound", "closed-form Psi upper-bound shape (diagnostic)");
  double rb_x = 0, rb_y = 0;
  cmd_rb->add_option("--x", rb_x)->required();
  cmd_rb->add_option("--y", rb_y)->required();
  auto* cmd_sb = cmd_smooth->add_subcommand(
      "survivor-bound", "(log U)^(m+1) * Psi(U, w) budget");
  uint64_t sb_u = 0, sb_w = 0;
  unsigned sb_m = 0;
  cmd_sb->add_option("--U", sb_u)->required();
  cmd_sb->add_option("--w", sb_w)->required();
  cmd_sb->add_option("--m", sb_m)->required();
  auto* cmd_sv = cmd_smooth->add_subcommand(
      "survivors", "exact and approximate survivor counts");
  uint64_t sv_r = 0, sv_u = 0;
  std::string sv_tuple;
  std::optional<uint64_t> sv_q, sv_v, sv_w;
  cmd_sv->add_option("--R", sv_r)->required();
  cmd_sv->add_option("--U", sv_u)->required();
  cmd_sv->add_option("--tuple", sv_tuple, "comma-separated tuple primes");
  cmd_sv->add_option("--q", sv_q, "excluded prime");
  cmd_sv->add_option("--v", sv_v, "P1/P2 cut override");
  cmd_sv->add_option("--w", sv_w, "P2/P3 cut override");

  // cover
  auto* cmd_cover = app.add_subcommand("cover", "covering-system pipeline");
  cmd_cover->require_subcommand(1);
  auto* cmd_build = cmd_cover->add_subcommand("build", "run the construction");
  uint64_t c_r = 0;
  std::string c_tuple;
  std::optional<uint64_t> c_u, c_q, c_v, c_w;
  std::optional<double> c_c0;
  bool c_auto = false, c_literal = false, c_diag = false;
  cmd_build->add_option("--R", c_r, "sieving limit")->required();
  cmd_build->add_option("--tuple", c_tuple, "comma-separated tuple primes");
  cmd_build->add_option("--U", c_u, "target half-length");
  cmd_build->add_flag("--auto-U", c_auto,
                      "search the largest fully covered half-length");
  cmd_build->add_option("--q", c_q, "prime excluded from the modulus");
  cmd_build->add_option("--v", c_v, "P1/P2 cut override");
  cmd_build->add_option("--w", c_w, "P2/P3 cut override");
  cmd_build->add_option("--c0", c_c0, "derive U = floor(c0 * R * f(R))");
  cmd_build->add_flag("--paper-literal", c_literal,
                      "greedy stage scores only the positive side");
  cmd_build->add_flag("--diag", c_diag, "print stage-2 diagnostics to stderr");
  auto* cmd_verify =
      cmd_cover->add_subcommand("verify", "re-check a certificate");
  std::string verify_path;
  cmd_verify->add_option("cert", verify_path, "certificate JSON")->required();
  auto* cmd_realize = cmd_cover->add_subcommand(
      "realize", "assemble the residue class and report the composite run");
  std::string realize_path;
  cmd_realize->add_option("cert", realize_path, "certificate JSON")->required();

  // signs
  auto* cmd_signs = app.add_subcommand("signs", "weighted gap-sum sign scans");
  cmd_signs->require_subcommand(1);
  auto* cmd_scan = cmd_signs->add_subcommand("scan", "count sign changes");
  std::string sg_alphas, sg_format = "text";
  uint64_t sg_n = 0;
  cmd_scan->add_option("--alphas", sg_alphas, "coefficients, e.g. 1,-1")
      ->required();
  cmd_scan->add_option("--N", sg_n, "scan bound")->required();
  cmd_scan->add_option("--format", sg_format, "text | json");
  auto* cmd_froma = cmd_signs->add_subcommand(
      "from-a", "prefix-sum coefficients from a zero-sum vector");
  std::string fa_list;
  cmd_froma->add_option("a", fa_list, "comma-separated zero-sum vector")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cmd_primes) return run_primes(g, p_lo, p_hi, p_count);
    if (*cmd_records) return run_gap_records(g, r_stat, r_k, r_hi, r_format);
    if (*cmd_mean) return run_gap_mean(g, mean_n);
    if (*cmd_tfind) return run_tuples_find(g, t_m, t_lo, t_hi);
    if (*cmd_tcheck) return run_tuples_check(g, t_list, t_profile);
    if (*cmd_psi) return run_smooth_psi(g, s_x, s_y);
    if (*cmd_rb) return run_smooth_rankin_bound(g, rb_x, rb_y);
    if (*cmd_sb) return run_smooth_survivor_bound(g, sb_u, sb_w, sb_m);
    if (*cmd_sv)
      return run_smooth_survivors(g, sv_r, sv_u, sv_tuple, sv_q, sv_v, sv_w);
    if (*cmd_build)
      return run_cover_build(g, c_r, c_tuple, c_u, c_auto, c_q, c_v, c_w, c_c0,
                             c_literal, c_diag);
    if (*cmd_verify) return run_cover_verify(g, verify_path);
    if (*cmd_realize) return run_cover_realize(g, realize_path);
    if (*cmd_scan) return run_signs_scan(g, sg_alphas, sg_n, sg_format);
    if (*cmd_froma) return run_signs_from_a(g, fa_list);
    std::cerr << "missing subcommand\n" << app.help() << "\n";
    return 2;
  } catch (const parameter_error& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const certificate_error& e) {
    std::cerr << "certificate error: " << e.what() << "\n";
    return 4;
  }
}
