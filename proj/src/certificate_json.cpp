#include "gaplab/certificate_json.hpp"

#include "gaplab/version.hpp"

namespace gaplab::cover {

using nlohmann::json;

json certificate_to_json(const Certificate& cert) {
  json j;
  j["schema"] = kCertificateSchema;

  json params;
  params["R"] = cert.params.R;
  params["U"] = cert.params.U;
  params["m"] = cert.params.m;
  params["tuple"] = cert.params.tuple;
  params["v"] = cert.params.v;
  params["w"] = cert.params.w;
  if (cert.params.excluded_q) params["q"] = *cert.params.excluded_q;
  if (cert.params.c0) params["c0"] = *cert.params.c0;
  params["paper_literal"] = cert.params.paper_literal;
  params["clamped"] = cert.params.clamped;
  j["params"] = params;

  json entries = json::array();
  for (const auto& [p, e] : cert.assignment)
    entries.push_back({p, e.alpha, stage_name(e.stage)});
  j["entries"] = entries;

  j["trajectory"] = cert.trajectory;

  json matched = json::array();
  for (const auto& [n, p] : cert.matched) matched.push_back({n, p});
  j["matched"] = matched;

  j["open"] = cert.open_positions;
  j["uncovered"] = cert.uncovered;
  j["achieved_U"] = cert.achieved_u;
  j["status"] = cert.full ? "full" : "partial";
  return j;
}

std::string certificate_to_string(const Certificate& cert) {
  return certificate_to_json(cert).dump(2) + "\n";
}

namespace {

template <typename T>
T require(const json& j, const char* key) {
  if (!j.contains(key))
    throw certificate_error(std::string("certificate misses field: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw certificate_error(std::string("certificate field has wrong type: ") +
                            key);
  }
}

}  // namespace

Certificate certificate_from_json(const json& j) {
  if (require<std::string>(j, "schema") != kCertificateSchema)
    throw certificate_error("unsupported certificate schema");
  Certificate cert;
  if (!j.contains("params") || !j.at("params").is_object())
    throw certificate_error("certificate misses params");
  const json& params = j.at("params");
  cert.params.R = require<uint64_t>(params, "R");
  cert.params.U = require<uint64_t>(params, "U");
  cert.params.m = require<unsigned>(params, "m");
  cert.params.tuple = require<std::vector<uint64_t>>(params, "tuple");
  cert.params.v = require<uint64_t>(params, "v");
  cert.params.w = require<uint64_t>(params, "w");
  if (params.contains("q")) cert.params.excluded_q = params.at("q").get<uint64_t>();
  if (params.contains("c0")) cert.params.c0 = params.at("c0").get<double>();
  cert.params.paper_literal = require<bool>(params, "paper_literal");
  cert.params.clamped = require<bool>(params, "clamped");

  if (!j.contains("entries") || !j.at("entries").is_array())
    throw certificate_error("certificate misses entries");
  for (const json& row : j.at("entries")) {
    if (!row.is_array() || row.size() != 3)
      throw certificate_error("entry rows must be [prime, residue, stage]");
    uint64_t p = row.at(0).get<uint64_t>();
    Entry e;
    e.alpha = row.at(1).get<uint64_t>();
    e.stage = stage_from_name(row.at(2).get<std::string>());
    if (cert.assignment.count(p))
      throw certificate_error("duplicate assignment entry for prime " +
                              std::to_string(p));
    cert.assignment[p] = e;
  }

  cert.trajectory = require<std::vector<uint64_t>>(j, "trajectory");
  if (j.contains("matched")) {
    for (const json& row : j.at("matched")) {
      if (!row.is_array() || row.size() != 2)
        throw certificate_error("matched rows must be [survivor, prime]");
      cert.matched.emplace_back(row.at(0).get<int64_t>(),
                                row.at(1).get<uint64_t>());
    }
  }
  cert.open_positions = require<std::vector<int64_t>>(j, "open");
  cert.uncovered = require<std::vector<int64_t>>(j, "uncovered");
  cert.achieved_u = require<uint64_t>(j, "achieved_U");
  cert.full = require<std::string>(j, "status") == "full";
  return cert;
}

Certificate certificate_from_string(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw certificate_error("certificate is not valid JSON");
  return certificate_from_json(j);
}

}  // namespace gaplab::cover
