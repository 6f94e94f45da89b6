#pragma once

// Line-delimited JSON records for the CLI and the bench.

#include <gmpxx.h>

#include <optional>
#include <string>

#include "json.hpp"
#include "logdepth/bench.hpp"
#include "logdepth/formula.hpp"
#include "logdepth/pit.hpp"

namespace logdepth {

using json = nlohmann::ordered_json;

inline json to_json(const GateMetrics& m) {
  return json{{"size", m.size},
              {"depth", m.depth},
              {"sum_depth", m.sum_depth},
              {"product_depth", m.product_depth},
              {"syn_degree", m.syn_degree},
              {"max_fanin", m.max_fanin}};
}

struct Report {
  std::string pass;
  GateMetrics input;
  std::optional<GateMetrics> output;
  std::optional<std::uint32_t> delta;
  std::optional<mpq_class> epsilon;
  std::optional<std::uint32_t> phi;
  std::optional<std::string> bound_size;
  std::optional<std::string> verdict;  // "equal" / "unequal"
  std::optional<std::string> method;
  std::optional<std::uint64_t> seed;
  double duration_ms = 0;
  json extra = json::object();

  json to_json() const {
    json j;
    j["pass"] = pass;
    j["input"] = logdepth::to_json(input);
    if (output) j["output"] = logdepth::to_json(*output);
    json params = json::object();
    if (delta) params["delta"] = *delta;
    if (epsilon) params["epsilon"] = epsilon->get_str();
    if (phi) params["phi"] = *phi;
    if (bound_size) params["bound_size"] = *bound_size;
    if (seed) params["seed"] = *seed;
    j["params"] = params;
    if (verdict) j["verdict"] = *verdict;
    if (method) j["method"] = *method;
    for (const auto& [k, v] : extra.items()) j[k] = v;
    j["duration_ms"] = duration_ms;
    return j;
  }
  std::string line() const { return to_json().dump(); }
};

inline json to_json(const FrontierRow& r, bool timing = true) {
  json j;
  j["index"] = r.index;
  j["family"] = r.family;
  j["pass"] = r.pass;
  j["seed"] = r.seed;
  j["s_in"] = r.s_in;
  j["d"] = r.d;
  j["depth_in"] = r.depth_in;
  j["depth_out"] = r.depth_out;
  j["product_depth_out"] = r.product_depth_out;
  j["size_out"] = r.size_out;
  j["phi"] = r.phi ? json(*r.phi) : json(nullptr);
  j["delta"] = r.delta ? json(*r.delta) : json(nullptr);
  j["bound_size"] = r.bound_size ? json(*r.bound_size) : json(nullptr);
  j["bound_depth"] = r.bound_depth ? json(*r.bound_depth) : json(nullptr);
  j["verified"] = r.verified;
  j["verify_method"] = r.verify_method;
  j["status"] = r.status;
  j["duration_ms"] = timing ? r.duration_ms : 0.0;
  return j;
}

inline json to_json(const FittedConstants& c) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return json{{"c_depth", opt(c.c_depth)},
              {"c_size", opt(c.c_size)},
              {"c_size_eps", opt(c.c_size_eps)},
              {"rows_used", c.rows_used}};
}

inline json to_json(const PitWitness& w) {
  json point = json::object();
  for (const auto& [v, m] : w.point) {
    json entries = json::array();
    for (auto x : m.a) entries.push_back(x);
    point[var::name(v)] = entries;
  }
  return json{{"trial", w.trial}, {"dim", w.dim}, {"point", point}};
}

}  // namespace logdepth
