#pragma once

// JSON schema (version 1) for InstanceSpec. Tables are flattened row-major:
//
//   {"v": 1, "kind": "adversarial-scripted", "K": 3, "m": 1, "T": 9,
//    "phases": [{"first": 1, "last": 3, "rewards": [K], "costs": [K*m]}, ...]}
//
//   {"v": 1, "kind": "stochastic", "K", "m", "T",
//    "mean_rewards": [K], "mean_costs": [K*m], "noise": "bernoulli" | "none"}
//
//   {"v": 1, "kind": "contextual-linear", "K", "m", "T", "d", "n_contexts",
//    "features": [n_contexts*K*d], "theta_f": [d], "theta_g": [m*d],
//    "schedule": "iid" | [context indices], "noise": "bernoulli" | "none"}

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bwlc/environments.hpp"

namespace bwlc {

inline constexpr int kInstanceSchemaVersion = 1;

inline std::string to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kAdversarialScripted:
      return "adversarial-scripted";
    case InstanceKind::kStochastic:
      return "stochastic";
    case InstanceKind::kContextualLinear:
      return "contextual-linear";
  }
  return "unknown";
}

inline std::string to_string(NoiseModel noise) { return noise == NoiseModel::kNone ? "none" : "bernoulli"; }

inline NoiseModel noise_from_string(const std::string& s) {
  if (s == "none") return NoiseModel::kNone;
  if (s == "bernoulli") return NoiseModel::kBernoulli;
  throw std::invalid_argument("instance json: unknown noise model '" + s + "'");
}

inline nlohmann::json instance_to_json(const InstanceSpec& spec) {
  nlohmann::json j;
  j["v"] = kInstanceSchemaVersion;
  j["kind"] = to_string(spec.kind());
  j["K"] = spec.K;
  j["m"] = spec.m;
  j["T"] = spec.T;
  if (const auto* s = std::get_if<ScriptedSpec>(&spec.body)) {
    j["phases"] = nlohmann::json::array();
    for (const auto& ph : s->phases) {
      j["phases"].push_back(
          {{"first", ph.first}, {"last", ph.last}, {"rewards", ph.rewards}, {"costs", ph.costs.data()}});
    }
  } else if (const auto* s = std::get_if<StochasticSpec>(&spec.body)) {
    j["mean_rewards"] = s->mean_rewards;
    j["mean_costs"] = s->mean_costs.data();
    j["noise"] = to_string(s->noise);
  } else {
    const auto& c = std::get<ContextualSpec>(spec.body);
    j["d"] = c.d;
    j["n_contexts"] = c.n_contexts;
    j["features"] = c.features;
    j["theta_f"] = c.theta_f;
    j["theta_g"] = c.theta_g.data();
    if (c.schedule.empty()) {
      j["schedule"] = "iid";
    } else {
      j["schedule"] = c.schedule;
    }
    j["noise"] = to_string(c.noise);
  }
  return j;
}

inline InstanceSpec instance_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("instance json: expected an object");
  if (j.value("v", 0) != kInstanceSchemaVersion) {
    throw std::invalid_argument("instance json: unsupported schema version (expected \"v\": 1)");
  }
  InstanceSpec spec;
  spec.K = j.at("K").get<std::size_t>();
  spec.m = j.at("m").get<std::size_t>();
  spec.T = j.at("T").get<std::size_t>();
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "adversarial-scripted") {
    ScriptedSpec s;
    for (const auto& p : j.at("phases")) {
      s.phases.push_back({p.at("first").get<std::size_t>(), p.at("last").get<std::size_t>(),
                          p.at("rewards").get<std::vector<double>>(),
                          Matrix(spec.K, spec.m, p.at("costs").get<std::vector<double>>())});
    }
    spec.body = std::move(s);
  } else if (kind == "stochastic") {
    spec.body = StochasticSpec{j.at("mean_rewards").get<std::vector<double>>(),
                               Matrix(spec.K, spec.m, j.at("mean_costs").get<std::vector<double>>()),
                               noise_from_string(j.value("noise", std::string("bernoulli")))};
  } else if (kind == "contextual-linear") {
    ContextualSpec c;
    c.d = j.at("d").get<std::size_t>();
    c.n_contexts = j.at("n_contexts").get<std::size_t>();
    c.features = j.at("features").get<std::vector<double>>();
    c.theta_f = j.at("theta_f").get<std::vector<double>>();
    c.theta_g = Matrix(spec.m, c.d, j.at("theta_g").get<std::vector<double>>());
    const auto& sched = j.value("schedule", nlohmann::json("iid"));
    if (sched.is_array()) {
      c.schedule = sched.get<std::vector<std::size_t>>();
    } else if (sched != "iid") {
      throw std::invalid_argument("instance json: schedule must be \"iid\" or a list of contexts");
    }
    c.noise = noise_from_string(j.value("noise", std::string("bernoulli")));
    spec.body = std::move(c);
  } else {
    throw std::invalid_argument("instance json: unknown kind '" + kind + "'");
  }
  spec.validate();
  return spec;
}

inline InstanceSpec load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  return instance_from_json(nlohmann::json::parse(in));
}

}  // namespace bwlc
