#pragma once

// Grid of (T, seed) runs fanned out over worker threads. Results are collected
// in grid order and written by one thread:
//   runs.jsonl   one summary record per cell (or an error record)
//   summary.csv  per-T mean and sample standard deviation of rew, v_max and
//                max_dual_l1 over the successful seeds
//
// Spec file:
//   {"instance": "stoch-k3m2" | "path.json" | {inline instance},
//    "algo": "exp3six", "T": [2000, 8000], "seeds": 20 | [1, 2, 3],
//    "seed_base": 0, "rho": 0.5, "delta": 0.05, "eta_override": 0.01,
//    "workers": 4, "out_dir": "sweep_out"}

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "bwlc/experiment.hpp"
#include "bwlc/jsonl.hpp"
#include "bwlc/parallel.hpp"

namespace bwlc {

struct SweepSpec {
  RunRequest base;  // T and seed are overwritten per cell
  std::vector<std::size_t> T_values;
  std::vector<std::uint64_t> seeds;
  unsigned workers = 0;  // 0 uses every hardware thread
  std::string out_dir = "sweep_out";
};

inline SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  SweepSpec s;
  const auto& inst = j.at("instance");
  if (inst.is_object()) {
    s.base.inline_spec = instance_from_json(inst);
  } else {
    s.base.instance = inst.get<std::string>();
  }
  s.base.algo = algo_from_string(j.value("algo", std::string("exp3six")));
  s.base.rho = j.value("rho", 0.5);
  s.base.delta = j.value("delta", 0.05);
  if (j.contains("eta_override") && !j["eta_override"].is_null()) {
    s.base.eta_override = j["eta_override"].get<double>();
  }
  if (j.contains("M")) s.base.lazy_M = j["M"].get<double>();

  const auto& T = j.at("T");
  s.T_values = T.is_array() ? T.get<std::vector<std::size_t>>() : std::vector<std::size_t>{T.get<std::size_t>()};
  const auto& seeds = j.value("seeds", nlohmann::json(1));
  if (seeds.is_array()) {
    s.seeds = seeds.get<std::vector<std::uint64_t>>();
  } else {
    const auto base = j.value("seed_base", std::uint64_t{0});
    for (std::uint64_t k = 0; k < seeds.get<std::uint64_t>(); ++k) s.seeds.push_back(base + k);
  }
  s.workers = j.value("workers", 0u);
  s.out_dir = j.value("out_dir", std::string("sweep_out"));
  if (s.T_values.empty() || s.seeds.empty()) throw std::invalid_argument("sweep spec: need at least one T and one seed");
  return s;
}

inline SweepSpec load_sweep_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open sweep spec: " + path);
  return sweep_spec_from_json(nlohmann::json::parse(in));
}

struct SweepCell {
  std::size_t T = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  nlohmann::json record;
  double rew = 0.0, v_max = 0.0, max_dual_l1 = 0.0;
};

struct SweepRow {
  std::size_t T = 0;
  std::size_t runs = 0;
  std::size_t failed = 0;
  double rew_mean = 0.0, rew_std = 0.0;
  double v_max_mean = 0.0, v_max_std = 0.0;
  double dual_mean = 0.0, dual_std = 0.0;
};

struct SweepOutcome {
  std::vector<SweepCell> cells;  // T-major, seeds in spec order
  std::vector<SweepRow> rows;    // one per T value
};

namespace detail {

inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  CompensatedSum s;
  for (double x : xs) s.add(x);
  const double mean = s.value() / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  CompensatedSum sq;
  for (double x : xs) sq.add((x - mean) * (x - mean));
  return {mean, std::sqrt(sq.value() / static_cast<double>(xs.size() - 1))};
}

}  // namespace detail

inline SweepOutcome run_sweep(const SweepSpec& spec) {
  SweepOutcome out;
  for (std::size_t T : spec.T_values) {
    for (std::uint64_t seed : spec.seeds) out.cells.push_back({T, seed});
  }
  parallel_for(out.cells.size(), spec.workers ? spec.workers : default_workers(), [&](std::size_t k) {
    SweepCell& cell = out.cells[k];
    RunRequest req = spec.base;
    req.T = cell.T;
    req.seed = cell.seed;
    try {
      const RunResult r = run_experiment(req);
      cell.record = summary_json(r);
      cell.rew = r.metrics.rew;
      cell.v_max = r.metrics.v_max;
      cell.max_dual_l1 = r.metrics.max_dual_l1;
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.error = e.what();
      cell.record = {{"type", "error"}, {"git", git_describe()}, {"T", cell.T}, {"seed", cell.seed},
                     {"error", cell.error}};
    }
  });

  for (std::size_t T : spec.T_values) {
    SweepRow row{T};
    std::vector<double> rew, vmax, dual;
    for (const auto& c : out.cells) {
      if (c.T != T) continue;
      ++row.runs;
      if (!c.ok) {
        ++row.failed;
        continue;
      }
      rew.push_back(c.rew);
      vmax.push_back(c.v_max);
      dual.push_back(c.max_dual_l1);
    }
    std::tie(row.rew_mean, row.rew_std) = detail::mean_std(rew);
    std::tie(row.v_max_mean, row.v_max_std) = detail::mean_std(vmax);
    std::tie(row.dual_mean, row.dual_std) = detail::mean_std(dual);
    out.rows.push_back(row);
  }
  return out;
}

inline void write_sweep_summary(std::ostream& os, const SweepOutcome& outcome) {
  CsvWriter csv(os);
  csv.header({"T", "runs", "failed", "rew_mean", "rew_std", "v_max_mean", "v_max_std", "max_dual_l1_mean",
              "max_dual_l1_std"});
  for (const auto& r : outcome.rows) {
    csv.row({CsvWriter::cell(r.T), CsvWriter::cell(r.runs), CsvWriter::cell(r.failed), CsvWriter::cell(r.rew_mean),
             CsvWriter::cell(r.rew_std), CsvWriter::cell(r.v_max_mean), CsvWriter::cell(r.v_max_std),
             CsvWriter::cell(r.dual_mean), CsvWriter::cell(r.dual_std)});
  }
}

// Writes runs.jsonl and summary.csv under `dir`, creating it if needed.
inline void write_sweep(const SweepOutcome& outcome, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream runs(dir / "runs.jsonl");
  std::ofstream summary(dir / "summary.csv");
  if (!runs || !summary) throw std::runtime_error("cannot write sweep output under " + dir.string());
  for (const auto& c : outcome.cells) write_json_line(runs, c.record);
  write_sweep_summary(summary, outcome);
}

}  // namespace bwlc
