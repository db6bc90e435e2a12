// Command-line front end: run, sweep, baselines, verify.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "bwlc/bwlc.hpp"

namespace {

using namespace bwlc;

struct RunOptions {
  std::string instance = "stoch-k3m2";
  std::string algo = "exp3six";
  std::size_t T = 0;
  double rho = 0.5;
  double delta = 0.05;
  std::uint64_t seed = 0;
  std::optional<double> eta;
  std::optional<double> M;
  std::string out;
  bool full_trace = false;
};

// Writes to the file at `path`, or stdout when it is empty or "-".
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int do_run(const RunOptions& o) {
  RunRequest req;
  req.instance = o.instance;
  req.algo = algo_from_string(o.algo);
  req.T = o.T;
  req.rho = o.rho;
  req.delta = o.delta;
  req.seed = o.seed;
  req.eta_override = o.eta;
  req.lazy_M = o.M;
  req.full_trace = o.full_trace;
  const RunResult result = run_experiment(req);
  Output out(o.out);
  if (o.full_trace) {
    for (const auto& rec : result.trace.records()) write_json_line(out.stream(), round_json(rec));
  }
  write_json_line(out.stream(), summary_json(result));
  return 0;
}

int do_sweep(const std::string& spec_path, const std::string& out_dir, unsigned workers) {
  SweepSpec spec = load_sweep_spec(spec_path);
  if (!out_dir.empty()) spec.out_dir = out_dir;
  if (workers) spec.workers = workers;
  const auto outcome = run_sweep(spec);
  write_sweep(outcome, spec.out_dir);
  write_sweep_summary(std::cout, outcome);
  std::size_t failed = 0;
  for (const auto& c : outcome.cells) {
    if (!c.ok) {
      ++failed;
      std::cerr << "cell T=" << c.T << " seed=" << c.seed << " failed: " << c.error << '\n';
    }
  }
  std::cerr << outcome.cells.size() << " runs, " << failed << " failed; results in " << spec.out_dir << '\n';
  return failed ? 3 : 0;
}

int do_baselines(const std::string& instance, std::size_t T, double rho) {
  RunRequest req;
  req.instance = instance;
  req.T = T;
  req.rho = rho;
  const InstanceSpec spec = resolve_instance(req);
  nlohmann::json j = baselines_json(baselines(spec));
  j["instance"] = instance;
  j["kind"] = to_string(spec.kind());
  j["T"] = spec.T;
  write_json_line(std::cout, j);
  return 0;
}

void print_table(const std::string& title, const std::vector<CriterionResult>& rows) {
  std::cout << title << '\n';
  for (const auto& r : rows) {
    std::cout << "  " << (r.passed ? "PASS" : "FAIL") << "  " << std::setw(2) << r.id << "  " << std::left
              << std::setw(48) << r.name << std::right << std::fixed << std::setprecision(2) << std::setw(8)
              << r.seconds << "s  " << r.detail << '\n';
    std::cout.unsetf(std::ios::fixed);
  }
}

int do_verify(const std::string& which, int criterion, unsigned workers) {
  bool all_passed = true;
  auto tally = [&](const std::vector<CriterionResult>& rows) {
    for (const auto& r : rows) all_passed = all_passed && r.passed;
  };
  if (which == "all" || which == "properties") {
    const auto rows = run_properties();
    print_table("properties", rows);
    tally(rows);
  }
  if (which == "all" || which == "acceptance") {
    AcceptanceSuite suite(workers ? workers : default_workers());
    const auto rows = criterion ? std::vector<CriterionResult>{suite.run(criterion)} : suite.run_all();
    print_table("acceptance", rows);
    tally(rows);
  }
  return all_passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primal-dual bandits with long-term constraints"};
  app.require_subcommand(1);
  app.set_version_flag("--version", bwlc::git_describe());

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "run one experiment and print JSON-lines output");
  run_cmd->add_option("--instance", run.instance, "builtin instance name or path to an instance JSON file")
      ->capture_default_str();
  run_cmd->add_option("--algo", run.algo, "primal algorithm")
      ->check(CLI::IsMember({"exp3six", "contextual", "lazy"}))
      ->capture_default_str();
  run_cmd->add_option("--T", run.T, "horizon (0 keeps the instance default)");
  run_cmd->add_option("--rho", run.rho, "margin parameter for builtin scripted instances")->capture_default_str();
  run_cmd->add_option("--delta", run.delta, "confidence parameter")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "master seed")->capture_default_str();
  run_cmd->add_option("--eta", run.eta, "override the dual learning rate");
  run_cmd->add_option("--M", run.M, "dual level of the lazy pair (default 1/rho)");
  run_cmd->add_option("--out", run.out, "output file (default stdout)");
  run_cmd->add_flag("--full-trace", run.full_trace, "emit one JSON record per round before the summary");

  std::string sweep_spec, sweep_out;
  unsigned sweep_workers = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a grid of experiments in parallel");
  sweep_cmd->add_option("--spec", sweep_spec, "sweep specification JSON")->required()->check(CLI::ExistingFile);
  sweep_cmd->add_option("--out", sweep_out, "output directory (overrides the spec)");
  sweep_cmd->add_option("--workers", sweep_workers, "worker threads (default: all cores)");

  std::string base_instance = "stoch-k3m2";
  std::size_t base_T = 0;
  double base_rho = 0.5;
  auto* base_cmd = app.add_subcommand("baselines", "print the baseline report of an instance as JSON");
  base_cmd->add_option("--instance", base_instance, "builtin instance name or path")->capture_default_str();
  base_cmd->add_option("--T", base_T, "horizon (0 keeps the instance default)");
  base_cmd->add_option("--rho", base_rho, "margin parameter for builtin scripted instances")->capture_default_str();

  std::string verify_which = "all";
  int verify_criterion = 0;
  unsigned verify_workers = 0;
  auto* verify_cmd = app.add_subcommand("verify", "run the property and acceptance suites");
  verify_cmd->add_option("--suite", verify_which, "which suite to run")
      ->check(CLI::IsMember({"all", "properties", "acceptance"}))
      ->capture_default_str();
  verify_cmd->add_option("--criterion", verify_criterion, "run a single acceptance criterion")
      ->check(CLI::Range(1, bwlc::AcceptanceSuite::kCount));
  verify_cmd->add_option("--workers", verify_workers, "worker threads (default: all cores)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(run);
    if (*sweep_cmd) return do_sweep(sweep_spec, sweep_out, sweep_workers);
    if (*base_cmd) return do_baselines(base_instance, base_T, base_rho);
    if (*verify_cmd) {
      return do_verify(verify_criterion ? std::string("acceptance") : verify_which, verify_criterion, verify_workers);
    }
  } catch (const bwlc::AssumptionViolation& e) {
    std::cerr << "assumption violated: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
