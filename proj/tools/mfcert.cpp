// mfcert command-line driver.
//
//   mfcert run <config|preset> [--seed S] [--out-dir D] [--dt X] [--t-final T] [--k 1,2] [--tol E]
//   mfcert sweep "<glob>" [--jobs J] [overrides...]
//   mfcert check [--seed S]
//   mfcert demo-mixture [overrides...]
//
// Exit status: 0 all certifications pass, 2 a certification failed, 1 usage
// or configuration error.

#include <glob.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mfcert/config.hpp"
#include "mfcert/error.hpp"
#include "mfcert/property_checks.hpp"
#include "mfcert/runner.hpp"

namespace {

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> dt;
  std::optional<double> t_final;
  std::optional<std::string> k;
  std::optional<double> tol;

  void attach(CLI::App* app) {
    app->add_option("--seed", seed, "random seed");
    app->add_option("--out-dir", out_dir, "output directory");
    app->add_option("--dt", dt, "time step");
    app->add_option("--t-final", t_final, "final time");
    app->add_option("--k", k, "comma-separated marginal orders");
    app->add_option("--tol", tol, "certification tolerance");
  }

  void apply(mfcert::ExperimentConfig& c) const {
    if (seed) c.seed = *seed;
    if (out_dir) c.out_dir = *out_dir;
    if (dt) c.grid.dt = *dt;
    if (t_final) c.grid.t_final = *t_final;
    if (k) c.set("k", *k);
    if (tol) c.tolerance = *tol;
  }
};

mfcert::ExperimentConfig resolve(const std::string& source) {
  if (std::filesystem::exists(source)) return mfcert::load_config(source);
  return mfcert::preset_config(source);
}

void print_result(const mfcert::RunResult& r, double seconds) {
  const auto& rep = r.report;
  std::printf("%-24s %s  cells=%zu violations=%zu  F0=%.6f alpha0=%.3e  %.2fs\n", r.config.name.c_str(),
              r.passed() ? "PASS" : "FAIL", rep.records.size(), rep.violations(), r.purification.fidelity0,
              r.purification.alpha0, seconds);
  if (auto v = rep.first_violation())
    std::printf("  first violation: %s at t=%.6g k=%zu lhs=%.17g rhs=%.17g\n",
                std::string(mfcert::to_string(v->inequality)).c_str(), v->t, v->k, v->lhs, v->rhs);
  if (r.mixture)
    std::printf("  mixture: initial defect %.3e, max gap %.6e at t=%.4g\n", r.mixture->initial_fidelity_defect,
                r.mixture->max_gap, r.mixture->t_max_gap);
}

int run_one(mfcert::ExperimentConfig config) {
  const auto start = std::chrono::steady_clock::now();
  const mfcert::RunResult result = mfcert::run(config);
  mfcert::write_outputs(result, config.out_dir);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  print_result(result, seconds);
  return result.exit_code();
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  std::vector<std::string> out;
  if (::glob(pattern.c_str(), 0, nullptr, &g) == 0)
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  ::globfree(&g);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean-field certification laboratory"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string source;
  auto* run_cmd = app.add_subcommand("run", "run one config file or preset (smoke, paper-check, mixture)");
  run_cmd->add_option("config", source, "config path or preset name")->required();
  overrides.attach(run_cmd);

  std::string pattern;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep_cmd = app.add_subcommand("sweep", "run every config matching a glob concurrently");
  sweep_cmd->add_option("pattern", pattern, "config glob")->required();
  sweep_cmd->add_option("--jobs", jobs, "worker count");
  Overrides sweep_overrides;
  sweep_overrides.attach(sweep_cmd);

  std::uint64_t check_seed = 20240601;
  auto* check_cmd = app.add_subcommand("check", "randomized property suites only");
  check_cmd->add_option("--seed", check_seed, "random seed");

  Overrides demo_overrides;
  auto* demo_cmd = app.add_subcommand("demo-mixture", "mixture counterexample demo");
  demo_overrides.attach(demo_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mfcert::kExitUsage;
  }

  try {
    if (*run_cmd) {
      auto config = resolve(source);
      overrides.apply(config);
      return run_one(config);
    }
    if (*demo_cmd) {
      auto config = mfcert::preset_config("mixture");
      demo_overrides.apply(config);
      return run_one(config);
    }
    if (*check_cmd) {
      bool ok = true;
      for (const auto& r : mfcert::run_property_suites(check_seed)) {
        std::printf("%-24s %s  cases=%zu worst=%.3e threshold=%.1e\n", r.name.c_str(), r.passed ? "PASS" : "FAIL",
                    r.cases, r.worst, r.threshold);
        ok = ok && r.passed;
      }
      return ok ? mfcert::kExitPass : mfcert::kExitCertificationFailure;
    }
    if (*sweep_cmd) {
      const auto paths = expand_glob(pattern);
      if (paths.empty()) {
        std::fprintf(stderr, "no configs match %s\n", pattern.c_str());
        return mfcert::kExitUsage;
      }
      // Configs are validated up front so a typo fails before any run starts.
      std::vector<mfcert::ExperimentConfig> configs;
      for (const auto& p : paths) {
        auto c = mfcert::load_config(p);
        sweep_overrides.apply(c);
        if (sweep_overrides.out_dir) c.out_dir = std::filesystem::path(*sweep_overrides.out_dir) / c.name;
        c.validate();
        configs.push_back(std::move(c));
      }
      int worst = mfcert::kExitPass;
      std::size_t next = 0;
      while (next < configs.size()) {
        std::vector<std::future<int>> batch;
        for (unsigned j = 0; j < jobs && next < configs.size(); ++j, ++next)
          batch.push_back(std::async(std::launch::async, [c = configs[next]] { return run_one(c); }));
        for (auto& f : batch) worst = std::max(worst, f.get());
      }
      return worst;
    }
  } catch (const mfcert::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code() == mfcert::ErrorCode::CertificationFailure ? mfcert::kExitCertificationFailure
                                                                 : mfcert::kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return mfcert::kExitUsage;
  }
  return mfcert::kExitUsage;
}
