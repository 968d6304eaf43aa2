#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "mfcert/error.hpp"
#include "mfcert/runner.hpp"

namespace mfcert {
namespace {

constexpr const char* kTrajectorySchema = "# mfcert trajectory v1";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

using CellKey = std::tuple<std::size_t, std::size_t, Inequality>;

std::map<CellKey, const MarginRecord*> index_cells(const MarginReport& report) {
  std::map<CellKey, const MarginRecord*> out;
  for (const auto& r : report.records) out.emplace(CellKey{r.step, r.k, r.inequality}, &r);
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
  out << content;
}

}  // namespace

std::string trajectory_csv(const RunResult& result) {
  const Trajectory& traj = result.trajectory;
  const auto cells = index_cells(result.report);
  auto cell = [&](std::size_t step, std::size_t k, Inequality q) -> const MarginRecord& {
    const auto it = cells.find({step, k, q});
    if (it == cells.end()) throw Error(ErrorCode::ShapeMismatch, "missing margin cell");
    return *it->second;
  };

  std::ostringstream out;
  out << kTrajectorySchema << '\n';
  out << "step,t,alpha,lambda,int_lambda,pickl_env,pickl_margin";
  for (std::size_t k : traj.k_values)
    out << ",one_minus_F_k" << k << ",fid_env_k" << k << ",fid_margin_k" << k << ",trace_dist_k" << k
        << ",trace_env_k" << k << ",trace_margin_k" << k << ",counting_defect_k" << k;
  out << ",norm_defect,energy,route_distance,lemma_cancel,lemma_projected\n";

  for (const auto& s : traj.samples) {
    const auto& pickl = cell(s.step, 0, Inequality::Pickl);
    out << s.step << ',' << num(s.t) << ',' << num(traj.alpha[s.step]) << ',' << num(traj.lambda[s.step]) << ','
        << num(lambda_integral(result.inputs, s.step)) << ',' << num(pickl.rhs) << ',' << num(pickl.margin);
    for (std::size_t c = 0; c < traj.k_values.size(); ++c) {
      const std::size_t k = traj.k_values[c];
      const auto& fid = cell(s.step, k, Inequality::Fidelity);
      const auto& tr = cell(s.step, k, Inequality::TraceNorm);
      out << ',' << num(fid.lhs) << ',' << num(fid.rhs) << ',' << num(fid.margin) << ',' << num(tr.lhs) << ','
          << num(tr.rhs) << ',' << num(tr.margin) << ',' << num(s.counting_defect[c]);
    }
    out << ',' << num(s.norm_defect) << ',' << num(s.energy) << ',' << num(s.route_distance) << ','
        << num(traj.lemma_cancel[s.step]) << ',' << num(traj.lemma_projected[s.step]) << '\n';
  }
  return out.str();
}

std::string summary_json(const RunResult& result) {
  nlohmann::ordered_json j;
  const ExperimentConfig& c = result.config;
  j["schema"] = "mfcert summary v1";
  j["name"] = c.name;
  j["passed"] = result.passed();
  j["exit_code"] = result.exit_code();
  j["config"] = {{"L", c.sites},
                 {"N", c.particles},
                 {"scenario", to_string(c.scenario)},
                 {"seed", c.seed},
                 {"dt", c.grid.dt},
                 {"t_final", c.grid.t_final},
                 {"k", c.k_values}};
  const auto& p = result.purification;
  j["purification"] = {{"fidelity0", p.fidelity0},
                       {"alpha0", p.alpha0},
                       {"overlap_sq", p.overlap_sq},
                       {"marginal_defect", p.marginal_defect},
                       {"symmetry_defect", p.symmetry_defect},
                       {"kernel_dim", p.kernel_dim},
                       {"initial_bound_margin", p.initial_bound_margin}};
  j["conservation"] = {{"max_norm_defect", result.max_norm_defect},
                       {"max_energy_drift", result.max_energy_drift}};
  if (!result.trajectory.times.empty())
    j["lambda_integral"] = lambda_integral(result.inputs, result.trajectory.times.size() - 1);
  j["certification"] = nlohmann::ordered_json::parse(result.report.summary_json());
  if (result.mixture) {
    j["mixture"] = {{"initial_fidelity_defect", result.mixture->initial_fidelity_defect},
                    {"max_gap", result.mixture->max_gap},
                    {"t_max_gap", result.mixture->t_max_gap}};
  }
  return j.dump(2) + "\n";
}

void write_outputs(const RunResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "plots");
  write_file(dir / "config.txt", result.config.to_text());
  write_file(dir / "trajectory.csv", trajectory_csv(result));
  write_file(dir / "margins.csv", result.report.to_csv());
  write_file(dir / "summary.json", summary_json(result));

  const Trajectory& traj = result.trajectory;
  {
    std::ostringstream out;
    out << "# t alpha pickl_envelope lambda int_lambda\n";
    for (std::size_t i = 0; i < traj.times.size(); ++i)
      out << num(traj.times[i]) << ' ' << num(traj.alpha[i]) << ' ' << num(pickl_envelope(result.inputs, i)) << ' '
          << num(traj.lambda[i]) << ' ' << num(lambda_integral(result.inputs, i)) << '\n';
    write_file(dir / "plots" / "alpha.dat", out.str());
  }
  const auto cells = index_cells(result.report);
  for (std::size_t k : traj.k_values) {
    std::ostringstream fid;
    std::ostringstream tr;
    fid << "# t one_minus_F envelope\n";
    tr << "# t trace_distance envelope\n";
    for (const auto& s : traj.samples) {
      const auto f = cells.find({s.step, k, Inequality::Fidelity});
      const auto d = cells.find({s.step, k, Inequality::TraceNorm});
      if (f != cells.end()) fid << num(s.t) << ' ' << num(f->second->lhs) << ' ' << num(f->second->rhs) << '\n';
      if (d != cells.end()) tr << num(s.t) << ' ' << num(d->second->lhs) << ' ' << num(d->second->rhs) << '\n';
    }
    write_file(dir / "plots" / ("fidelity_k" + std::to_string(k) + ".dat"), fid.str());
    write_file(dir / "plots" / ("trace_k" + std::to_string(k) + ".dat"), tr.str());
  }
  if (result.mixture) {
    std::ostringstream out;
    out << "# t to_mixed_hartree to_mixture_of_pure gap\n";
    const auto& m = *result.mixture;
    for (std::size_t i = 0; i < m.times.size(); ++i)
      out << num(m.times[i]) << ' ' << num(m.to_mixed[i]) << ' ' << num(m.to_mixture[i]) << ' ' << num(m.gap[i])
          << '\n';
    write_file(dir / "plots" / "mixture.dat", out.str());
  }
}

}  // namespace mfcert
