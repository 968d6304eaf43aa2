#include <algorithm>
#include <cmath>

#include "mfcert/error.hpp"
#include "mfcert/metrics.hpp"
#include "mfcert/runner.hpp"

namespace mfcert {

RunResult run(const ExperimentConfig& config) {
  config.validate();
  RunResult result;
  result.config = config;

  const TorusModel model = make_model(config.sites, config.one_body, config.potential);

  std::optional<MixtureScenario> mixture;
  InitialData data = [&]() -> InitialData {
    switch (config.scenario) {
      case ScenarioKind::Product:
        return scenario_product(config.seed, config.sites, config.particles, config.effective_rank());
      case ScenarioKind::NearProduct:
        return scenario_near_product(config.seed, config.sites, config.particles, config.epsilon,
                                     config.effective_rank());
      case ScenarioKind::Mixture:
        mixture = scenario_mixture_counterexample(config.seed, config.sites, config.particles);
        return mixture->data;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown scenario");
  }();

  const PurifiedPair pair = purify_n_body(data.gamma_n, data.gamma_one);
  const DensityMatrix product(kron_power(data.gamma_one.matrix(), config.particles), data.gamma_n.shape());
  PurificationSummary& ps = result.purification;
  ps.fidelity0 = fidelity(data.gamma_n, product);
  ps.alpha0 = alpha(pair.psi_tilde, pair.phi);
  ps.overlap_sq = pair.overlap_sq;
  ps.marginal_defect = pair.marginal_defect;
  ps.symmetry_defect = pair.symmetry_defect;
  ps.kernel_dim = pair.kernel_dim;
  ps.initial_bound_margin = 1.0 - ps.fidelity0 + 1.0 / static_cast<double>(config.particles) - ps.alpha0;

  TrajectoryOptions options;
  options.k_values = config.k_values;
  result.trajectory = evolve_trajectory(model, config.particles, pair.psi_tilde, pair.phi, config.grid, options);
  const Trajectory& traj = result.trajectory;

  result.inputs.lambda_samples = traj.lambda;
  result.inputs.dt = config.grid.dt;
  result.inputs.alpha0 = ps.alpha0;
  result.inputs.particles = config.particles;
  result.inputs.fidelity0 = ps.fidelity0;
  result.inputs.k_values = config.k_values;

  MarginReport& report = result.report;
  report.tolerance = config.tolerance;
  report.add({0, 0.0, 0, Inequality::InitialCounting, ps.alpha0,
              1.0 - ps.fidelity0 + 1.0 / static_cast<double>(config.particles), ps.initial_bound_margin, 1e-9});
  report.merge(assess_theorems(traj, result.inputs, config.tolerance));
  report.merge(assess_derivative(traj, result.inputs));
  report.merge(assess_lemma_samples(traj, result.inputs));
  report.merge(assess_counting(traj));
  report.merge(assess_route_consistency(traj));

  const double energy0 = traj.samples.front().energy;
  for (const auto& s : traj.samples) {
    result.max_norm_defect = std::max(result.max_norm_defect, s.norm_defect);
    result.max_energy_drift = std::max(result.max_energy_drift, std::abs(s.energy - energy0));
  }

  if (mixture) result.mixture = mixture_curves(model, *mixture, traj, options.hartree);
  return result;
}

}  // namespace mfcert
