#include <algorithm>
#include <array>
#include <iterator>
#include <string>

#include "mfcert/error.hpp"
#include "mfcert/metrics.hpp"
#include "mfcert/random.hpp"
#include "mfcert/scenarios.hpp"

namespace mfcert {
namespace {

void require_sizes(std::size_t sites, std::size_t particles) {
  if (sites < 2) throw Error(ErrorCode::InvalidConfig, "L must be at least 2");
  if (particles < 2) throw Error(ErrorCode::InvalidConfig, "N must be at least 2");
}

DensityMatrix product_of(const DensityMatrix& gamma, std::size_t particles) {
  return DensityMatrix(kron_power(gamma.matrix(), particles), TensorShape::uniform(gamma.dim(), particles));
}

}  // namespace

InitialData scenario_product(std::uint64_t seed, std::size_t sites, std::size_t particles, std::size_t rank) {
  require_sizes(sites, particles);
  Rng rng(seed);
  DensityMatrix gamma = random_density(sites, rank, rng);
  return {product_of(gamma, particles), gamma};
}

InitialData scenario_near_product(std::uint64_t seed, std::size_t sites, std::size_t particles, double epsilon,
                                  std::size_t rank) {
  require_sizes(sites, particles);
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw Error(ErrorCode::InvalidConfig, "epsilon must lie in [0, 1]");
  Rng rng(seed);
  DensityMatrix gamma = random_density(sites, rank, rng);
  const TensorShape shape = TensorShape::uniform(sites, particles);
  const DensityMatrix noise = random_density(shape, shape.dim(), rng);
  const ComplexMatrix sigma = symmetrize(noise.matrix(), sites, particles);
  ComplexMatrix mixed = (1.0 - epsilon) * kron_power(gamma.matrix(), particles) + epsilon * sigma;
  mixed = 0.5 * (mixed + mixed.adjoint());
  return {DensityMatrix(mixed, shape), gamma};
}

MixtureScenario scenario_mixture_counterexample(std::uint64_t seed, std::size_t sites, std::size_t particles) {
  require_sizes(sites, particles);
  Rng rng(seed);
  const ComplexMatrix u = haar_unitary(sites, rng);
  const ComplexVector phi = u.col(0);
  const ComplexVector psi = u.col(1);
  const ComplexVector phi_n = kron_power(phi, particles);
  const ComplexVector psi_n = kron_power(psi, particles);
  const ComplexMatrix gamma_n = 0.5 * (phi_n * phi_n.adjoint() + psi_n * psi_n.adjoint());
  const ComplexMatrix gamma_one = 0.5 * (phi * phi.adjoint() + psi * psi.adjoint());
  return {{DensityMatrix(gamma_n, TensorShape::uniform(sites, particles)), DensityMatrix(gamma_one, TensorShape{sites})},
          phi,
          psi};
}

MixtureCurves mixture_curves(const TorusModel& model, const MixtureScenario& scenario, const Trajectory& trajectory,
                             const HartreeOptions& options) {
  const auto it = std::find(trajectory.k_values.begin(), trajectory.k_values.end(), std::size_t{1});
  if (it == trajectory.k_values.end()) throw Error(ErrorCode::InvalidConfig, "mixture curves need k = 1");
  const auto k1 = static_cast<std::size_t>(std::distance(trajectory.k_values.begin(), it));

  const TensorShape one{model.sites()};
  DensityMatrix phi = DensityMatrix(scenario.phi0 * scenario.phi0.adjoint(), one);
  DensityMatrix psi = DensityMatrix(scenario.psi0 * scenario.psi0.adjoint(), one);

  MixtureCurves out;
  const std::array<std::size_t, 1> first{0};
  out.initial_fidelity_defect =
      1.0 - fidelity(partial_trace(scenario.data.gamma_n, first), scenario.data.gamma_one);

  std::size_t step = 0;
  for (const auto& sample : trajectory.samples) {
    while (step < sample.step) {
      phi = hartree_step(model, phi, trajectory.grid.dt, options);
      psi = hartree_step(model, psi, trajectory.grid.dt, options);
      ++step;
    }
    const DensityMatrix mixture(0.5 * (phi.matrix() + psi.matrix()), one);
    const DensityMatrix& marginal = sample.marginals[k1];
    out.times.push_back(sample.t);
    out.to_mixed.push_back(trace_distance(marginal, sample.gamma));
    out.to_mixture.push_back(trace_distance(marginal, mixture));
    out.gap.push_back(trace_distance(sample.gamma, mixture));
    if (out.gap.back() > out.max_gap) {
      out.max_gap = out.gap.back();
      out.t_max_gap = sample.t;
    }
  }
  return out;
}

}  // namespace mfcert
