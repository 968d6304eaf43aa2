#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "mfcert/dynamics.hpp"
#include "mfcert/linalg.hpp"
#include "mfcert/model.hpp"

namespace mfcert {

/// Initial N-body state and the one-body reference state it is compared to.
struct InitialData {
  DensityMatrix gamma_n;
  DensityMatrix gamma_one;
};

/// gamma0 of the given rank (Haar eigenbasis, Dirichlet spectrum) and
/// Gamma0 = gamma0^{(x) N}.
InitialData scenario_product(std::uint64_t seed, std::size_t sites, std::size_t particles, std::size_t rank);

/// (1 - eps) gamma0^{(x) N} + eps Sigma with Sigma a symmetrized random
/// full-rank N-body density matrix.
InitialData scenario_near_product(std::uint64_t seed, std::size_t sites, std::size_t particles, double epsilon,
                                  std::size_t rank);

struct MixtureScenario {
  InitialData data;
  ComplexVector phi0;  // orthonormal pair
  ComplexVector psi0;
};

/// Gamma0 = (|phi^N><phi^N| + |psi^N><psi^N|) / 2, gamma0 its one-body marginal.
MixtureScenario scenario_mixture_counterexample(std::uint64_t seed, std::size_t sites, std::size_t particles);

/// Curves for the mixture demo at the sample steps of a trajectory:
/// to_mixed[i]   = ||Gamma_t^{N:1} - gamma_t||_1 with gamma_t mixed Hartree,
/// to_mixture[i] = ||Gamma_t^{N:1} - (phi_t phi_t^* + psi_t psi_t^*) / 2||_1,
/// gap[i]        = ||gamma_t - (phi_t phi_t^* + psi_t psi_t^*) / 2||_1,
/// where phi_t, psi_t follow the pure Hartree flow separately.
struct MixtureCurves {
  std::vector<double> times;
  std::vector<double> to_mixed;
  std::vector<double> to_mixture;
  std::vector<double> gap;
  double initial_fidelity_defect = 0.0;
  double max_gap = 0.0;
  double t_max_gap = 0.0;
};

/// The trajectory must carry k = 1.
MixtureCurves mixture_curves(const TorusModel& model, const MixtureScenario& scenario, const Trajectory& trajectory,
                             const HartreeOptions& options = {});

}  // namespace mfcert
