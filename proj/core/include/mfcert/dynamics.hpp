#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "mfcert/linalg.hpp"
#include "mfcert/model.hpp"

namespace mfcert {

/// Eigendecomposition of a Hamiltonian, reused for every propagation time.
class PropagatorCache {
 public:
  explicit PropagatorCache(ComplexMatrix hamiltonian);

  const RealVector& eigenvalues() const noexcept { return eig_.values; }
  const ComplexMatrix& eigenvectors() const noexcept { return eig_.vectors; }
  const ComplexMatrix& hamiltonian() const noexcept { return hamiltonian_; }
  std::size_t hamiltonian_dim() const noexcept { return static_cast<std::size_t>(hamiltonian_.rows()); }

  /// ||U diag(lambda) U^dagger - H||_F.
  double reconstruction_residual() const;

  /// exp(-i t H) applied to the columns of `block`.
  ComplexMatrix apply(const ComplexMatrix& block, double t) const;

 private:
  ComplexMatrix hamiltonian_;
  HermitianEigen eig_;
};

/// Psi_t = exp(-i t H) Psi_0. A state whose dimension equals H's is
/// propagated directly; a lifted state with shape (L, a, ..., L, a) is
/// propagated on its physical factors only.
PureState propagate_nbody(const PropagatorCache& cache, const PureState& psi0, double t);

/// <Psi, H Psi> with the same direct/lifted dispatch.
double energy(const PropagatorCache& cache, const PureState& psi);

struct TimeGrid {
  double t_final = 1.0;
  double dt = 1e-3;
  std::size_t sample_stride = 1;

  /// Throws InvalidConfig unless t_final / dt is an integer within 1e-9.
  std::size_t steps() const;
  double time(std::size_t step) const { return static_cast<double>(step) * dt; }
};

struct HartreeOptions {
  int max_iterations = 8;
  double converged = 1e-12;
  double stall = 1e-8;
};

/// One self-consistent unitary midpoint step of the mixed Hartree equation.
DensityMatrix hartree_step(const TorusModel& model, const DensityMatrix& gamma, double dt,
                           const HartreeOptions& options = {});

/// Same scheme for a lifted one-body state of shape (L, a).
PureState lifted_hartree_step(const TorusModel& model, const PureState& phi, double dt,
                              const HartreeOptions& options = {});

/// Observed local order of hartree_step: for each dt, the error estimate is
/// ||step(dt) - step(dt/2) o step(dt/2)||_1 and the order is the least-squares
/// slope of log(error) against log(dt). A second-order scheme gives ~3.
struct OrderFit {
  std::vector<double> dts;
  std::vector<double> errors;
  double slope = 0.0;
};
OrderFit hartree_local_order(const TorusModel& model, const DensityMatrix& gamma, const std::vector<double>& dts,
                             const HartreeOptions& options = {});

struct TrajectoryOptions {
  std::vector<std::size_t> k_values{1, 2};
  bool keep_states = false;
  /// Also integrate hartree_step from tr_aux |Phi_0><Phi_0| and record the
  /// distance to tr_aux |Phi_t><Phi_t|.
  bool second_route = true;
  HartreeOptions hartree;
};

struct TrajectorySample {
  std::size_t step = 0;
  double t = 0.0;
  DensityMatrix gamma;                       // tr_aux |Phi_t><Phi_t|
  std::vector<DensityMatrix> marginals{};    // Gamma_t^{N:k}, one per k value
  std::vector<double> counting_defect{};     // 1 - tr(Gamma~^{N:k} P^{(x) k})
  double norm_defect = 0.0;
  double energy = 0.0;
  double route_distance = 0.0;
  std::optional<PureState> psi_tilde{};
  std::optional<PureState> phi{};
};

/// Scalars are recorded at every step; TrajectorySample only every
/// `sample_stride` steps (and at the final step).
struct Trajectory {
  TimeGrid grid;
  std::size_t particles = 0;
  std::vector<std::size_t> k_values;
  std::vector<double> times;
  std::vector<double> lambda;
  std::vector<double> alpha;
  /// ||p_2 D p_2||_op and ||D p_1||_op from the one-slot compressions.
  std::vector<double> lemma_cancel;
  std::vector<double> lemma_projected;
  std::vector<TrajectorySample> samples;
};

/// Lifted Schrodinger flow of Psi~ (exact) together with the lifted Hartree
/// flow of Phi (midpoint steps).
Trajectory evolve_trajectory(const TorusModel& model, std::size_t particles, const PureState& psi0_lifted,
                             const PureState& phi0, const TimeGrid& grid,
                             const TrajectoryOptions& options = {});

/// ||(1 (x) <Phi|) D (1 (x) |Phi>)||_op and ||(<Phi| (x) 1) D^2 (|Phi> (x) 1)||_op^{1/2}
/// computed from the diagonal of D without forming the two-body matrix.
struct LemmaCompression {
  double cancel = 0.0;
  double projected = 0.0;
};
LemmaCompression lemma_compression(const TorusModel& model, const PureState& phi);

}  // namespace mfcert
