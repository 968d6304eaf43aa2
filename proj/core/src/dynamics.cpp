#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "mfcert/dynamics.hpp"
#include "mfcert/error.hpp"
#include "mfcert/metrics.hpp"
#include "mfcert/purify.hpp"

namespace mfcert {
namespace {

using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// The state as a matrix whose rows run over the physical N-body index.
struct PhysicalView {
  ComplexMatrix block;
  bool lifted = false;
  std::vector<std::size_t> factors;
};

PhysicalView physical_view(const PropagatorCache& cache, const PureState& psi) {
  PhysicalView view;
  if (psi.dim() == cache.hamiltonian_dim()) {
    view.block = psi.amplitudes();
    return view;
  }
  const std::size_t particles = lifted_particles(psi.shape());
  view.factors = physical_factors(particles);
  std::size_t physical_dim = 1;
  for (std::size_t f : view.factors) physical_dim *= psi.shape()[f];
  if (physical_dim != cache.hamiltonian_dim())
    throw Error(ErrorCode::ShapeMismatch, "state does not match the Hamiltonian dimension");
  view.block = tensor_to_matrix(psi.amplitudes(), psi.shape(), view.factors);
  view.lifted = true;
  return view;
}

ComplexMatrix mean_field_propagator(const TorusModel& model, const RealVector& rho, double dt) {
  const ComplexMatrix g = build_mean_field_generator(model, DensityProfile(rho));
  return unitary_exp(herm_eig(g), dt);
}

// Self-consistent midpoint: rho_mid <- (rho(s) + rho(s')) / 2 with
// s' = exp(-i dt G(rho_mid)) s.
template <class State, class Evolve, class Density>
State midpoint_step(const TorusModel& model, const State& state, double dt, const HartreeOptions& options,
                    Evolve evolve, Density density) {
  const RealVector rho0 = density(state);
  RealVector mid = rho0;
  double change = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    State next = evolve(mean_field_propagator(model, mid, dt), state);
    const RealVector updated = 0.5 * (rho0 + density(next));
    change = (updated - mid).lpNorm<1>();
    mid = updated;
    if (change <= options.converged || it + 1 == options.max_iterations) {
      if (change > options.stall)
        throw Error(ErrorCode::FixedPointStall,
                    "midpoint density residual " + std::to_string(change) + " after " +
                        std::to_string(options.max_iterations) + " iterations");
      return next;
    }
  }
  throw Error(ErrorCode::FixedPointStall, "no midpoint iterations allowed");
}

RealVector lifted_density(const PureState& phi) { return density_of_lifted(phi).values(); }

}  // namespace

PropagatorCache::PropagatorCache(ComplexMatrix hamiltonian)
    : hamiltonian_(std::move(hamiltonian)), eig_(herm_eig(hamiltonian_)) {}

double PropagatorCache::reconstruction_residual() const {
  return (eig_.vectors * eig_.values.cast<Complex>().asDiagonal() * eig_.vectors.adjoint() - hamiltonian_).norm();
}

ComplexMatrix PropagatorCache::apply(const ComplexMatrix& block, double t) const {
  if (static_cast<std::size_t>(block.rows()) != hamiltonian_dim())
    throw Error(ErrorCode::ShapeMismatch, "block does not match the Hamiltonian dimension");
  ComplexVector phases(eig_.values.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(1.0, -t * eig_.values(i));
  const ComplexMatrix coefficients = eig_.vectors.adjoint() * block;
  return eig_.vectors * (phases.asDiagonal() * coefficients);
}

PureState propagate_nbody(const PropagatorCache& cache, const PureState& psi0, double t) {
  const PhysicalView view = physical_view(cache, psi0);
  const ComplexMatrix moved = cache.apply(view.block, t);
  if (!view.lifted) return PureState(moved.col(0), psi0.shape());
  return PureState(matrix_to_tensor(moved, psi0.shape(), view.factors), psi0.shape());
}

double energy(const PropagatorCache& cache, const PureState& psi) {
  const PhysicalView view = physical_view(cache, psi);
  return (view.block.adjoint() * (cache.hamiltonian() * view.block)).trace().real();
}

std::size_t TimeGrid::steps() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::InvalidConfig, "dt must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final))
    throw Error(ErrorCode::InvalidConfig, "t_final must be nonnegative");
  if (sample_stride == 0) throw Error(ErrorCode::InvalidConfig, "sample_stride must be at least 1");
  const double ratio = t_final / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9)
    throw Error(ErrorCode::InvalidConfig, "t_final / dt = " + std::to_string(ratio) + " is not an integer");
  return static_cast<std::size_t>(rounded);
}

DensityMatrix hartree_step(const TorusModel& model, const DensityMatrix& gamma, double dt,
                           const HartreeOptions& options) {
  if (gamma.dim() != model.sites()) throw Error(ErrorCode::ShapeMismatch, "gamma is not L x L");
  auto evolve = [](const ComplexMatrix& u, const DensityMatrix& g) {
    return DensityMatrix(u * g.matrix() * u.adjoint(), g.shape());
  };
  auto density = [](const DensityMatrix& g) -> RealVector { return g.matrix().diagonal().real(); };
  return midpoint_step(model, gamma, dt, options, evolve, density);
}

PureState lifted_hartree_step(const TorusModel& model, const PureState& phi, double dt,
                              const HartreeOptions& options) {
  if (phi.shape().size() != 2 || phi.shape()[0] != model.sites())
    throw Error(ErrorCode::ShapeMismatch, "lifted one-body state must have shape (L, a)");
  const auto sites = static_cast<Eigen::Index>(phi.shape()[0]);
  const auto aux = static_cast<Eigen::Index>(phi.shape()[1]);
  auto evolve = [sites, aux](const ComplexMatrix& u, const PureState& state) {
    const Eigen::Map<const RowMajorMatrix> m(state.amplitudes().data(), sites, aux);
    RowMajorMatrix moved = u * m;
    return PureState(Eigen::Map<const ComplexVector>(moved.data(), moved.size()), state.shape());
  };
  return midpoint_step(model, phi, dt, options, evolve, lifted_density);
}

OrderFit hartree_local_order(const TorusModel& model, const DensityMatrix& gamma, const std::vector<double>& dts,
                             const HartreeOptions& options) {
  if (dts.size() < 2) throw Error(ErrorCode::InvalidConfig, "an order fit needs at least two step sizes");
  OrderFit fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double dt : dts) {
    const DensityMatrix once = hartree_step(model, gamma, dt, options);
    const DensityMatrix twice = hartree_step(model, hartree_step(model, gamma, 0.5 * dt, options), 0.5 * dt, options);
    const double err = trace_norm_hermitian(once.matrix() - twice.matrix());
    fit.dts.push_back(dt);
    fit.errors.push_back(err);
    const double x = std::log(dt), y = std::log(err);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  const double n = static_cast<double>(dts.size());
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

LemmaCompression lemma_compression(const TorusModel& model, const PureState& phi) {
  const DensityProfile rho = density_of_lifted(phi);
  const RealVector d = fluctuation_kernel(model, rho);
  const std::size_t sites = model.sites();
  LemmaCompression out;
  for (std::size_t a = 0; a < sites; ++a) {
    double cancel = 0.0;     // sum_x2 rho(x2) d(a, x2)
    double projected = 0.0;  // sum_x1 rho(x1) d(x1, a)^2
    for (std::size_t b = 0; b < sites; ++b) {
      cancel += rho[b] * d(static_cast<Eigen::Index>(a * sites + b));
      const double e = d(static_cast<Eigen::Index>(b * sites + a));
      projected += rho[b] * e * e;
    }
    out.cancel = std::max(out.cancel, std::abs(cancel));
    out.projected = std::max(out.projected, projected);
  }
  out.projected = std::sqrt(out.projected);
  return out;
}

Trajectory evolve_trajectory(const TorusModel& model, std::size_t particles, const PureState& psi0_lifted,
                             const PureState& phi0, const TimeGrid& grid, const TrajectoryOptions& options) {
  if (particles < 2) throw Error(ErrorCode::InvalidConfig, "N must be at least 2");
  if (lifted_particles(psi0_lifted.shape()) != particles)
    throw Error(ErrorCode::ShapeMismatch, "lifted state does not carry N slots");
  if (phi0.shape().size() != 2 || phi0.shape()[0] != model.sites() || psi0_lifted.shape()[0] != model.sites() ||
      psi0_lifted.shape()[1] != phi0.shape()[1])
    throw Error(ErrorCode::ShapeMismatch, "Phi and Psi~ shapes are inconsistent");
  for (std::size_t k : options.k_values)
    if (k == 0 || k > particles) throw Error(ErrorCode::InvalidConfig, "k = " + std::to_string(k) + " not in [1, N]");

  const std::size_t steps = grid.steps();
  const PropagatorCache cache(build_HN(model, particles));
  const auto phys = physical_factors(particles);
  const ComplexMatrix coefficients =
      cache.eigenvectors().adjoint() * tensor_to_matrix(psi0_lifted.amplitudes(), psi0_lifted.shape(), phys);

  Trajectory out;
  out.grid = grid;
  out.particles = particles;
  out.k_values = options.k_values;
  out.times.reserve(steps + 1);

  const std::array<std::size_t, 1> keep_physical{0};
  PureState phi = phi0;
  std::optional<DensityMatrix> gamma_route;
  if (options.second_route) gamma_route.emplace(partial_trace(phi0, keep_physical));

  ComplexVector phases(cache.eigenvalues().size());
  for (std::size_t step = 0; step <= steps; ++step) {
    const double t = grid.time(step);
    for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(1.0, -t * cache.eigenvalues()(i));
    const ComplexMatrix block = cache.eigenvectors() * (phases.asDiagonal() * coefficients);
    const ComplexVector amplitudes = matrix_to_tensor(block, psi0_lifted.shape(), phys);
    const double norm_defect = std::abs(amplitudes.norm() - 1.0);
    const PureState psi(amplitudes, psi0_lifted.shape());

    out.times.push_back(t);
    out.lambda.push_back(lambda_of(model, density_of_lifted(phi)));
    out.alpha.push_back(alpha(psi, phi));
    const LemmaCompression lemma = lemma_compression(model, phi);
    out.lemma_cancel.push_back(lemma.cancel);
    out.lemma_projected.push_back(lemma.projected);

    if (step % grid.sample_stride == 0 || step == steps) {
      TrajectorySample sample{.step = step, .t = t, .gamma = partial_trace(phi, keep_physical)};
      for (std::size_t k : options.k_values) {
        sample.marginals.push_back(partial_trace(psi, physical_factors(k)));
        sample.counting_defect.push_back(1.0 - counting_overlap(psi, phi, k));
      }
      sample.norm_defect = norm_defect;
      sample.energy = (block.adjoint() * (cache.hamiltonian() * block)).trace().real();
      if (gamma_route) sample.route_distance = trace_distance(sample.gamma, *gamma_route);
      if (options.keep_states) {
        sample.psi_tilde = psi;
        sample.phi = phi;
      }
      out.samples.push_back(std::move(sample));
    }

    if (step < steps) {
      phi = lifted_hartree_step(model, phi, grid.dt, options.hartree);
      if (gamma_route) gamma_route.emplace(hartree_step(model, *gamma_route, grid.dt, options.hartree));
    }
  }
  return out;
}

}  // namespace mfcert
