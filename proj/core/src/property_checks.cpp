#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "mfcert/bounds.hpp"
#include "mfcert/metrics.hpp"
#include "mfcert/model.hpp"
#include "mfcert/property_checks.hpp"
#include "mfcert/random.hpp"

namespace mfcert {
namespace {

std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

RealVector random_even_potential(std::size_t sites, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector v(static_cast<Eigen::Index>(sites));
  for (auto& x : v) x = normal(rng);
  RealVector even(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) even(k) = 0.5 * (v(k) + v((v.size() - k) % v.size()));
  return even;
}

PropertyResult lower_bound(std::string name, double threshold) {
  return {std::move(name), 0, std::numeric_limits<double>::infinity(), threshold, false};
}

PropertyResult upper_bound(std::string name, double threshold) {
  return {std::move(name), 0, 0.0, threshold, false};
}

struct LemmaInstance {
  TorusModel model;
  PureState phi;
};

LemmaInstance random_lemma_instance(Rng& rng) {
  const std::size_t sites = uniform_int(rng, 2, 5);
  const std::size_t aux = uniform_int(rng, 1, 3);
  TorusModel model(ComplexMatrix::Zero(static_cast<Eigen::Index>(sites), static_cast<Eigen::Index>(sites)),
                   random_even_potential(sites, rng));
  PureState phi(random_unit_vector(sites * aux, rng), TensorShape{sites, aux});
  return {std::move(model), std::move(phi)};
}

}  // namespace

PropertyResult check_fvdg(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed);
  PropertyResult r = lower_bound("fvdg_margin", -1e-9);
  for (std::size_t i = 0; i < cases; ++i) {
    const std::size_t d = uniform_int(rng, 2, 9);
    const DensityMatrix rho = random_density(d, uniform_int(rng, 1, d), rng);
    const DensityMatrix sigma = random_density(d, uniform_int(rng, 1, d), rng);
    r.worst = std::min(r.worst, fvdg_margin(rho, sigma));
    ++r.cases;
  }
  r.passed = r.worst >= r.threshold;
  return r;
}

PropertyResult check_dpi(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed);
  PropertyResult r = lower_bound("dpi_margin", -1e-9);
  const TensorShape shape{3, 3};
  for (std::size_t i = 0; i < cases; ++i) {
    const DensityMatrix rho = random_density(shape, uniform_int(rng, 1, 9), rng);
    const DensityMatrix sigma = random_density(shape, uniform_int(rng, 1, 9), rng);
    r.worst = std::min(r.worst, dpi_margin(rho, sigma, i % 2));
    ++r.cases;
  }
  r.passed = r.worst >= r.threshold;
  return r;
}

PropertyResult check_covariance(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed);
  PropertyResult r = upper_bound("covariance_defect", 1e-10);
  const TensorShape shape{3, 3};
  for (std::size_t i = 0; i < cases; ++i) {
    const ComplexMatrix u = haar_unitary(3, rng);
    const DensityMatrix t = random_density(shape, uniform_int(rng, 1, 9), rng);
    r.worst = std::max(r.worst, covariance_check(u, t));
    ++r.cases;
  }
  r.passed = r.worst <= r.threshold;
  return r;
}

PropertyResult check_holder(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed);
  PropertyResult r = lower_bound("holder_margin", -1e-10);
  for (std::size_t i = 0; i < cases; ++i) {
    const std::size_t sites = uniform_int(rng, 2, 12);
    const RealVector v = random_even_potential(sites, rng);
    const RealVector rho = dirichlet_spectrum(sites, rng);
    const TorusModel model(ComplexMatrix::Zero(static_cast<Eigen::Index>(sites), static_cast<Eigen::Index>(sites)), v);
    const double lambda = lambda_of(model, DensityProfile(rho));
    for (double exponent : {1.0, 2.0, 8.0}) {
      r.worst = std::min(r.worst, holder_lambda_bound(v, rho, exponent) - lambda);
      ++r.cases;
    }
  }
  r.passed = r.worst >= r.threshold;
  return r;
}

PropertyResult check_lemma_cancel(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed);
  PropertyResult r = upper_bound("lemma_cancel", 1e-10);
  for (std::size_t i = 0; i < cases; ++i) {
    const LemmaInstance inst = random_lemma_instance(rng);
    r.worst = std::max(r.worst, check_lemma_D(inst.model, inst.phi).cancel_defect);
    ++r.cases;
  }
  r.passed = r.worst <= r.threshold;
  return r;
}

PropertyResult check_lemma_projected(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed);
  PropertyResult r = lower_bound("lemma_projected_margin", -1e-10);
  for (std::size_t i = 0; i < cases; ++i) {
    const LemmaInstance inst = random_lemma_instance(rng);
    r.worst = std::min(r.worst, check_lemma_D(inst.model, inst.phi).projected_norm_margin);
    ++r.cases;
  }
  r.passed = r.worst >= r.threshold;
  return r;
}

PropertyResult check_eigen_residuals(std::uint64_t seed, std::size_t cases) {
  Rng rng(seed);
  PropertyResult r = upper_bound("eigen_residual", 1e-10);
  for (std::size_t i = 0; i < cases; ++i) {
    const std::size_t d = uniform_int(rng, 1, 64);
    const ComplexMatrix a = random_hermitian(d, rng);
    const HermitianEigen eig = herm_eig(a);
    const ComplexMatrix recon = eig.vectors * eig.values.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    const double scale = std::max(1.0, op_norm_hermitian(a));
    const double residual = op_norm(recon - a) / scale;
    const auto n = static_cast<Eigen::Index>(d);
    const double unitarity = op_norm(eig.vectors.adjoint() * eig.vectors - ComplexMatrix::Identity(n, n));
    r.worst = std::max({r.worst, residual, unitarity});
    ++r.cases;
  }
  r.passed = r.worst <= r.threshold;
  return r;
}

std::vector<PropertyResult> run_property_suites(std::uint64_t seed) {
  return {check_fvdg(seed), check_dpi(seed + 1), check_covariance(seed + 2), check_holder(seed + 3),
          check_lemma_cancel(seed + 4), check_lemma_projected(seed + 4), check_eigen_residuals(seed + 5)};
}

}  // namespace mfcert
