#pragma once

// Randomized certification suites. Each returns the worst observed value of
// a quantity that must stay on one side of a threshold.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mfcert {

struct PropertyResult {
  std::string name;
  std::size_t cases = 0;
  /// Worst observed value; for lower-bound properties this is the minimum,
  /// for upper-bound properties the maximum.
  double worst = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// sqrt(1 - F) - ||rho - sigma||_1 / 2 >= -1e-9, dims 2..9, mixed ranks.
PropertyResult check_fvdg(std::uint64_t seed, std::size_t cases = 200);
/// F(tr_B rho, tr_B sigma) - F(rho, sigma) >= -1e-9 on (3, 3).
PropertyResult check_dpi(std::uint64_t seed, std::size_t cases = 200);
/// Partial-trace covariance defect <= 1e-10 on (3, 3).
PropertyResult check_covariance(std::uint64_t seed, std::size_t cases = 50);
/// 2 ||V||_{2r} ||rho||_s^{1/2} - Lambda >= -1e-10 for r in {1, 2, 8}.
PropertyResult check_holder(std::uint64_t seed, std::size_t cases = 100);
/// ||p2 D p2|| <= 1e-10 on random (V, Phi) with the dense two-body route.
PropertyResult check_lemma_cancel(std::uint64_t seed, std::size_t cases = 100);
/// Lambda - ||D p1|| >= -1e-10 on the same instances.
PropertyResult check_lemma_projected(std::uint64_t seed, std::size_t cases = 100);
/// Eigen reconstruction and unitarity residuals <= 1e-10 up to dim 64.
PropertyResult check_eigen_residuals(std::uint64_t seed, std::size_t cases = 100);

std::vector<PropertyResult> run_property_suites(std::uint64_t seed);

}  // namespace mfcert
