#pragma once

#include <cstddef>

#include "mfcert/linalg.hpp"

namespace mfcert {

/// Squared Uhlmann fidelity ||sqrt(rho) sqrt(sigma)||_1^2, clamped into [0, 1]
/// once it is within 1e-10 of the interval.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// ||rho - sigma||_1 from the eigenvalues of the difference.
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// sqrt(1 - F) - ||rho - sigma||_1 / 2.
double fvdg_margin(const DensityMatrix& rho, const DensityMatrix& sigma);

/// F(tr_B rho, tr_B sigma) - F(rho, sigma) on a two-factor shape, tracing the
/// factor `traced_factor` (0 or 1).
double dpi_margin(const DensityMatrix& rho, const DensityMatrix& sigma, std::size_t traced_factor);

/// (sum_k |V[k]|^p)^(1/p); p = infinity gives max |V[k]|.
double lp_norm(const RealVector& v, double p);

/// 2 ||V||_{2r} ||rho||_s^{1/2} with s = r / (r - 1) (s = infinity for r = 1).
double holder_lambda_bound(const RealVector& potential, const RealVector& rho, double r);

}  // namespace mfcert
