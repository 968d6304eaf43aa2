#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mfcert/dynamics.hpp"
#include "mfcert/error.hpp"
#include "mfcert/linalg.hpp"
#include "mfcert/model.hpp"

namespace mfcert {

/// Inputs to the Gronwall envelopes. lambda_samples holds Lambda at every grid
/// step (t_i = i * dt).
struct EnvelopeInputs {
  std::vector<double> lambda_samples;
  double dt = 1e-3;
  double alpha0 = 0.0;
  std::size_t particles = 2;
  double fidelity0 = 1.0;
  std::vector<std::size_t> k_values{1, 2};

  /// Throws InvalidConfig on negative Lambda, alpha0 or fidelity0 outside
  /// [0, 1], N < 2 or k outside [1, N].
  void validate() const;
};

/// Trapezoid integral of Lambda over [0, t_index * dt].
double lambda_integral(const EnvelopeInputs& inputs, std::size_t t_index);

/// exp(8 I) (alpha0 + 1/N).
double pickl_envelope(const EnvelopeInputs& inputs, std::size_t t_index);

/// 2k exp(8 I) (1 - F0 + 1/N).
double fidelity_envelope(const EnvelopeInputs& inputs, std::size_t k, std::size_t t_index);

/// 2 sqrt(2k) exp(4 I) (1 - F0 + 1/N)^{1/2}.
double trace_envelope(const EnvelopeInputs& inputs, std::size_t k, std::size_t t_index);

enum class Inequality {
  Fidelity,
  TraceNorm,
  Pickl,
  Derivative,
  LemmaCancel,
  LemmaProjected,
  CountingMarginal,
  RouteConsistency,
  InitialCounting,
};

std::string_view to_string(Inequality inequality);

/// One certified cell: margin = rhs - lhs, violated when margin < -allowance.
struct MarginRecord {
  std::size_t step = 0;
  double t = 0.0;
  std::size_t k = 0;  // 0 when the inequality has no k
  Inequality inequality = Inequality::Pickl;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double allowance = 0.0;

  bool violated() const { return margin < -allowance; }
};

struct MarginReport {
  std::vector<MarginRecord> records;
  double tolerance = 1e-8;

  void add(MarginRecord record);
  void merge(const MarginReport& other);
  bool passed() const;
  std::size_t violations() const;
  std::optional<MarginRecord> first_violation() const;
  /// Smallest margin over records of one inequality; +inf if there are none.
  double min_margin(Inequality inequality) const;
  std::size_t count(Inequality inequality) const;

  /// step,t,k,inequality,lhs,rhs,margin,allowance,violated
  std::string to_csv() const;
  /// Per-inequality counts, minima and violations plus the overall verdict.
  std::string summary_json() const;
};

class CertificationFailure : public Error {
 public:
  explicit CertificationFailure(const MarginRecord& record);
  const MarginRecord& record() const noexcept { return record_; }

 private:
  MarginRecord record_;
};

/// Throws CertificationFailure carrying the first violated record.
void enforce(const MarginReport& report);

/// Fidelity form, trace form and Pickl estimate at every sample. Allowance
/// per cell is tolerance + 8 max(Lambda) dt rhs.
MarginReport assess_theorems(const Trajectory& trajectory, const EnvelopeInputs& inputs,
                             double tolerance = 1e-8);
MarginReport certify_theorems(const Trajectory& trajectory, const EnvelopeInputs& inputs,
                              double tolerance = 1e-8);

/// |d alpha / dt| <= 8 Lambda (alpha + 1/N) with central differences at
/// interior steps and allowance 10 dt.
MarginReport assess_derivative(const Trajectory& trajectory, const EnvelopeInputs& inputs);
MarginReport check_derivative_inequality(const Trajectory& trajectory, const EnvelopeInputs& inputs);

/// The recorded compressions ||p2 D p2|| <= tolerance and ||D p1|| <= Lambda
/// + tolerance against inputs.lambda_samples at every step.
MarginReport assess_lemma_samples(const Trajectory& trajectory, const EnvelopeInputs& inputs,
                                  double tolerance = 1e-10);

/// 1 - tr(Gamma~^{N:k} P^{(x) k}) <= k alpha + tolerance at every sample.
MarginReport assess_counting(const Trajectory& trajectory, double tolerance = 1e-10);

/// ||tr_aux |Phi_t><Phi_t| - gamma_t||_1 <= tolerance where gamma_t follows
/// hartree_step.
MarginReport assess_route_consistency(const Trajectory& trajectory, double tolerance = 1e-9);

struct LemmaCheck {
  double cancel_defect = 0.0;          // ||p2 D p2||_op
  double projected_norm = 0.0;         // ||D p1||_op
  double lambda = 0.0;
  double projected_norm_margin = 0.0;  // lambda - projected_norm
};

/// Dense two-body check: builds D and both projectors explicitly.
LemmaCheck check_lemma_D(const TorusModel& model, const DensityProfile& rho, const PureState& phi);
LemmaCheck check_lemma_D(const TorusModel& model, const PureState& phi);

}  // namespace mfcert
