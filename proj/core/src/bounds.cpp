#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mfcert/bounds.hpp"
#include "mfcert/metrics.hpp"
#include "mfcert/purify.hpp"

namespace mfcert {
namespace {

constexpr double kDerivativeSlackFactor = 10.0;

double max_lambda(const EnvelopeInputs& inputs) {
  double m = 0.0;
  for (double l : inputs.lambda_samples) m = std::max(m, l);
  return m;
}

double initial_defect(const EnvelopeInputs& inputs) {
  return 1.0 - inputs.fidelity0 + 1.0 / static_cast<double>(inputs.particles);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_samples(const Trajectory& trajectory, const EnvelopeInputs& inputs) {
  inputs.validate();
  if (inputs.lambda_samples.size() != trajectory.times.size() ||
      trajectory.alpha.size() != trajectory.times.size())
    throw Error(ErrorCode::ShapeMismatch, "Lambda samples do not match the trajectory grid");
}

}  // namespace

void EnvelopeInputs::validate() const {
  if (lambda_samples.empty()) throw Error(ErrorCode::InvalidConfig, "no Lambda samples");
  for (double l : lambda_samples)
    if (!(l >= 0.0) || !std::isfinite(l)) throw Error(ErrorCode::InvalidConfig, "Lambda sample must be >= 0");
  if (!(alpha0 >= 0.0 && alpha0 <= 1.0)) throw Error(ErrorCode::InvalidConfig, "alpha0 outside [0, 1]");
  if (!(fidelity0 >= 0.0 && fidelity0 <= 1.0)) throw Error(ErrorCode::InvalidConfig, "fidelity0 outside [0, 1]");
  if (particles < 2) throw Error(ErrorCode::InvalidConfig, "N must be at least 2");
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidConfig, "dt must be positive");
  for (std::size_t k : k_values)
    if (k == 0 || k > particles) throw Error(ErrorCode::InvalidConfig, "k outside [1, N]");
}

double lambda_integral(const EnvelopeInputs& inputs, std::size_t t_index) {
  if (t_index >= inputs.lambda_samples.size())
    throw Error(ErrorCode::BadFactorIndex, "time index " + std::to_string(t_index) + " outside the grid");
  double acc = 0.0;
  for (std::size_t i = 1; i <= t_index; ++i)
    acc += 0.5 * inputs.dt * (inputs.lambda_samples[i - 1] + inputs.lambda_samples[i]);
  return acc;
}

double pickl_envelope(const EnvelopeInputs& inputs, std::size_t t_index) {
  return std::exp(8.0 * lambda_integral(inputs, t_index)) *
         (inputs.alpha0 + 1.0 / static_cast<double>(inputs.particles));
}

double fidelity_envelope(const EnvelopeInputs& inputs, std::size_t k, std::size_t t_index) {
  return 2.0 * static_cast<double>(k) * std::exp(8.0 * lambda_integral(inputs, t_index)) * initial_defect(inputs);
}

double trace_envelope(const EnvelopeInputs& inputs, std::size_t k, std::size_t t_index) {
  return 2.0 * std::sqrt(2.0 * static_cast<double>(k)) * std::exp(4.0 * lambda_integral(inputs, t_index)) *
         std::sqrt(initial_defect(inputs));
}

std::string_view to_string(Inequality inequality) {
  switch (inequality) {
    case Inequality::Fidelity: return "fidelity";
    case Inequality::TraceNorm: return "trace_norm";
    case Inequality::Pickl: return "pickl";
    case Inequality::Derivative: return "derivative";
    case Inequality::LemmaCancel: return "lemma_cancel";
    case Inequality::LemmaProjected: return "lemma_projected";
    case Inequality::CountingMarginal: return "counting_marginal";
    case Inequality::RouteConsistency: return "route_consistency";
    case Inequality::InitialCounting: return "initial_counting";
  }
  return "unknown";
}

void MarginReport::add(MarginRecord record) { records.push_back(record); }

void MarginReport::merge(const MarginReport& other) {
  records.insert(records.end(), other.records.begin(), other.records.end());
}

bool MarginReport::passed() const { return violations() == 0; }

std::size_t MarginReport::violations() const {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const MarginRecord& r) { return r.violated(); }));
}

std::optional<MarginRecord> MarginReport::first_violation() const {
  for (const auto& r : records)
    if (r.violated()) return r;
  return std::nullopt;
}

double MarginReport::min_margin(Inequality inequality) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : records)
    if (r.inequality == inequality) m = std::min(m, r.margin);
  return m;
}

std::size_t MarginReport::count(Inequality inequality) const {
  return static_cast<std::size_t>(std::count_if(
      records.begin(), records.end(), [&](const MarginRecord& r) { return r.inequality == inequality; }));
}

std::string MarginReport::to_csv() const {
  std::ostringstream out;
  out << "step,t,k,inequality,lhs,rhs,margin,allowance,violated\n";
  for (const auto& r : records) {
    out << r.step << ',' << format_double(r.t) << ',' << r.k << ',' << to_string(r.inequality) << ','
        << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.margin) << ','
        << format_double(r.allowance) << ',' << (r.violated() ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string MarginReport::summary_json() const {
  nlohmann::ordered_json j;
  j["passed"] = passed();
  j["violations"] = violations();
  j["tolerance"] = tolerance;
  std::map<std::string, nlohmann::ordered_json> per;
  for (const auto& r : records) {
    auto& entry = per[std::string(to_string(r.inequality))];
    if (entry.is_null()) {
      entry["cells"] = 0;
      entry["violations"] = 0;
      entry["min_margin"] = r.margin;
    }
    entry["cells"] = entry["cells"].get<std::size_t>() + 1;
    if (r.violated()) entry["violations"] = entry["violations"].get<std::size_t>() + 1;
    entry["min_margin"] = std::min(entry["min_margin"].get<double>(), r.margin);
  }
  j["inequalities"] = nlohmann::ordered_json::object();
  for (auto& [name, entry] : per) j["inequalities"][name] = entry;
  if (auto v = first_violation()) {
    j["first_violation"] = {{"inequality", std::string(to_string(v->inequality))},
                            {"step", v->step},
                            {"t", v->t},
                            {"k", v->k},
                            {"lhs", v->lhs},
                            {"rhs", v->rhs},
                            {"margin", v->margin}};
  }
  return j.dump(2);
}

CertificationFailure::CertificationFailure(const MarginRecord& record)
    : Error(ErrorCode::CertificationFailure,
            std::string(to_string(record.inequality)) + " violated at t = " + format_double(record.t) +
                (record.k ? ", k = " + std::to_string(record.k) : std::string()) + ": lhs " +
                format_double(record.lhs) + " > rhs " + format_double(record.rhs)),
      record_(record) {}

void enforce(const MarginReport& report) {
  if (auto v = report.first_violation()) throw CertificationFailure(*v);
}

MarginReport assess_theorems(const Trajectory& trajectory, const EnvelopeInputs& inputs, double tolerance) {
  require_samples(trajectory, inputs);
  MarginReport report;
  report.tolerance = tolerance;
  const double rate = 8.0 * max_lambda(inputs) * inputs.dt;

  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    const double rhs = pickl_envelope(inputs, i);
    const double lhs = trajectory.alpha[i];
    report.add({i, trajectory.times[i], 0, Inequality::Pickl, lhs, rhs, rhs - lhs, tolerance + rate * rhs});
  }

  for (const auto& sample : trajectory.samples) {
    for (std::size_t c = 0; c < trajectory.k_values.size(); ++c) {
      const std::size_t k = trajectory.k_values[c];
      if (std::find(inputs.k_values.begin(), inputs.k_values.end(), k) == inputs.k_values.end()) continue;
      const DensityMatrix& marginal = sample.marginals[c];
      const DensityMatrix product(kron_power(sample.gamma.matrix(), k), marginal.shape());

      const double fid_rhs = fidelity_envelope(inputs, k, sample.step);
      const double fid_lhs = 1.0 - fidelity(marginal, product);
      report.add({sample.step, sample.t, k, Inequality::Fidelity, fid_lhs, fid_rhs, fid_rhs - fid_lhs,
                  tolerance + rate * fid_rhs});

      const double tr_rhs = trace_envelope(inputs, k, sample.step);
      const double tr_lhs = trace_distance(marginal, product);
      report.add({sample.step, sample.t, k, Inequality::TraceNorm, tr_lhs, tr_rhs, tr_rhs - tr_lhs,
                  tolerance + rate * tr_rhs});
    }
  }
  return report;
}

MarginReport certify_theorems(const Trajectory& trajectory, const EnvelopeInputs& inputs, double tolerance) {
  MarginReport report = assess_theorems(trajectory, inputs, tolerance);
  enforce(report);
  return report;
}

MarginReport assess_derivative(const Trajectory& trajectory, const EnvelopeInputs& inputs) {
  require_samples(trajectory, inputs);
  MarginReport report;
  const double slack = kDerivativeSlackFactor * inputs.dt;
  report.tolerance = slack;
  const double inv_n = 1.0 / static_cast<double>(inputs.particles);
  const auto& a = trajectory.alpha;
  for (std::size_t i = 1; i + 1 < a.size(); ++i) {
    const double lhs = std::abs(a[i + 1] - a[i - 1]) / (2.0 * inputs.dt);
    const double rhs = 8.0 * inputs.lambda_samples[i] * (a[i] + inv_n);
    report.add({i, trajectory.times[i], 0, Inequality::Derivative, lhs, rhs, rhs - lhs, slack});
  }
  return report;
}

MarginReport check_derivative_inequality(const Trajectory& trajectory, const EnvelopeInputs& inputs) {
  MarginReport report = assess_derivative(trajectory, inputs);
  enforce(report);
  return report;
}

MarginReport assess_lemma_samples(const Trajectory& trajectory, const EnvelopeInputs& inputs, double tolerance) {
  require_samples(trajectory, inputs);
  MarginReport report;
  report.tolerance = tolerance;
  for (std::size_t i = 0; i < trajectory.times.size(); ++i) {
    const double t = trajectory.times[i];
    const double cancel = trajectory.lemma_cancel[i];
    report.add({i, t, 0, Inequality::LemmaCancel, cancel, 0.0, -cancel, tolerance});
    const double projected = trajectory.lemma_projected[i];
    const double lambda = inputs.lambda_samples[i];
    report.add({i, t, 0, Inequality::LemmaProjected, projected, lambda, lambda - projected, tolerance});
  }
  return report;
}

MarginReport assess_counting(const Trajectory& trajectory, double tolerance) {
  MarginReport report;
  report.tolerance = tolerance;
  for (const auto& sample : trajectory.samples) {
    for (std::size_t c = 0; c < trajectory.k_values.size(); ++c) {
      const std::size_t k = trajectory.k_values[c];
      const double lhs = sample.counting_defect[c];
      const double rhs = static_cast<double>(k) * trajectory.alpha[sample.step];
      report.add({sample.step, sample.t, k, Inequality::CountingMarginal, lhs, rhs, rhs - lhs, tolerance});
    }
  }
  return report;
}

MarginReport assess_route_consistency(const Trajectory& trajectory, double tolerance) {
  MarginReport report;
  report.tolerance = tolerance;
  for (const auto& sample : trajectory.samples)
    report.add({sample.step, sample.t, 0, Inequality::RouteConsistency, sample.route_distance, 0.0,
                -sample.route_distance, tolerance});
  return report;
}

LemmaCheck check_lemma_D(const TorusModel& model, const DensityProfile& rho, const PureState& phi) {
  if (phi.shape().size() != 2 || phi.shape()[0] != model.sites())
    throw Error(ErrorCode::ShapeMismatch, "Phi must have shape (L, a)");
  const std::size_t aux = phi.shape()[1];
  const ComplexMatrix d = build_D(model, rho, aux);
  const ComplexMatrix p = phi.amplitudes() * phi.amplitudes().adjoint();
  const auto slot = static_cast<Eigen::Index>(phi.dim());
  const ComplexMatrix identity = ComplexMatrix::Identity(slot, slot);
  const ComplexMatrix p1 = kron(p, identity);
  const ComplexMatrix p2 = kron(identity, p);

  LemmaCheck out;
  out.cancel_defect = op_norm_hermitian(p2 * d * p2);
  const ComplexMatrix dp1 = d * p1;
  // ||D p1||^2 = ||p1 D^2 p1||.
  const ComplexMatrix gram = dp1.adjoint() * dp1;
  out.projected_norm = std::sqrt(std::max(0.0, op_norm_hermitian(0.5 * (gram + gram.adjoint()))));
  out.lambda = lambda_of(model, rho);
  out.projected_norm_margin = out.lambda - out.projected_norm;
  return out;
}

LemmaCheck check_lemma_D(const TorusModel& model, const PureState& phi) {
  return check_lemma_D(model, density_of_lifted(phi), phi);
}

}  // namespace mfcert
