#include <gtest/gtest.h>

#include <cmath>

#include "mfcert/bounds.hpp"
#include "mfcert/error.hpp"
#include "mfcert/metrics.hpp"
#include "mfcert/purify.hpp"
#include "mfcert/random.hpp"
#include "mfcert/scenarios.hpp"

using namespace mfcert;

namespace {

EnvelopeInputs constant_lambda(double lambda, std::size_t samples, double dt, double alpha0, std::size_t n,
                               double f0, std::vector<std::size_t> ks = {1}) {
  EnvelopeInputs in;
  in.lambda_samples.assign(samples, lambda);
  in.dt = dt;
  in.alpha0 = alpha0;
  in.particles = n;
  in.fidelity0 = f0;
  in.k_values = std::move(ks);
  return in;
}

struct CertRun {
  EnvelopeInputs inputs;
  Trajectory trajectory;
};

CertRun bounded_run(PotentialKind kind, std::uint64_t seed, double t_final) {
  const TorusModel model = make_model(3, OneBodyPreset::Laplacian, PotentialSpec{kind});
  const InitialData data = scenario_near_product(seed, 3, 2, 0.1, 3);
  const PurifiedPair pair = purify_n_body(data.gamma_n, data.gamma_one);
  TrajectoryOptions opts;
  opts.k_values = {1, 2};
  CertRun r;
  r.trajectory = evolve_trajectory(model, 2, pair.psi_tilde, pair.phi, TimeGrid{t_final, 1e-2, 5}, opts);
  r.inputs.lambda_samples = r.trajectory.lambda;
  r.inputs.dt = 1e-2;
  r.inputs.alpha0 = r.trajectory.alpha.front();
  r.inputs.particles = 2;
  r.inputs.fidelity0 = fidelity(data.gamma_n, DensityMatrix(kron_power(data.gamma_one.matrix(), 2), data.gamma_n.shape()));
  r.inputs.k_values = {1, 2};
  return r;
}

}  // namespace

TEST(Envelope, ZeroLambdaIsConstant) {
  const EnvelopeInputs in = constant_lambda(0.0, 11, 0.1, 0.05, 4, 0.9);
  for (std::size_t i = 0; i < 11; ++i) {
    EXPECT_NEAR(pickl_envelope(in, i), 0.3, 1e-15);
    EXPECT_NEAR(fidelity_envelope(in, 1, i), fidelity_envelope(in, 1, 0), 1e-15);
  }
}

TEST(Envelope, ConstantLambdaClosedForm) {
  const EnvelopeInputs in = constant_lambda(0.7, 101, 0.01, 0.1, 5, 1.0);
  for (std::size_t i : {0u, 37u, 100u}) {
    const double t = 0.01 * static_cast<double>(i);
    EXPECT_NEAR(lambda_integral(in, i), 0.7 * t, 1e-14);
    EXPECT_NEAR(pickl_envelope(in, i), std::exp(8.0 * 0.7 * t) * (0.1 + 0.2), 1e-12);
  }
}

TEST(Envelope, ProductDataValues) {
  const EnvelopeInputs in = constant_lambda(1.0, 3, 0.1, 0.0, 4, 1.0);
  EXPECT_NEAR(pickl_envelope(in, 0), 0.25, 1e-15);
  EXPECT_NEAR(fidelity_envelope(in, 1, 0), 0.5, 1e-15);
  EXPECT_NEAR(trace_envelope(in, 1, 0), std::sqrt(2.0), 1e-15);
}

TEST(Envelope, MixedDataFidelity) {
  const EnvelopeInputs in = constant_lambda(0.0, 5, 0.1, 0.2, 3, 0.9, {2});
  EXPECT_NEAR(fidelity_envelope(in, 2, 4), 26.0 / 15.0, 1e-14);
}

TEST(Envelope, TraceDecaysLikeInverseSqrtN) {
  const double a = trace_envelope(constant_lambda(0.0, 1, 0.1, 0.0, 100, 1.0), 1, 0);
  const double b = trace_envelope(constant_lambda(0.0, 1, 0.1, 0.0, 10000, 1.0), 1, 0);
  EXPECT_NEAR(a / b, 10.0, 1e-12);
}

TEST(Envelope, Validation) {
  EXPECT_THROW(constant_lambda(-1.0, 3, 0.1, 0.0, 4, 1.0).validate(), Error);
  EXPECT_THROW(constant_lambda(1.0, 3, 0.1, 0.0, 1, 1.0).validate(), Error);
  EXPECT_THROW(constant_lambda(1.0, 3, 0.1, 0.0, 4, 1.5).validate(), Error);
  EXPECT_THROW(constant_lambda(1.0, 3, 0.1, 0.0, 2, 1.0, {3}).validate(), Error);
}

TEST(Certify, FreeProductRun) {
  const TorusModel model = make_model(3, OneBodyPreset::Laplacian, PotentialSpec{PotentialKind::Zero});
  const InitialData data = scenario_product(1, 3, 3, 2);
  const PurifiedPair pair = purify_n_body(data.gamma_n, data.gamma_one);
  const Trajectory tr = evolve_trajectory(model, 3, pair.psi_tilde, pair.phi, TimeGrid{0.2, 1e-2, 4});
  EnvelopeInputs in = constant_lambda(0.0, 0, 1e-2, 0.0, 3, 1.0, {1, 2});
  in.lambda_samples = tr.lambda;
  const MarginReport rep = certify_theorems(tr, in);
  EXPECT_TRUE(rep.passed());
  EXPECT_GT(rep.min_margin(Inequality::Pickl), 0.0);
  EXPECT_GT(rep.min_margin(Inequality::Fidelity), 0.0);
  EXPECT_GT(rep.min_margin(Inequality::TraceNorm), 0.0);
  const MarginReport d = check_derivative_inequality(tr, in);
  EXPECT_TRUE(d.passed());
}

TEST(Certify, InteractingRunPassesEveryCertifier) {
  for (PotentialKind kind : {PotentialKind::Bounded, PotentialKind::CoulombLike}) {
    const CertRun r = bounded_run(kind, 3, 0.5);
    EXPECT_NO_THROW(certify_theorems(r.trajectory, r.inputs));
    EXPECT_NO_THROW(check_derivative_inequality(r.trajectory, r.inputs));
    EXPECT_TRUE(assess_lemma_samples(r.trajectory, r.inputs).passed());
    EXPECT_TRUE(assess_counting(r.trajectory).passed());
    EXPECT_TRUE(assess_route_consistency(r.trajectory).passed());
  }
}

TEST(Certify, CorruptedAlphaIsCaught) {
  const TorusModel model = make_model(4, OneBodyPreset::Laplacian, PotentialSpec{PotentialKind::Bounded});
  const MixtureScenario mix = scenario_mixture_counterexample(1, 4, 3);
  const PurifiedPair pair = purify_n_body(mix.data.gamma_n, mix.data.gamma_one);
  TrajectoryOptions opts;
  opts.k_values = {1};
  Trajectory tr = evolve_trajectory(model, 3, pair.psi_tilde, pair.phi, TimeGrid{0.1, 1e-2, 5}, opts);
  EnvelopeInputs in = constant_lambda(0.0, 0, 1e-2, tr.alpha.front(), 3, 0.25, {1});
  in.lambda_samples = tr.lambda;
  EXPECT_NO_THROW(certify_theorems(tr, in));
  for (double& a : tr.alpha) a *= 10.0;
  try {
    certify_theorems(tr, in);
    FAIL();
  } catch (const CertificationFailure& e) {
    EXPECT_EQ(e.record().inequality, Inequality::Pickl);
    EXPECT_EQ(e.code(), ErrorCode::CertificationFailure);
  }
}

TEST(Certify, HalvedLambdaIsCaught) {
  CertRun r = bounded_run(PotentialKind::Bounded, 4, 0.2);
  EXPECT_NO_THROW(enforce(assess_lemma_samples(r.trajectory, r.inputs)));
  for (double& l : r.inputs.lambda_samples) l *= 0.5;
  EXPECT_THROW(enforce(assess_lemma_samples(r.trajectory, r.inputs)), CertificationFailure);
}

TEST(LemmaD, FreePotential) {
  Rng rng(1);
  const TorusModel model(ComplexMatrix::Zero(3, 3), RealVector::Zero(3));
  const PureState phi(random_unit_vector(6, rng), TensorShape{3, 2});
  const LemmaCheck c = check_lemma_D(model, phi);
  EXPECT_EQ(c.cancel_defect, 0.0);
  EXPECT_EQ(c.projected_norm, 0.0);
  EXPECT_EQ(c.lambda, 0.0);
}

TEST(LemmaD, HandCase) {
  RealVector v(4);
  v << 0.0, 1.0, 0.0, 1.0;
  const TorusModel model(ComplexMatrix::Zero(4, 4), v);
  const PureState phi(ComplexVector::Constant(4, 0.5), TensorShape{4, 1});
  const LemmaCheck c = check_lemma_D(model, phi);
  EXPECT_NEAR(c.lambda, 0.5, 1e-15);
  EXPECT_LE(c.cancel_defect, 1e-10);
  EXPECT_LE(c.projected_norm, 0.5 + 1e-10);
}

TEST(LemmaD, RandomInstances) {
  Rng rng(2);
  const TorusModel model = make_model(3, OneBodyPreset::Zero, PotentialSpec{PotentialKind::CoulombLike});
  for (int i = 0; i < 20; ++i) {
    const PureState phi(random_unit_vector(6, rng), TensorShape{3, 2});
    const LemmaCheck c = check_lemma_D(model, phi);
    EXPECT_LE(c.cancel_defect, 1e-10);
    EXPECT_GE(c.projected_norm_margin, -1e-10);
    const LemmaCompression fast = lemma_compression(model, phi);
    EXPECT_NEAR(fast.cancel, c.cancel_defect, 1e-12);
    EXPECT_NEAR(fast.projected, c.projected_norm, 1e-12);
  }
}

TEST(MarginReport, CsvAndSummary) {
  MarginReport rep;
  rep.add({0, 0.0, 1, Inequality::Fidelity, 0.1, 0.5, 0.4, 1e-8});
  rep.add({1, 0.1, 1, Inequality::Fidelity, 0.6, 0.5, -0.1, 1e-8});
  EXPECT_FALSE(rep.passed());
  EXPECT_EQ(rep.violations(), 1u);
  EXPECT_EQ(rep.first_violation()->step, 1u);
  EXPECT_NEAR(rep.min_margin(Inequality::Fidelity), -0.1, 1e-15);
  EXPECT_NE(rep.to_csv().find("fidelity"), std::string::npos);
  EXPECT_NE(rep.summary_json().find("\"passed\": false"), std::string::npos);
  EXPECT_THROW(enforce(rep), CertificationFailure);
}
