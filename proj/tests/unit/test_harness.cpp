#include <gtest/gtest.h>

#include <sstream>

#include "mfcert/config.hpp"
#include "mfcert/error.hpp"
#include "mfcert/metrics.hpp"
#include "mfcert/purify.hpp"
#include "mfcert/runner.hpp"
#include "mfcert/scenarios.hpp"

using namespace mfcert;

namespace {

DensityMatrix product_of(const InitialData& d, std::size_t n) {
  return DensityMatrix(kron_power(d.gamma_one.matrix(), n), d.gamma_n.shape());
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidState;
}

}  // namespace

TEST(ScenarioProduct, RankAndDeterminism) {
  const InitialData pure = scenario_product(5, 3, 2, 1);
  EXPECT_NEAR(herm_eigenvalues(pure.gamma_one.matrix())(2), 1.0, 1e-12);
  const InitialData full = scenario_product(5, 3, 2, 3);
  EXPECT_GT(herm_eigenvalues(full.gamma_one.matrix())(0), 1e-6);
  EXPECT_LT((full.gamma_n.matrix() - kron(full.gamma_one.matrix(), full.gamma_one.matrix())).norm(), 1e-15);
  const InitialData again = scenario_product(5, 3, 2, 3);
  EXPECT_TRUE(again.gamma_n.matrix() == full.gamma_n.matrix());
  EXPECT_TRUE(again.gamma_one.matrix() == full.gamma_one.matrix());
  EXPECT_THROW(scenario_product(5, 3, 2, 4), Error);
}

TEST(ScenarioNearProduct, Examples) {
  const InitialData zero = scenario_near_product(9, 3, 2, 0.0, 3);
  const InitialData prod = scenario_product(9, 3, 2, 3);
  EXPECT_LT((zero.gamma_n.matrix() - prod.gamma_n.matrix()).norm(), 1e-15);

  const InitialData eps = scenario_near_product(9, 3, 2, 0.1, 3);
  EXPECT_GE(fidelity(eps.gamma_n, product_of(eps, 2)), 0.9);
  EXPECT_LT(permutation_defect(eps.gamma_n.matrix(), 3, 2), 1e-14);
  const InitialData noise = scenario_near_product(9, 3, 2, 1.0, 3);
  EXPECT_LT(fidelity(noise.gamma_n, product_of(noise, 2)), fidelity(eps.gamma_n, product_of(eps, 2)));
  EXPECT_THROW(scenario_near_product(9, 3, 2, 1.5, 3), Error);
}

TEST(ScenarioMixture, InitialStatesCoincide) {
  const MixtureScenario mix = scenario_mixture_counterexample(2, 4, 3);
  EXPECT_NEAR(std::abs(mix.phi0.dot(mix.psi0)), 0.0, 1e-14);
  const std::array<std::size_t, 1> keep{0};
  const DensityMatrix marginal = partial_trace(mix.data.gamma_n, keep);
  EXPECT_NEAR(1.0 - fidelity(marginal, mix.data.gamma_one), 0.0, 1e-12);
  const ComplexMatrix half = 0.5 * (mix.phi0 * mix.phi0.adjoint() + mix.psi0 * mix.psi0.adjoint());
  EXPECT_LT((mix.data.gamma_one.matrix() - half).norm(), 1e-14);
}

TEST(ScenarioMixture, FreeFlowsCoincide) {
  const TorusModel model = make_model(3, OneBodyPreset::Laplacian, PotentialSpec{PotentialKind::Zero});
  const MixtureScenario mix = scenario_mixture_counterexample(3, 3, 2);
  const PurifiedPair pair = purify_n_body(mix.data.gamma_n, mix.data.gamma_one);
  TrajectoryOptions opts;
  opts.k_values = {1};
  const Trajectory tr = evolve_trajectory(model, 2, pair.psi_tilde, pair.phi, TimeGrid{0.5, 1e-2, 5}, opts);
  const MixtureCurves c = mixture_curves(model, mix, tr);
  for (double g : c.gap) EXPECT_LT(g, 1e-10);
}

TEST(ScenarioMixture, InteractingFlowsSeparate) {
  const TorusModel model = make_model(4, OneBodyPreset::Laplacian, PotentialSpec{PotentialKind::Bounded});
  const MixtureScenario mix = scenario_mixture_counterexample(1, 4, 3);
  const PurifiedPair pair = purify_n_body(mix.data.gamma_n, mix.data.gamma_one);
  TrajectoryOptions opts;
  opts.k_values = {1};
  const Trajectory tr = evolve_trajectory(model, 3, pair.psi_tilde, pair.phi, TimeGrid{1.0, 1e-2, 10}, opts);
  const MixtureCurves c = mixture_curves(model, mix, tr);
  EXPECT_LE(c.initial_fidelity_defect, 1e-12);
  EXPECT_GT(c.max_gap, 1e-3);
}

TEST(Config, ParseAndRoundTrip) {
  std::istringstream in(
      "# comment\nname = x\nL = 3\nN = 2\nV = coulomb\ndelta = 0.25\nscenario = near-product\n"
      "epsilon = 0.2\ndt = 0.01\nt_final = 0.5\nk = 1,2\nseed = 42\n");
  const ExperimentConfig c = parse_config(in);
  EXPECT_EQ(c.sites, 3u);
  EXPECT_EQ(c.potential.kind, PotentialKind::CoulombLike);
  EXPECT_EQ(c.potential.delta, 0.25);
  EXPECT_EQ(c.scenario, ScenarioKind::NearProduct);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.k_values, (std::vector<std::size_t>{1, 2}));
  std::istringstream back(c.to_text());
  EXPECT_EQ(parse_config(back).to_text(), c.to_text());
}

TEST(Config, Rejections) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    parse_config(in).validate();
  };
  EXPECT_EQ(code_of([&] { parse("L = 4\nN = 1\n"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { parse("L = 4\nN = 3\nk = 4\n"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { parse("bogus = 1\n"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { parse("dt = x\n"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { parse("L = 5\nN = 4\n"); }), ErrorCode::SizeBudgetExceeded);
  EXPECT_EQ(code_of([&] { parse("scenario = mixture\nk = 2\n"); }), ErrorCode::InvalidConfig);
  EXPECT_EQ(code_of([&] { parse("dt = 0.3\nt_final = 1\n"); }), ErrorCode::InvalidConfig);
}

TEST(Config, Presets) {
  for (const char* name : {"smoke", "paper-check", "mixture"}) EXPECT_NO_THROW(preset_config(name).validate());
  EXPECT_THROW(preset_config("nope"), Error);
}

TEST(Run, SmokePassesQuickly) {
  const auto start = std::chrono::steady_clock::now();
  const RunResult r = run(preset_config("smoke"));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.exit_code(), kExitPass);
  EXPECT_LT(seconds, 1.0);
}

TEST(Run, RejectsSingleParticleBeforeWork) {
  ExperimentConfig c = preset_config("smoke");
  c.particles = 1;
  EXPECT_EQ(code_of([&] { run(c); }), ErrorCode::InvalidConfig);
}

TEST(Run, CsvIsReproducible) {
  ExperimentConfig c = preset_config("smoke");
  c.scenario = ScenarioKind::NearProduct;
  c.seed = 17;
  const std::string a = trajectory_csv(run(c));
  const std::string b = trajectory_csv(run(c));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.rfind("# mfcert trajectory v1", 0), 0u);
}
