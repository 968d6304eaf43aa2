// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "mfcert/bounds.hpp"
#include "mfcert/config.hpp"
#include "mfcert/metrics.hpp"
#include "mfcert/property_checks.hpp"
#include "mfcert/purify.hpp"
#include "mfcert/random.hpp"
#include "mfcert/runner.hpp"
#include "mfcert/scenarios.hpp"

using namespace mfcert;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::vector<std::pair<std::string, Verdict>> g_results;

void report(const std::string& id, const Verdict& v) {
  std::printf("%-5s %s  %s\n", id.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
  std::fflush(stdout);
  g_results.emplace_back(id, v);
}

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct GridRun {
  ExperimentConfig config;
  RunResult result;
  double seconds = 0.0;
};

std::vector<GridRun> grid_runs() {
  std::vector<GridRun> out;
  for (PotentialKind v : {PotentialKind::Bounded, PotentialKind::CoulombLike})
    for (ScenarioKind s : {ScenarioKind::Product, ScenarioKind::NearProduct})
      for (std::size_t n : {2u, 3u}) {
        ExperimentConfig c;
        c.name = std::string(v == PotentialKind::Bounded ? "bounded" : "coulomb") +
                 (s == ScenarioKind::Product ? "/product" : "/near-product") + "/N=" + std::to_string(n);
        c.sites = 4;
        c.particles = n;
        c.potential.kind = v;
        c.scenario = s;
        c.epsilon = 0.1;
        c.grid = {1.0, 1e-3, 1};
        c.k_values = {1, 2};
        c.seed = kSeed + n;
        const auto start = std::chrono::steady_clock::now();
        RunResult r = run(c);
        const double secs = seconds_since(start);
        std::printf("      run %-26s %s  %.2fs\n", c.name.c_str(), r.passed() ? "certified" : "VIOLATIONS", secs);
        out.push_back({c, std::move(r), secs});
      }
  return out;
}

// Violations and smallest margin of one inequality across the grid.
Verdict grid_inequality(const std::vector<GridRun>& runs, Inequality which, const char* label) {
  std::size_t cells = 0, bad = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& g : runs) {
    cells += g.result.report.count(which);
    for (const auto& rec : g.result.report.records)
      if (rec.inequality == which && rec.violated()) ++bad;
    worst = std::min(worst, g.result.report.min_margin(which));
  }
  Verdict v;
  v.pass = bad == 0 && cells > 0;
  v.detail = std::string(label) + ": " + std::to_string(cells) + " cells, " + std::to_string(bad) +
             " violations, min margin " + fmt("%.3e", worst);
  return v;
}

// Largest singular value of the linear map `apply` by block power iteration.
double power_norm(std::size_t dim, const std::function<ComplexMatrix(const ComplexMatrix&)>& apply,
                  const std::function<ComplexMatrix(const ComplexMatrix&)>& apply_adjoint, Rng& rng) {
  ComplexMatrix x = gaussian_matrix(dim, 4, rng);
  double estimate = 0.0;
  for (int it = 0; it < 40; ++it) {
    Eigen::HouseholderQR<ComplexMatrix> qr(x);
    x = qr.householderQ() * ComplexMatrix::Identity(static_cast<Eigen::Index>(dim), 4);
    const ComplexMatrix y = apply(x);
    for (Eigen::Index j = 0; j < y.cols(); ++j) estimate = std::max(estimate, y.col(j).norm());
    x = apply_adjoint(y);
  }
  return estimate;
}

Verdict ac12_kernels(const std::vector<GridRun>& runs) {
  Verdict v;
  Rng rng(kSeed + 12);
  std::string detail;
  double worst = 0.0;
  for (std::size_t d : {64u, 512u, 4096u}) {
    const auto n = static_cast<Eigen::Index>(d);
    const ComplexMatrix a = random_hermitian(d, rng);
    auto start = std::chrono::steady_clock::now();
    const HermitianEigen e = herm_eig(a);
    const double eig_secs = seconds_since(start);
    const ComplexVector lam = e.values.cast<Complex>();
    auto recon = [&](const ComplexMatrix& x) -> ComplexMatrix {
      return e.vectors * (lam.asDiagonal() * (e.vectors.adjoint() * x)) - a * x;
    };
    auto gram = [&](const ComplexMatrix& x) -> ComplexMatrix { return e.vectors.adjoint() * (e.vectors * x) - x; };
    const double a_norm = std::max(1.0, std::max(std::abs(e.values(0)), std::abs(e.values(n - 1))));
    const double eig_res = power_norm(d, recon, recon, rng) / a_norm;
    const double unitarity = power_norm(d, gram, gram, rng);

    const ComplexMatrix b = gaussian_matrix(d, d, rng);
    start = std::chrono::steady_clock::now();
    const SingularValueDecomposition s = svd(b);
    const double svd_secs = seconds_since(start);
    const ComplexVector sig = s.values.cast<Complex>();
    auto srecon = [&](const ComplexMatrix& x) -> ComplexMatrix {
      return s.left * (sig.asDiagonal() * (s.right.adjoint() * x)) - b * x;
    };
    auto srecon_adj = [&](const ComplexMatrix& x) -> ComplexMatrix {
      return s.right * (sig.asDiagonal() * (s.left.adjoint() * x)) - b.adjoint() * x;
    };
    const double svd_res = power_norm(d, srecon, srecon_adj, rng) / std::max(1.0, s.values(0));
    worst = std::max({worst, eig_res, unitarity, svd_res});
    detail += "d=" + std::to_string(d) + " eig " + fmt("%.1e", eig_res) + "/" + fmt("%.1e", unitarity) + " (" +
              fmt("%.0fs", eig_secs) + ") svd " + fmt("%.1e", svd_res) + " (" + fmt("%.0fs", svd_secs) + "); ";
  }
  const bool residuals_ok = worst <= 1e-10;

  double order = std::numeric_limits<double>::infinity();
  for (PotentialKind kind : {PotentialKind::Bounded, PotentialKind::CoulombLike}) {
    const TorusModel model = make_model(4, OneBodyPreset::Laplacian, PotentialSpec{kind});
    const OrderFit fit = hartree_local_order(model, random_density(4, 4, rng), {0.2, 0.1, 0.05, 0.025, 0.0125});
    order = std::min(order, fit.slope);
  }
  const bool order_ok = order >= 2.7;

  double norm_drift = 0.0, energy_drift = 0.0;
  std::size_t samples = std::numeric_limits<std::size_t>::max();
  for (const auto& g : runs) {
    norm_drift = std::max(norm_drift, g.result.max_norm_defect);
    energy_drift = std::max(energy_drift, g.result.max_energy_drift);
    samples = std::min(samples, g.result.trajectory.samples.size());
  }
  const bool drift_ok = norm_drift <= 1e-10 && energy_drift <= 1e-10 && samples >= 1000;

  v.pass = residuals_ok && order_ok && drift_ok;
  v.detail = detail + "local order " + fmt("%.3f", order) + "; norm drift " + fmt("%.1e", norm_drift) +
             ", energy drift " + fmt("%.1e", energy_drift) + " over " + std::to_string(samples) + " samples";
  return v;
}

Verdict ac7_purification() {
  Verdict v;
  Rng rng(kSeed + 7);
  double marginal = 0.0, overlap_gap = std::numeric_limits<double>::infinity();
  double bound = std::numeric_limits<double>::infinity(), symmetry = 0.0;
  std::size_t cases = 0;
  for (std::size_t sites : {2u, 3u, 4u})
    for (std::size_t n : {2u, 3u}) {
      if (sites == 4 && n == 3) continue;  // (L L)^N budget of the dense purification
      for (std::size_t rank = 1; rank <= sites; ++rank)
        for (int rep = 0; rep < 3; ++rep) {
          const double eps = std::uniform_real_distribution<double>(0.01, 0.5)(rng);
          const InitialData data = scenario_near_product(rng(), sites, n, eps, rank);
          const PurifiedPair pair = purify_n_body(data.gamma_n, data.gamma_one);
          const DensityMatrix product(kron_power(data.gamma_one.matrix(), n), data.gamma_n.shape());
          const double f = fidelity(data.gamma_n, product);
          marginal = std::max(marginal, pair.marginal_defect);
          overlap_gap = std::min(overlap_gap, pair.overlap_sq - f);
          bound = std::min(bound, initial_alpha_bound_check(pair, data.gamma_n, data.gamma_one));
          symmetry = std::max(symmetry, pair.symmetry_defect);
          ++cases;
        }
    }
  v.pass = marginal <= 1e-9 && overlap_gap >= -1e-9 && bound >= -1e-9 && symmetry <= 1e-8;
  v.detail = std::to_string(cases) + " perturbed inputs: marginal " + fmt("%.1e", marginal) + ", overlap-F " +
             fmt("%.1e", overlap_gap) + ", bound margin " + fmt("%.3e", bound) + ", symmetry " +
             fmt("%.1e", symmetry);
  return v;
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  std::printf("mfcert acceptance suite\n");
  const std::vector<GridRun> runs = grid_runs();

  {
    Verdict v = grid_inequality(runs, Inequality::Fidelity, "fidelity form");
    double slowest = 0.0;
    for (const auto& g : runs) slowest = std::max(slowest, g.seconds);
    v.pass = v.pass && slowest <= 60.0;
    v.detail += ", slowest run " + fmt("%.1fs", slowest);
    report("AC1", v);
  }
  report("AC2", grid_inequality(runs, Inequality::TraceNorm, "trace form"));
  {
    Verdict v = grid_inequality(runs, Inequality::Pickl, "counting functional");
    double alpha0 = 0.0;
    for (const auto& g : runs)
      if (g.config.scenario == ScenarioKind::Product) alpha0 = std::max(alpha0, g.result.trajectory.alpha.front());
    v.pass = v.pass && alpha0 <= 1e-12;
    v.detail += ", product alpha(0) " + fmt("%.1e", alpha0);
    report("AC3", v);
  }
  {
    const PropertyResult cancel = check_lemma_cancel(kSeed + 4);
    const PropertyResult projected = check_lemma_projected(kSeed + 4);
    RealVector pot(4);
    pot << 0.0, 1.0, 0.0, 1.0;
    const TorusModel hand(ComplexMatrix::Zero(4, 4), pot);
    const LemmaCheck h = check_lemma_D(hand, PureState(ComplexVector::Constant(4, 0.5), TensorShape{4, 1}));
    Verdict v;
    const bool hand_ok = std::abs(h.lambda - 0.5) <= 1e-15 && h.cancel_defect <= 1e-10 && h.projected_norm_margin >= -1e-10;
    v.pass = cancel.passed && projected.passed && hand_ok;
    v.detail = std::to_string(cancel.cases) + " random instances: max cancel " + fmt("%.1e", cancel.worst) +
               ", min Lambda-||Dp1|| " + fmt("%.1e", projected.worst) + "; hand case Lambda " +
               fmt("%.17g", h.lambda) + ", ||Dp1|| " + fmt("%.17g", h.projected_norm);
    report("AC4", v);
  }
  report("AC5", grid_inequality(runs, Inequality::Derivative, "differential inequality"));
  {
    const PropertyResult fvdg = check_fvdg(kSeed);
    const PropertyResult dpi = check_dpi(kSeed + 1);
    const PropertyResult cov = check_covariance(kSeed + 2);
    Verdict v;
    v.pass = fvdg.passed && dpi.passed && cov.passed && fvdg.cases == 200 && dpi.cases == 200 && cov.cases == 50;
    v.detail = "fvdg min " + fmt("%.1e", fvdg.worst) + " (200), dpi min " + fmt("%.1e", dpi.worst) +
               " (200), covariance max " + fmt("%.1e", cov.worst) + " (50)";
    report("AC6", v);
  }
  report("AC7", ac7_purification());

  ExperimentConfig mix_config = preset_config("mixture");
  mix_config.seed = kSeed;
  const RunResult mix = run(mix_config);
  {
    Verdict route = grid_inequality(runs, Inequality::RouteConsistency, "route distance");
    Verdict count = grid_inequality(runs, Inequality::CountingMarginal, "counting bound");
    const bool mix_ok = mix.report.count(Inequality::RouteConsistency) > 0 &&
                        mix.report.min_margin(Inequality::RouteConsistency) >= -1e-9 &&
                        mix.report.min_margin(Inequality::CountingMarginal) >= -1e-10;
    double max_route = 0.0;
    for (const auto& g : runs)
      for (const auto& s : g.result.trajectory.samples) max_route = std::max(max_route, s.route_distance);
    Verdict v;
    v.pass = route.pass && count.pass && mix_ok;
    v.detail = route.detail + " (max " + fmt("%.1e", max_route) + "); " + count.detail;
    report("AC8", v);
  }
  {
    Verdict v;
    const bool have = mix.mixture.has_value();
    v.pass = have && mix.mixture->initial_fidelity_defect <= 1e-12 && mix.mixture->max_gap > 0.0;
    if (have)
      v.detail = "initial defect " + fmt("%.1e", mix.mixture->initial_fidelity_defect) + ", max gap " +
                 fmt("%.6e", mix.mixture->max_gap) + " at t=" + fmt("%.3f", mix.mixture->t_max_gap);
    report("AC9", v);
  }
  {
    const PropertyResult holder = check_holder(kSeed + 3);
    Verdict v;
    v.pass = holder.passed && holder.cases == 300;
    v.detail = "100 pairs x r in {1,2,8}: min margin " + fmt("%.3e", holder.worst);
    report("AC10", v);
  }
  {
    Verdict v;
    std::string alpha_note = "alpha x10 not caught";
    Trajectory corrupted = mix.trajectory;
    for (double& a : corrupted.alpha) a *= 10.0;
    bool alpha_caught = false;
    try {
      certify_theorems(corrupted, mix.inputs, mix.config.tolerance);
    } catch (const CertificationFailure& e) {
      alpha_caught = true;
      alpha_note = "alpha x10 -> " + std::string(to_string(e.record().inequality)) + " at t=" + fmt("%.3g", e.record().t);
    }
    const bool clean_alpha = assess_theorems(mix.trajectory, mix.inputs, mix.config.tolerance).passed();

    EnvelopeInputs halved = runs.front().result.inputs;
    for (double& l : halved.lambda_samples) l *= 0.5;
    std::string lambda_note = "Lambda x0.5 not caught";
    bool lambda_caught = false;
    try {
      enforce(assess_lemma_samples(runs.front().result.trajectory, halved));
    } catch (const CertificationFailure& e) {
      lambda_caught = true;
      lambda_note = "Lambda x0.5 -> " + std::string(to_string(e.record().inequality)) + " at t=" + fmt("%.3g", e.record().t);
    }
    const bool clean_lambda = assess_lemma_samples(runs.front().result.trajectory, runs.front().result.inputs).passed();
    v.pass = alpha_caught && lambda_caught && clean_alpha && clean_lambda;
    v.detail = alpha_note + "; " + lambda_note;
    report("AC11", v);
  }
  report("AC12", ac12_kernels(runs));

  std::size_t failed = 0;
  for (const auto& [id, v] : g_results) failed += v.pass ? 0 : 1;
  std::printf("%zu/%zu criteria passed in %.0fs\n", g_results.size() - failed, g_results.size(), seconds_since(start));
  return failed == 0 ? 0 : 1;
}
