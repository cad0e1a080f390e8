// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "chess/cli.hpp"
#include "chess/hessian_op.hpp"
#include "chess/mms.hpp"
#include "chess/props.hpp"
#include "chess/sampling.hpp"
#include "chess/solver.hpp"
#include "oracles.hpp"

using namespace chess;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double gauge_error(const Field& a, const Field& b) {
  return (project_mean_zero(a) - project_mean_zero(b)).sup_norm();
}

// Converged solutions shared between criteria.
struct Solved {
  std::string name;
  Field phi;
  Field f;
  std::size_t k;
};
std::vector<Solved> solved;

Outcome inequality_suites() {
  const std::pair<std::size_t, std::size_t> cases[] = {{2, 2}, {3, 2}, {3, 3}, {4, 2}, {4, 3}};
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  double worst = INFINITY;
  std::string failed;
  for (auto [n, k] : cases) {
    const PropsReport rep = run_props(n, k, 10000, 2024);
    for (const auto& s : rep.suites) {
      if (!s.pass) {
        pass = false;
        failed += " " + s.name + "(" + std::to_string(n) + "," + std::to_string(k) + ")";
      }
      if (s.samples > 0 && s.tolerance == 1e-9) worst = std::min(worst, s.worst_slack);
    }
  }
  const double secs = seconds_since(t0);
  pass = pass && worst >= -1e-9 && secs < 30.0;
  return {pass, "worst relative slack " + fmt("%.3g", worst) + ", " + fmt("%.1f", secs) + " s (limit 30 s)" +
                    (failed.empty() ? "" : ", failed:" + failed)};
}

Outcome gradient_check() {
  Rng rng(77);
  const std::pair<std::size_t, std::size_t> cases[] = {{2, 1}, {2, 2}, {3, 2}, {3, 3}, {4, 2}, {4, 3}, {5, 3}};
  const double eps = 1e-5;
  double worst_rel = 0.0, worst_ell = INFINITY;
  for (int s = 0; s < 1000; ++s) {
    const auto [n, k] = cases[s % 7];
    const HermMat a = sample_cone_matrix(rng, n, k);
    const HermMat b = random_hermitian(rng, n);
    const double sk = s_k_mat(a, k);
    const double fd = (s_k_mat(a + eps * b, k) - s_k_mat(a - (eps * b), k)) / (2 * eps);
    const HermMat g = deriv_matrix(a, k, DerivKind::LogGrad).matrix;
    const double an = sk * trace_pairing(g, b);
    worst_rel = std::max(worst_rel, std::abs(fd - an) / (sk * g.frobenius() * b.frobenius()));
    const Spectrum lam = eigvals_h(a);
    worst_ell = std::min(worst_ell, eigvals_h(g)[n - 1] - static_cast<double>(k) / (n * lam[0]));
  }
  return {worst_rel <= 1e-5 && worst_ell >= -1e-9,
          "max rel error " + fmt("%.3g", worst_rel) + ", min(lambda_min(F) - k/(n lambda_max)) " +
              fmt("%.3g", worst_ell)};
}

Outcome polarization_oracle() {
  Rng rng(78);
  double worst_cone = 0.0, worst_general = 0.0;
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t k = 1; k <= n; ++k)
      for (int t = 0; t < 100; ++t) {
        std::vector<HermMat> cone, general;
        double scale = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
          cone.push_back(sample_cone_matrix(rng, n, k));
          general.push_back(random_hermitian(rng, n));
          scale *= general.back().frobenius();
        }
        const double want = oracle::polarization_bruteforce(cone);
        worst_cone = std::max(worst_cone, std::abs(polarize(cone, k) - want) / std::abs(want));
        const double want_g = oracle::polarization_bruteforce(general);
        worst_general = std::max(worst_general, std::abs(polarize(general, k) - want_g) / scale);
      }
  return {worst_cone <= 1e-9 && worst_general <= 1e-9,
          "max rel error " + fmt("%.3g", worst_cone) + " on cone tuples, " + fmt("%.3g", worst_general) +
              " (scaled by norms) on general tuples"};
}

Outcome laplacian_reduction() {
  const TorusGrid g(2, 16);
  const Field phi_star = make_mms(g, 0.05, 31);
  const Field f = apply_op(phi_star, 1);
  Field rhs = f;
  rhs += -1.0;
  rhs *= 2.0;
  const Field want = oracle::poisson_dft(rhs);
  SolveConfig cfg;
  cfg.newton_tol = 1e-12;
  const auto t0 = std::chrono::steady_clock::now();
  const SolveResult r = continuity_solve(f, 1, cfg);
  const double secs = seconds_since(t0);
  const double err = gauge_error(r.phi, want);
  solved.push_back({"k=1 Poisson", r.phi, f, 1});
  return {err <= 1e-10 && secs < 5.0,
          "sup error " + fmt("%.3g", err) + ", " + fmt("%.2f", secs) + " s (limit 5 s)"};
}

Outcome mms_recovery(std::size_t n, std::size_t N, double amp, std::uint64_t seed, double tol, double limit) {
  const TorusGrid g(n, N);
  const Field phi_star = make_mms(g, amp, seed);
  const double margin = cone_margin(phi_star, 2);
  const Field f = apply_op(phi_star, 2);
  const auto t0 = std::chrono::steady_clock::now();
  const SolveResult r = continuity_solve(f, 2, SolveConfig{});
  const double secs = seconds_since(t0);
  const double err = gauge_error(r.phi, phi_star);
  solved.push_back({"MMS n=" + std::to_string(n), r.phi, f, 2});
  return {err <= tol && secs < limit && margin >= 0.5,
          "cone margin " + fmt("%.3f", margin) + ", sup error " + fmt("%.3g", err) + ", " +
              std::to_string(r.trace.stages) + " stages, " + fmt("%.1f", secs) + " s (limit " +
              fmt("%.0f", limit) + " s)"};
}

Outcome uniqueness() {
  const TorusGrid g(2, 16);
  const Field phi_star = make_mms(g, 0.05, 7);
  const Field f = apply_op(phi_star, 2);
  const SolveResult from_zero = continuity_solve(f, 2, SolveConfig{});
  const Field phi0 = make_mms(g, 0.05, 4242);
  const double m0 = cone_margin(phi0, 2);
  const SolveResult from_mms = newton_solve(f, 2, phi0, SolveConfig{});
  solved.push_back({"uniqueness", from_mms.phi, f, 2});
  const double diff = gauge_error(from_zero.phi, from_mms.phi);
  return {diff <= 1e-6 && m0 > 0.0,
          "sup difference " + fmt("%.3g", diff) + " (second start has cone margin " + fmt("%.3f", m0) + ")"};
}

Outcome energy_identity_pairs() {
  const TorusGrid g(2, 16);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> amp(0.01, 0.05);
  double worst_term = INFINITY, worst_defect = 0.0;
  for (int p = 0; p < 20; ++p) {
    const Field phi = make_mms(g, amp(rng), 1000 + 2 * p);
    const Field psi = make_mms(g, amp(rng), 1001 + 2 * p);
    const EnergyIdentity e = energy_identity(phi, psi, 2);
    for (double m : e.min_integrand) worst_term = std::min(worst_term, m);
    worst_defect = std::max(worst_defect, e.defect);
  }
  return {worst_term >= -1e-10 && worst_defect <= 1e-6,
          "min pointwise term " + fmt("%.3g", worst_term) + ", max defect " + fmt("%.3g", worst_defect)};
}

Outcome monitors_check() {
  bool pass = !solved.empty();
  double lam_bound = INFINITY, s1_bound = INFINITY, trace_def = 0.0;
  for (const auto& s : solved) {
    const EstimateReport r = monitors(s.phi, s.f, s.k);
    if (s.k >= 2) lam_bound = std::min(lam_bound, r.spectrum_bound_slack);
    s1_bound = std::min(s1_bound, r.s1_bound_slack);
    trace_def = std::max(trace_def, r.max_trace_identity_defect);
  }
  pass = pass && lam_bound >= 0.0 && s1_bound >= -1e-9 && trace_def <= 1e-8;

  // Smooth potential with every Fourier mode populated, sampled at two resolutions.
  double defect[2];
  for (int i = 0; i < 2; ++i) {
    const TorusGrid g(2, i == 0 ? 16 : 32);
    const Field phi = project_mean_zero(oracle::sample(g, [](const std::vector<double>& x) {
      const double tp = 2 * oracle::kPi;
      return 0.02 * (1.0 / (2.0 - std::cos(tp * x[0])) + 1.0 / (2.0 - std::sin(tp * (x[1] - x[2]))) +
                     0.5 / (2.0 - std::cos(tp * x[3])));
    }));
    pass = pass && cone_margin(phi, 2) > 0.0;
    defect[i] = std::abs(mean(apply_op(phi, 2)) - 1.0);
  }
  pass = pass && defect[1] < defect[0];
  return {pass, std::to_string(solved.size()) + " solves: min spectrum-bound slack " + fmt("%.3g", lam_bound) +
                    ", min S_1-bound slack " + fmt("%.3g", s1_bound) + ", max trace identity defect " +
                    fmt("%.3g", trace_def) + "; compatibility defect N=16 " + fmt("%.3g", defect[0]) +
                    ", N=32 " + fmt("%.3g", defect[1])};
}

std::string bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  std::filesystem::path dirs[2] = {oracle::tmp_dir("det_a"), oracle::tmp_dir("det_b")};
  for (const auto& d : dirs) {
    std::ostringstream out, err;
    const int a = run_cli({"mms", "--n", "2", "--k", "2", "--N", "16", "--amp", "0.05", "--seed", "7", "--threads",
                           "1", "--out-dir", d.string()},
                          out, err);
    const int b = run_cli({"solve", "--n", "2", "--k", "2", "--N", "16", "--rhs", (d / "rhs.json").string(), "--out",
                           (d / "phi.json").string(), "--seed", "7", "--threads", "1"},
                          out, err);
    if (a != 0 || b != 0) return {false, "cli exit codes " + std::to_string(a) + ", " + std::to_string(b)};
  }
  const char* files[] = {"phi_star.json", "phi_star.f64", "rhs.json", "rhs.f64",
                         "phi.json",      "phi.f64",      "phi.trace.jsonl"};
  int same = 0;
  for (const char* f : files) same += bytes(dirs[0] / f) == bytes(dirs[1] / f) && !bytes(dirs[0] / f).empty();
  return {same == 7, std::to_string(same) + "/7 output files byte-identical"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"inequality fuzz suites", inequality_suites},
      {"derivative-matrix gradient check", gradient_check},
      {"polarization oracle", polarization_oracle},
      {"k=1 Laplacian reduction (n=2, N=16)", laplacian_reduction},
      {"MMS recovery n=2 k=2 N=16", [] { return mms_recovery(2, 16, 0.05, 7, 1e-8, 60.0); }},
      {"MMS recovery n=3 k=2 N=8", [] { return mms_recovery(3, 8, 0.04, 3, 1e-7, 300.0); }},
      {"uniqueness from distinct starts", uniqueness},
      {"energy identity (20 pairs)", energy_identity_pairs},
      {"estimate monitors", monitors_check},
      {"determinism with --threads 1", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %2zu %s: %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
