#include "chess/cli.hpp"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "chess/error.hpp"
#include "chess/field_io.hpp"
#include "chess/hessian_op.hpp"
#include "chess/mms.hpp"
#include "chess/parallel.hpp"
#include "chess/props.hpp"
#include "chess/solver.hpp"
#include "json.hpp"

namespace chess {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kMath = 2 };

std::string fnv1a_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "unreadable";
  std::uint64_t h = 0xcbf29ce484222325ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

json hash_field_files(const fs::path& sidecar) {
  return {{"sidecar", fnv1a_file(sidecar)}, {"payload", fnv1a_file(payload_path(sidecar))}};
}

json to_json(const std::pair<double, double>& r) { return json::array({r.first, r.second}); }

json to_json(const EstimateReport& r) {
  return {{"sup_B", r.sup_B},
          {"sup_A", r.sup_A},
          {"osc_phi", r.osc_phi},
          {"sup_S1", r.sup_S1},
          {"sup_abs_lambda", r.sup_abs_lambda},
          {"spectrum_bound_slack", r.spectrum_bound_slack},
          {"s1_bound_slack", r.s1_bound_slack},
          {"ellipticity_slack", r.ellipticity_slack},
          {"tr_G_range", to_json(r.tr_G_range)},
          {"tr_H_range", to_json(r.tr_H_range)},
          {"max_trace_identity_defect", r.max_trace_identity_defect},
          {"sup_c2_minus", r.sup_c2_minus},
          {"sup_c2_plus", r.sup_c2_plus},
          {"h_prime_range", to_json(r.h_prime_range)},
          {"h_second_range", to_json(r.h_second_range)},
          {"tr_H_bound", r.tr_H_bound},
          {"residual_sup", r.residual_sup},
          {"maclaurin_ok", r.maclaurin_ok}};
}

json to_json(const IterationRecord& r) {
  json j = {{"t", r.t},
            {"stage", r.stage},
            {"iteration", r.iteration},
            {"residual", r.residual},
            {"cone_margin", r.cone_margin},
            {"step", r.step},
            {"backtracks", r.backtracks},
            {"krylov_iterations", r.krylov_iterations}};
  if (r.report) j["report"] = to_json(*r.report);
  return j;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream o(p);
  if (!o) throw IoError("cannot write " + p.string());
  o << text;
}

void write_trace(const fs::path& p, const SolveTrace& trace) {
  std::string text;
  for (const auto& r : trace.records) text += to_json(r).dump() + "\n";
  write_text(p, text);
}

// One manifest per run, written by `finish`.
class Manifest {
 public:
  Manifest(std::string command, json config) : start_(std::chrono::steady_clock::now()) {
    doc_["command"] = std::move(command);
    doc_["version"] = kVersion;
    doc_["threads"] = num_threads();
    doc_["config"] = std::move(config);
    doc_["inputs"] = json::object();
    doc_["outputs"] = json::array();
    doc_["result"] = json::object();
  }

  void input(const std::string& name, const fs::path& sidecar) { doc_["inputs"][name] = hash_field_files(sidecar); }
  void output(const fs::path& p) { doc_["outputs"].push_back(p.string()); }
  json& result() { return doc_["result"]; }
  void error(const std::string& kind, const std::string& message) {
    doc_["error"] = {{"kind", kind}, {"message", message}};
  }

  int finish(const fs::path& where, int status, std::ostream& err) {
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    doc_["exit_status"] = status;
    doc_["wall_time_s"] = secs;
    try {
      write_text(where, doc_.dump(2) + "\n");
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kUsage;
    }
    return status;
  }

 private:
  json doc_;
  std::chrono::steady_clock::time_point start_;
};

fs::path with_suffix(const fs::path& base, const std::string& suffix) {
  fs::path p = base;
  p.replace_extension(suffix);
  return p;
}

int error_exit(const std::exception& e, Manifest& m, const fs::path& where, std::ostream& err) {
  std::string kind = "error";
  int code = kUsage;
  if (const auto* se = dynamic_cast<const SolverError*>(&e)) {
    kind = to_string(se->kind());
    code = kMath;
  } else if (dynamic_cast<const PositivityError*>(&e)) {
    kind = "positivity";
    code = kMath;
  } else if (dynamic_cast<const CompatibilityError*>(&e)) {
    kind = "compatibility";
    code = kMath;
  } else if (const auto* cv = dynamic_cast<const ConeViolation*>(&e)) {
    kind = "cone_violation";
    code = kMath;
    m.result()["worst_point"] = cv->index();
    m.result()["worst_value"] = cv->value();
  } else if (dynamic_cast<const IoError*>(&e)) {
    kind = "io";
  } else if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ParameterError*>(&e)) {
    kind = "validation";
  }
  err << "error (" << kind << "): " << e.what() << "\n";
  m.error(kind, e.what());
  return m.finish(where, code, err);
}

struct Common {
  int threads = 0;
  std::string manifest;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--threads", c.threads, "Thread cap (overrides CHESS_THREADS)")->check(CLI::NonNegativeNumber);
  sub->add_option("--manifest", c.manifest, "Manifest path (defaults next to the main output)");
}

void apply_threads(const Common& c) {
  int threads = c.threads;
  if (threads == 0) {
    if (const char* env = std::getenv("CHESS_THREADS")) threads = std::atoi(env);
  }
  set_num_threads(threads);
}

struct SolveArgs {
  std::size_t n = 0, k = 0, N = 0;
  std::string rhs, out, reference;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int max_newton = 50;
};

int cmd_solve(const SolveArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  const fs::path out_path = a.out;
  const fs::path manifest_path = c.manifest.empty() ? with_suffix(out_path, ".manifest.json") : fs::path(c.manifest);
  Manifest m("solve", {{"n", a.n}, {"k", a.k}, {"N", a.N}, {"rhs", a.rhs}, {"out", a.out}, {"tol", a.tol},
                       {"seed", a.seed}, {"max_newton", a.max_newton}, {"reference", a.reference}});
  const fs::path trace_path = with_suffix(out_path, ".trace.jsonl");
  try {
    m.input("rhs", a.rhs);
    const Field f = read_field(a.rhs);
    if (f.grid().n() != a.n || f.grid().N() != a.N)
      throw ValidationError("rhs grid (n=" + std::to_string(f.grid().n()) + ", N=" + std::to_string(f.grid().N()) +
                            ") does not match --n/--N");
    if (a.k < 1 || a.k > a.n) throw ParameterError("--k must lie in 1..n");
    SolveConfig cfg;
    cfg.newton_tol = a.tol;
    cfg.max_newton = a.max_newton;
    cfg.seed = a.seed;
    SolveResult res = [&] {
      try {
        return continuity_solve(f, a.k, cfg);
      } catch (const SolverError& e) {
        write_trace(trace_path, e.trace());
        m.output(trace_path);
        throw;
      }
    }();
    write_field(out_path, res.phi);
    m.output(out_path);
    m.output(payload_path(out_path));
    write_trace(trace_path, res.trace);
    m.output(trace_path);

    const Field resid = log_residual(res.phi, f, a.k);
    m.result()["residual_sup"] = resid.sup_norm();
    m.result()["cone_margin"] = cone_margin(res.phi, a.k);
    m.result()["stages"] = res.trace.stages;
    m.result()["iterations"] = res.trace.records.size();
    if (!a.reference.empty()) {
      m.input("reference", a.reference);
      const Field ref = project_mean_zero(read_field(a.reference));
      const Field diff = project_mean_zero(res.phi) - ref;
      m.result()["reference_sup_error"] = diff.sup_norm();
    }
    out << "converged: residual " << resid.sup_norm() << " in " << res.trace.stages << " stages\n";
    return m.finish(manifest_path, kOk, err);
  } catch (const std::exception& e) {
    return error_exit(e, m, manifest_path, err);
  }
}

struct MmsArgs {
  std::size_t n = 0, k = 0, N = 0;
  double amp = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  double min_margin = 0.5;
};

int cmd_mms(const MmsArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  const fs::path dir = a.out_dir;
  const fs::path manifest_path = c.manifest.empty() ? dir / "mms.manifest.json" : fs::path(c.manifest);
  Manifest m("mms", {{"n", a.n}, {"k", a.k}, {"N", a.N}, {"amp", a.amp}, {"seed", a.seed},
                     {"out_dir", a.out_dir}, {"min_margin", a.min_margin}});
  try {
    fs::create_directories(dir);
    if (a.k < 1 || a.k > a.n) throw ParameterError("--k must lie in 1..n");
    const TorusGrid grid(a.n, a.N);
    const Field phi = make_mms(grid, a.amp, a.seed);
    const double margin = cone_margin(phi, a.k);
    m.result()["cone_margin"] = margin;
    if (!(margin >= a.min_margin))
      throw ValidationError("amplitude too large: cone margin " + std::to_string(margin) + " < " +
                            std::to_string(a.min_margin));
    const Field f = apply_op(phi, a.k);
    m.result()["rhs_mean"] = mean(f);
    m.result()["rhs_min"] = f.min();
    write_field(dir / "phi_star.json", phi);
    write_field(dir / "rhs.json", f);
    for (const char* name : {"phi_star.json", "phi_star.f64", "rhs.json", "rhs.f64"}) m.output(dir / name);
    out << "cone margin " << margin << "\n";
    return m.finish(manifest_path, kOk, err);
  } catch (const std::exception& e) {
    return error_exit(e, m, manifest_path, err);
  }
}

struct PropsArgs {
  std::size_t n = 0, k = 0, samples = 10000;
  std::uint64_t seed = 0;
  std::string out = "-";
};

int cmd_props(const PropsArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  const fs::path manifest_path = !c.manifest.empty() ? fs::path(c.manifest)
                                 : a.out == "-"      ? fs::path("props.manifest.json")
                                                     : with_suffix(a.out, ".manifest.json");
  Manifest m("props", {{"n", a.n}, {"k", a.k}, {"samples", a.samples}, {"seed", a.seed}, {"out", a.out}});
  try {
    const PropsReport rep = run_props(a.n, a.k, a.samples, a.seed);
    json suites = json::object();
    for (const auto& s : rep.suites) {
      json j = {{"samples", s.samples}, {"worst_slack", s.worst_slack}, {"tolerance", s.tolerance}, {"pass", s.pass}};
      if (!s.note.empty()) j["note"] = s.note;
      suites[s.name] = std::move(j);
    }
    const json doc = {{"n", a.n}, {"k", a.k}, {"samples", a.samples}, {"seed", a.seed},
                      {"suites", suites}, {"pass", rep.all_pass()}};
    if (a.out == "-") {
      out << doc.dump(2) << "\n";
    } else {
      write_text(a.out, doc.dump(2) + "\n");
      m.output(a.out);
    }
    m.result()["pass"] = rep.all_pass();
    return m.finish(manifest_path, rep.all_pass() ? kOk : kMath, err);
  } catch (const std::exception& e) {
    return error_exit(e, m, manifest_path, err);
  }
}

struct IdentityArgs {
  std::string phi, psi, out = "-";
  std::size_t k = 0;
};

int cmd_identity(const IdentityArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  const fs::path manifest_path = !c.manifest.empty() ? fs::path(c.manifest)
                                 : a.out == "-"      ? fs::path("identity.manifest.json")
                                                     : with_suffix(a.out, ".manifest.json");
  Manifest m("identity", {{"phi", a.phi}, {"psi", a.psi}, {"k", a.k}, {"out", a.out}});
  try {
    m.input("phi", a.phi);
    m.input("psi", a.psi);
    const Field phi = read_field(a.phi);
    const Field psi = read_field(a.psi);
    if (!(phi.grid() == psi.grid())) throw ValidationError("phi and psi live on different grids");
    const EnergyIdentity e = energy_identity(phi, psi, a.k);
    double pointwise_min = 0.0;
    for (double v : e.min_integrand) pointwise_min = std::min(pointwise_min, v);
    const bool pass = pointwise_min >= -1e-10 && e.defect <= 1e-6;
    const json doc = {{"lhs", e.lhs},         {"terms", e.terms},   {"min_integrand", e.min_integrand},
                      {"pointwise_min", pointwise_min}, {"defect", e.defect}, {"pass", pass}};
    if (a.out == "-") {
      out << doc.dump(2) << "\n";
    } else {
      write_text(a.out, doc.dump(2) + "\n");
      m.output(a.out);
    }
    m.result() = doc;
    return m.finish(manifest_path, pass ? kOk : kMath, err);
  } catch (const std::exception& e) {
    return error_exit(e, m, manifest_path, err);
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Complex k-Hessian equations on the flat torus", "chess"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  Common common;
  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve S_k(I + Hess phi) = f by continuation and damped Newton");
  solve->add_option("--n", sa.n, "Complex dimension")->required();
  solve->add_option("--k", sa.k, "Hessian order")->required();
  solve->add_option("--N", sa.N, "Samples per real axis")->required();
  solve->add_option("--rhs", sa.rhs, "Right-hand side field (sidecar .json)")->required();
  solve->add_option("--out", sa.out, "Solution field (sidecar .json)")->required();
  solve->add_option("--tol", sa.tol, "Newton tolerance on the sup-norm log-residual");
  solve->add_option("--seed", sa.seed, "Random seed");
  solve->add_option("--max-newton", sa.max_newton, "Newton iteration cap per stage");
  solve->add_option("--reference", sa.reference, "Field to compare the solution against");
  add_common(solve, common);

  MmsArgs ma;
  auto* mms = app.add_subcommand("mms", "Generate a manufactured solution and its right-hand side");
  mms->add_option("--n", ma.n)->required();
  mms->add_option("--k", ma.k)->required();
  mms->add_option("--N", ma.N)->required();
  mms->add_option("--amp", ma.amp, "Amplitude bound of phi*")->required();
  mms->add_option("--seed", ma.seed);
  mms->add_option("--out-dir", ma.out_dir, "Directory for phi_star and rhs fields");
  mms->add_option("--min-margin", ma.min_margin, "Smallest accepted cone margin");
  add_common(mms, common);

  PropsArgs pa;
  auto* props = app.add_subcommand("props", "Run the randomized inequality suites");
  props->add_option("--n", pa.n)->required();
  props->add_option("--k", pa.k)->required();
  props->add_option("--samples", pa.samples);
  props->add_option("--seed", pa.seed);
  props->add_option("--out", pa.out, "Report path, '-' for stdout");
  add_common(props, common);

  IdentityArgs ia;
  auto* identity = app.add_subcommand("identity", "Evaluate the energy identity for a pair of potentials");
  identity->add_option("--phi", ia.phi)->required();
  identity->add_option("--psi", ia.psi)->required();
  identity->add_option("--k", ia.k)->required();
  identity->add_option("--out", ia.out, "Report path, '-' for stdout");
  add_common(identity, common);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    if (!app.get_subcommands().empty()) err << app.get_subcommands().front()->help();
    return kUsage;
  }

  apply_threads(common);
  if (solve->parsed()) return cmd_solve(sa, common, out, err);
  if (mms->parsed()) return cmd_mms(ma, common, out, err);
  if (props->parsed()) return cmd_props(pa, common, out, err);
  return cmd_identity(ia, common, out, err);
}

}  // namespace chess
