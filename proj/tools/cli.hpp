#pragma once

// Command-line front end. `run` is separate from main so the test suite
// can drive every subcommand in-process.
//
// stdout carries machine-parseable key=value lines; human-readable notes
// go to stderr. Exit codes: 0 converged/success, 2 tolerance floor,
// 3 max sweeps, 4 stagnated or tracker stalled, 64 usage, 65 data error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ddjacobi/ddjacobi.hpp"

namespace ddjacobi::cli {

enum ExitCode : int {
  kOk = 0,
  kToleranceFloor = 2,
  kMaxSweeps = 3,
  kStagnated = 4,
  kUsage = 64,
  kDataError = 65,
};

inline int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return kOk;
    case SolveStatus::ToleranceFloor: return kToleranceFloor;
    case SolveStatus::MaxSweeps: return kMaxSweeps;
    case SolveStatus::Stagnated: return kStagnated;
  }
  return kDataError;
}

inline int exit_code(Errc e) {
  switch (e) {
    case Errc::InvalidArgument:
    case Errc::InvalidOptions:
    case Errc::IndexOutOfRange: return kUsage;
    case Errc::TrackerStalled: return kStagnated;
    case Errc::StepLimit:
    case Errc::NoConvergence: return kMaxSweeps;
    default: return kDataError;
  }
}

namespace detail {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string num(double v) { return io::format_double(v); }

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += num(v[i]);
  }
  return s;
}

inline std::size_t target_index(std::size_t m1, const SymMatrix& a) {
  if (m1 < 1 || m1 > a.size())
    throw UsageError("--m must lie in [1, " + std::to_string(a.size()) + "]");
  return m1 - 1;
}

struct EigArgs {
  std::string input;
  std::size_t m = 0;
  double tol = 0.0;
  double stop_rel = std::sqrt(kEps);
  std::size_t max_sweeps = 200;
  bool vector = false;
  std::string history;
  bool ref = false;
};

inline int cmd_eig(const EigArgs& args, std::ostream& out, std::ostream& err) {
  const SymMatrix a = io::read_matrix(args.input);
  SolveOptions o;
  o.m = target_index(args.m, a);
  o.tol = args.tol;
  o.stop_rel = args.stop_rel;
  o.max_sweeps = args.max_sweeps;
  o.want_vector = args.vector;
  o.record_history = !args.history.empty();
  const EigenpairResult r = solve(a, o);

  out << "lambda_hat=" << num(r.lambda_hat) << '\n';
  out << "status=" << to_string(r.status) << '\n';
  out << "sweeps=" << r.sweeps_used << '\n';
  out << "off_row_m=" << num(r.off_row_m) << '\n';
  std::optional<double> ref;
  if (args.ref) {
    ref = full_jacobi(a, 0.0, 60, false).values[o.m];
    out << "lambda_ref=" << num(*ref) << '\n';
    out << "err_vs_ref=" << num(std::abs(r.lambda_hat - *ref)) << '\n';
  }
  if (args.vector) out << "vector=" << join(eigenvector(r)) << '\n';
  if (!args.history.empty()) {
    io::write_history_csv(args.history, io::history_rows(r, ref));
    err << "history written to " << args.history << '\n';
  }
  return exit_code(r.status);
}

inline int cmd_full(const std::string& input, const std::string& out_path, std::ostream& out) {
  const SymMatrix a = io::read_matrix(input);
  const EigDecomposition d = full_jacobi(a, 0.0, 60, false);
  out << "n=" << a.size() << '\n';
  out << "values=" << join(d.values) << '\n';
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw Error(Errc::IoError, "cannot write " + out_path);
    f << "index,value\n";
    for (std::size_t i = 0; i < d.values.size(); ++i) f << i + 1 << ',' << num(d.values[i]) << '\n';
  }
  return kOk;
}

struct ClusterArgs {
  std::string points;
  std::string weights;
  double sigma = 10.0;
  std::string labels;
  std::string history;
  bool gap = false;
  double stop_rel = std::sqrt(kEps);
  std::size_t max_sweeps = 200;
};

inline int cmd_cluster(const ClusterArgs& args, std::ostream& out, std::ostream& err) {
  if (!(args.sigma > 0.0)) throw UsageError("--sigma must be positive");
  const SymMatrix w = args.points.empty()
                          ? io::read_matrix(args.weights)
                          : gaussian_similarity(io::read_points_csv(args.points), args.sigma);
  const SymMatrix l = normalized_laplacian(w);
  SolveOptions o;
  o.stop_rel = args.stop_rel;
  o.max_sweeps = args.max_sweeps;
  o.record_history = !args.history.empty();
  o.m = 1;
  o.want_vector = true;
  const EigenpairResult r = solve(l, o);
  const std::vector<double>& fiedler = eigenvector(r);
  const std::vector<int> labels = sign_labels(fiedler);
  std::size_t ones = 0;
  for (int v : labels) ones += v;

  out << "lambda2=" << num(r.lambda_hat) << '\n';
  out << "status=" << to_string(r.status) << '\n';
  out << "sweeps=" << r.sweeps_used << '\n';
  out << "cluster0=" << labels.size() - ones << '\n';
  out << "cluster1=" << ones << '\n';
  std::optional<double> ref;
  if (args.gap) {
    const auto spectrum = full_jacobi(l, 0.0, 60, false).values;
    const GapSet g = min_relative_gap(spectrum);
    ref = spectrum[1];
    out << "gamma_m=" << num(g.gamma_j[1]) << '\n';
    out << "err_vs_ref=" << num(std::abs(r.lambda_hat - *ref)) << '\n';
  }
  if (!args.labels.empty()) {
    std::ofstream f(args.labels);
    if (!f) throw Error(Errc::IoError, "cannot write " + args.labels);
    f << "index,label,fiedler_entry\n";
    for (std::size_t i = 0; i < labels.size(); ++i)
      f << i + 1 << ',' << labels[i] << ',' << num(fiedler[i]) << '\n';
    err << "labels written to " << args.labels << '\n';
  }
  if (!args.history.empty()) io::write_history_csv(args.history, io::history_rows(r, ref));
  return exit_code(r.status);
}

struct TrackArgs {
  std::string input;
  double c = 1.0;
  std::string path;
  bool parallel = false;
  std::size_t max_steps = 10000;
};

inline int cmd_track(const TrackArgs& args, std::ostream& out, std::ostream& err) {
  if (!(args.c > 0.0)) throw UsageError("--c must be positive");
  const SymMatrix a = io::read_matrix(args.input);
  TrackerConfig cfg;
  cfg.c = args.c;
  cfg.parallel = args.parallel;
  cfg.max_steps = args.max_steps;
  const HomotopyPath p = track(a, cfg);

  double max_orth = 0.0;
  for (const auto& s : p.steps) max_orth = std::max(max_orth, s.orthogonality);
  out << "steps=" << p.total_steps << '\n';
  out << "avg_iters=" << num(p.avg_iters) << '\n';
  out << "max_orthogonality_error=" << num(max_orth) << '\n';
  out << "values=" << join(p.steps.back().sigma) << '\n';
  if (!args.path.empty()) {
    std::ofstream f(args.path);
    if (!f) throw Error(Errc::IoError, "cannot write " + args.path);
    f << "t,s,gamma_hat,avg_iters";
    for (std::size_t i = 0; i < a.size(); ++i) f << ",sigma_" << i + 1;
    f << '\n';
    for (const auto& s : p.steps) {
      double iters = 0.0;
      for (auto k : s.iters_per_eig) iters += static_cast<double>(k);
      iters /= static_cast<double>(s.iters_per_eig.size());
      f << num(s.t) << ',' << num(s.s) << ',' << num(s.gamma_hat) << ',' << num(iters);
      for (double v : s.sigma) f << ',' << num(v);
      f << '\n';
    }
    err << "path written to " << args.path << '\n';
  }
  return kOk;
}

struct GenArgs {
  std::string kind;
  std::size_t n = 0;
  double alpha = 0.005;
  std::uint64_t seed = 1;
  std::string out;
};

inline int cmd_gen(const GenArgs& args, std::ostream& out) {
  SymMatrix a = [&] {
    if (args.kind == "example1") return io::gen_example1();
    if (args.kind == "drk1") {
      if (args.n < 2) throw UsageError("--n >= 2 required for drk1");
      return io::gen_diag_rank1(args.n);
    }
    if (args.n < 2) throw UsageError("--n >= 2 required for random-dd");
    return io::gen_random_dd(args.n, args.alpha, args.seed);
  }();
  io::write_matrix_market(args.out, a);
  out << "n=" << a.size() << '\n';
  out << "out=" << args.out << '\n';
  return kOk;
}

inline int cmd_diagnose(const std::string& input, std::size_t m1, bool exact, std::ostream& out,
                        std::ostream& err) {
  const SymMatrix a = io::read_matrix(input);
  const std::size_t m = target_index(m1, a);
  const DiagnosticsReport r = diagnose(a, m, exact ? GapMode::Exact : GapMode::Estimated);
  out << "alpha0=" << num(r.alpha0) << '\n';
  if (r.gamma_hat) {
    out << "gamma_hat=" << num(*r.gamma_hat) << '\n';
    out << "foa_factor=" << num(*r.foa_factor) << '\n';
  } else {
    err << "note: diagonal entries coincide with a_mm; first-order factor undefined\n";
  }
  if (exact) {
    if (r.gamma) out << "gamma=" << num(*r.gamma) << '\n';
    if (r.gamma_m) out << "gamma_m=" << num(*r.gamma_m) << '\n';
    if (r.rho) out << "rho=" << num(*r.rho) << '\n';
    if (r.alpha_over_gamma) out << "alpha_over_gamma=" << num(*r.alpha_over_gamma) << '\n';
    out << "thm2_applicable=" << (r.thm2_applicable ? "true" : "false") << '\n';
    if (r.thm2_rate_bound) out << "thm2_rate_bound=" << num(*r.thm2_rate_bound) << '\n';
  }
  return kOk;
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Targeted Jacobi eigensolver for diagonally dominant symmetric matrices", "ddjacobi"};
  app.require_subcommand(1);

  detail::EigArgs eig;
  auto* c_eig = app.add_subcommand("eig", "Compute the m-th smallest eigenpair");
  c_eig->add_option("--input", eig.input, "Matrix Market or .csv matrix")->required()->check(CLI::ExistingFile);
  c_eig->add_option("--m", eig.m, "1-based target rank")->required()->check(CLI::PositiveNumber);
  c_eig->add_option("--tol", eig.tol, "Per-entry rotation threshold")->check(CLI::NonNegativeNumber);
  c_eig->add_option("--stop-rel", eig.stop_rel, "Stop when off(A(m,:)) <= stop_rel*||A||_F")
      ->check(CLI::NonNegativeNumber);
  c_eig->add_option("--max-sweeps", eig.max_sweeps)->check(CLI::PositiveNumber);
  c_eig->add_flag("--vector", eig.vector, "Print the unit eigenvector");
  c_eig->add_option("--history", eig.history, "Write per-sweep history CSV");
  c_eig->add_flag("--ref", eig.ref, "Compare against the full cyclic Jacobi oracle");

  std::string full_input, full_out;
  auto* c_full = app.add_subcommand("full", "Full eigendecomposition by cyclic Jacobi");
  c_full->add_option("--input", full_input)->required()->check(CLI::ExistingFile);
  c_full->add_option("--out", full_out, "Write eigenvalues CSV");

  detail::ClusterArgs cl;
  auto* c_cl = app.add_subcommand("cluster", "Two-way spectral clustering via the Fiedler vector");
  auto* o_points = c_cl->add_option("--points", cl.points, "Points CSV")->check(CLI::ExistingFile);
  auto* o_weights = c_cl->add_option("--weights", cl.weights, "Weight matrix")->check(CLI::ExistingFile);
  o_points->excludes(o_weights);
  c_cl->add_option("--sigma", cl.sigma, "Gaussian kernel width");
  c_cl->add_option("--labels", cl.labels, "Write labels CSV");
  c_cl->add_option("--history", cl.history, "Write per-sweep history CSV");
  c_cl->add_flag("--gap", cl.gap, "Report gamma_2 from the full oracle spectrum");
  c_cl->add_option("--stop-rel", cl.stop_rel)->check(CLI::NonNegativeNumber);
  c_cl->add_option("--max-sweeps", cl.max_sweeps)->check(CLI::PositiveNumber);

  detail::TrackArgs tr;
  auto* c_tr = app.add_subcommand("track", "Track all eigenpaths of diag(A) + t*Omega(A)");
  c_tr->add_option("--input", tr.input)->required()->check(CLI::ExistingFile);
  c_tr->add_option("--c", tr.c, "Step-size constant");
  c_tr->add_option("--path", tr.path, "Write per-step CSV");
  c_tr->add_flag("--parallel", tr.parallel, "Run the per-eigenpair solves concurrently");
  c_tr->add_option("--max-steps", tr.max_steps)->check(CLI::PositiveNumber);

  detail::GenArgs gen;
  auto* c_gen = app.add_subcommand("gen", "Write a generated test matrix");
  c_gen->add_option("--kind", gen.kind)->required()->check(CLI::IsMember({"example1", "drk1", "random-dd"}));
  c_gen->add_option("--n", gen.n);
  c_gen->add_option("--alpha", gen.alpha, "Target off(H) for random-dd");
  c_gen->add_option("--seed", gen.seed);
  c_gen->add_option("--out", gen.out)->required();

  std::string dg_input;
  std::size_t dg_m = 0;
  bool dg_exact = false;
  auto* c_dg = app.add_subcommand("diagnose", "Report alpha0, gaps and rate estimates");
  c_dg->add_option("--input", dg_input)->required()->check(CLI::ExistingFile);
  c_dg->add_option("--m", dg_m, "1-based target rank")->required()->check(CLI::PositiveNumber);
  c_dg->add_flag("--exact", dg_exact, "Use the oracle spectrum for gamma, gamma_m, rho");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (*c_eig) return detail::cmd_eig(eig, out, err);
    if (*c_full) return detail::cmd_full(full_input, full_out, out);
    if (*c_cl) {
      if (cl.points.empty() && cl.weights.empty())
        throw detail::UsageError("one of --points or --weights is required");
      return detail::cmd_cluster(cl, out, err);
    }
    if (*c_tr) return detail::cmd_track(tr, out, err);
    if (*c_gen) return detail::cmd_gen(gen, out);
    if (*c_dg) return detail::cmd_diagnose(dg_input, dg_m, dg_exact, out, err);
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code(e.code());
  }
  return kUsage;
}

}  // namespace ddjacobi::cli
