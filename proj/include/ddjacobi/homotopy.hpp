#pragma once

// Eigenpath tracking along A(t) = diag(A) + t * Omega(A), t in [0, 1].
//
// With Q(t_k) and Sigma(t_k) from the previous step, Q(t_k)^T A(t_{k+1}) Q(t_k)
// is nearly diagonal; each of its n eigenpairs is computed independently
// by the targeted solver, and the eigenvectors update Q.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <future>
#include <optional>
#include <string>
#include <vector>

#include "ddjacobi/diagnostics.hpp"
#include "ddjacobi/solver.hpp"
#include "ddjacobi/sym_matrix.hpp"

namespace ddjacobi {

struct TrackerConfig {
  double c = 1.0;  // step-size constant: s_k * ||Omega(A)||_F / gamma_hat_k = c
  std::size_t max_steps = 10000;
  SolveOptions solve{};  // m and want_vector are set per solve
  bool parallel = false;
  double gap_floor = 1e-14;
  std::size_t max_halvings = 10;
};

struct HomotopyStep {
  double t = 0.0;
  double s = 0.0;
  std::vector<double> sigma;
  double gamma_hat = 0.0;  // min relative gap of sigma
  std::vector<std::size_t> iters_per_eig;
  double orthogonality = 0.0;  // ||Q^T Q - I||_F after the step
};

struct HomotopyPath {
  std::vector<HomotopyStep> steps;
  Matrix final_q;
  std::size_t total_steps = 0;
  double avg_iters = 0.0;
};

/// s = min(1 - t, c * gamma_hat / omega_frob), or 1 - t when omega_frob == 0.
inline double step_length(double gamma_hat, double omega_frob, double c, double t,
                          double gap_floor = 1e-14) {
  if (!(omega_frob >= 0.0)) throw Error(Errc::InvalidArgument, "omega_frob must be >= 0");
  if (!(t >= 0.0 && t < 1.0)) throw Error(Errc::InvalidArgument, "t must lie in [0, 1)");
  if (!(c > 0.0)) throw Error(Errc::InvalidArgument, "c must be positive");
  if (omega_frob == 0.0) return 1.0 - t;
  if (!(gamma_hat > gap_floor))
    throw Error(Errc::CollapsedGap, "relative gap " + std::to_string(gamma_hat) +
                                        " at t=" + std::to_string(t) + " is below the floor");
  return std::min(1.0 - t, c * gamma_hat / omega_frob);
}

namespace detail {

/// Modified Gram-Schmidt, two passes, on the columns of u.
inline void reorthonormalize(Matrix& u) {
  const std::size_t n = u.rows();
  for (std::size_t j = 0; j < u.cols(); ++j)
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        double dot = 0.0;
        for (std::size_t r = 0; r < n; ++r) dot += u(r, i) * u(r, j);
        for (std::size_t r = 0; r < n; ++r) u(r, j) -= dot * u(r, i);
      }
      double norm = 0.0;
      for (std::size_t r = 0; r < n; ++r) norm += u(r, j) * u(r, j);
      norm = std::sqrt(norm);
      for (std::size_t r = 0; r < n; ++r) u(r, j) /= norm;
    }
}

/// Q^T (diag(A) + t Omega(A)) Q.
inline SymMatrix project(const SymMatrix& a, double t, const Matrix& q) {
  const std::size_t n = a.size();
  Matrix at(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) at(i, j) = i == j ? a(i, i) : t * a(i, j);
  const Matrix b = multiply(transpose(q), multiply(at, q));
  SymMatrix out(n);
  double* x = SymAccess::data(out);
  for (std::size_t i = 0; i < n; ++i) {
    x[i * n + i] = b(i, i);
    for (std::size_t j = 0; j < i; ++j) {
      const double v = 0.5 * (b(i, j) + b(j, i));
      x[i * n + j] = v;
      x[j * n + i] = v;
    }
  }
  return out;
}

}  // namespace detail

/// Tracks all n eigenpairs from t = 0 to t = 1. The diagonal of A must
/// have distinct entries.
inline HomotopyPath track(const SymMatrix& a, const TrackerConfig& cfg) {
  if (!(cfg.c > 0.0)) throw Error(Errc::InvalidArgument, "c must be positive");
  const std::size_t n = a.size();
  const double omega_frob = off_norm(a);

  HomotopyPath path;
  Matrix q = Matrix::identity(n);
  std::vector<double> sigma = a.diag();
  double t = 0.0;
  std::size_t total_iters = 0;
  std::size_t total_solves = 0;

  while (t < 1.0) {
    if (path.steps.size() >= cfg.max_steps)
      throw Error(Errc::StepLimit, "exceeded " + std::to_string(cfg.max_steps) + " steps");
    const double gamma_hat = n >= 2 ? min_relative_gap(sigma).gamma : 1.0;
    double s = step_length(gamma_hat, omega_frob, cfg.c, t, cfg.gap_floor);

    std::vector<EigenpairResult> sols;
    double t_next = 0.0;
    for (std::size_t halvings = 0;; ++halvings) {
      t_next = s >= 1.0 - t ? 1.0 : t + s;
      const SymMatrix b = detail::project(a, t_next, q);
      auto run = [&](std::size_t m) {
        SolveOptions o = cfg.solve;
        o.m = m;
        o.want_vector = true;
        o.record_history = false;
        return solve(b, o);
      };
      sols.clear();
      if (cfg.parallel) {
        std::vector<std::future<EigenpairResult>> fs;
        fs.reserve(n);
        for (std::size_t m = 0; m < n; ++m) fs.push_back(std::async(std::launch::async, run, m));
        for (auto& f : fs) sols.push_back(f.get());
      } else {
        for (std::size_t m = 0; m < n; ++m) sols.push_back(run(m));
      }
      const auto bad = std::find_if(sols.begin(), sols.end(), [](const EigenpairResult& r) {
        return r.status == SolveStatus::Stagnated;
      });
      if (bad == sols.end()) break;
      if (halvings == cfg.max_halvings)
        throw Error(Errc::TrackerStalled,
                    "solve stagnated at t=" + std::to_string(t_next) +
                        " for m=" + std::to_string(bad - sols.begin() + 1));
      s *= 0.5;
    }

    Matrix u(n, n);
    HomotopyStep step;
    step.t = t_next;
    step.s = t_next - t;
    step.sigma.resize(n);
    step.iters_per_eig.resize(n);
    for (std::size_t m = 0; m < n; ++m) {
      u.set_column(m, *sols[m].vector);
      step.sigma[m] = sols[m].lambda_hat;
      step.iters_per_eig[m] = sols[m].sweeps_used;
      total_iters += sols[m].sweeps_used;
    }
    total_solves += n;
    detail::reorthonormalize(u);
    q = multiply(q, u);
    step.orthogonality = orthogonality_error(q);
    step.gamma_hat = n >= 2 ? min_relative_gap(step.sigma).gamma : 1.0;
    sigma = step.sigma;
    t = t_next;
    path.steps.push_back(std::move(step));
  }

  path.final_q = std::move(q);
  path.total_steps = path.steps.size();
  path.avg_iters =
      total_solves == 0 ? 0.0 : static_cast<double>(total_iters) / static_cast<double>(total_solves);
  return path;
}

}  // namespace ddjacobi
