#pragma once

// Targeted Jacobi iteration for a single eigenpair.
//
// After a one-time stable sort of the diagonal, every sweep applies up to
// n-1 plane rotations, all in planes (k, m): k = 0..m-1 ascending, then
// k = n-1..m+1 descending. Each rotation annihilates a(m,k) and keeps the
// diagonal ordered, so a(m,m) converges to the m-th smallest eigenvalue
// for sufficiently dominant inputs. One sweep costs O(n^2).

#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "ddjacobi/rotation.hpp"
#include "ddjacobi/sym_matrix.hpp"

namespace ddjacobi {

enum class SolveStatus { Converged, ToleranceFloor, MaxSweeps, Stagnated };

constexpr std::string_view to_string(SolveStatus s) noexcept {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::ToleranceFloor: return "ToleranceFloor";
    case SolveStatus::MaxSweeps: return "MaxSweeps";
    case SolveStatus::Stagnated: return "Stagnated";
  }
  return "Unknown";
}

struct SolveOptions {
  std::size_t m = 0;                       // 0-based rank of the target, after the diagonal sort
  double tol = 0.0;                        // skip rotations with |a(m,k)| < tol
  double stop_rel = std::sqrt(kEps);       // stop once off(A(m,:)) <= stop_rel * ||A0||_F
  std::size_t max_sweeps = 200;
  bool want_vector = false;
  bool record_history = true;
  std::size_t stagnation_window = 10;      // 0 disables stagnation detection
  double stagnation_decrease = 1e-3;       // required relative decrease over the window
};

/// State at the end of a sweep (sweep 0 is the sorted input).
struct SweepRecord {
  std::size_t sweep = 0;
  double off_row_m = 0.0;
  double off_total = 0.0;
  double a_mm = 0.0;
  std::optional<double> alpha;           // off(H); absent when a diagonal entry is zero
  std::optional<double> off_row_scaled;  // off(H(m,:)); same availability as alpha
  std::size_t rotations_applied = 0;
  double annihilated_sq = 0.0;           // sum of squares of the entries annihilated in the sweep
};

struct EigenpairResult {
  double lambda_hat = 0.0;
  std::optional<std::vector<double>> vector;  // original (pre-sort) coordinates
  SolveStatus status = SolveStatus::MaxSweeps;
  std::size_t sweeps_used = 0;
  std::vector<SweepRecord> history;
  Permutation permutation;
  double off_row_m = 0.0;  // final off(A(m,:))
  double frob0 = 0.0;      // ||A0||_F
};

/// Flips the sign so the largest-magnitude entry is positive (ties: lowest index).
inline void normalize_sign(std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (!v.empty() && v[best] < 0.0)
    for (double& x : v) x = -x;
}

namespace detail {

inline std::vector<std::size_t> sweep_order(std::size_t n, std::size_t m) {
  std::vector<std::size_t> ks;
  ks.reserve(n - 1);
  for (std::size_t k = 0; k < m; ++k) ks.push_back(k);
  for (std::size_t k = n; k-- > m + 1;) ks.push_back(k);
  return ks;
}

template <class OnRotate>
std::size_t sweep_with(SymMatrix& a, std::size_t m, double tol, double* annihilated_sq,
                       OnRotate&& on_rotate) {
  a.check_index(m);
  const std::vector<std::size_t> ks = sweep_order(a.size(), m);
  double removed = 0.0;
  const std::size_t count = rotate_against(
      a, m, ks,
      [&](double amk) {
        if (amk == 0.0 || std::abs(amk) < tol) return false;
        removed += amk * amk;
        return true;
      },
      on_rotate);
  if (annihilated_sq != nullptr) *annihilated_sq += removed;
  return count;
}

}  // namespace detail

/// One cycle of the iteration on a matrix whose diagonal is already sorted.
/// Returns the number of rotations applied; adds the squares of the
/// annihilated entries to *annihilated_sq when given. When v is given it
/// is updated as V <- V * Q for every rotation Q.
inline std::size_t sweep(SymMatrix& a, std::size_t m, double tol, Matrix* v = nullptr,
                         double* annihilated_sq = nullptr) {
  const std::size_t n = a.size();
  if (v != nullptr && (v->rows() != n || v->cols() != n))
    throw Error(Errc::InvalidArgument, "accumulator must be n x n");
  return detail::sweep_with(a, m, tol, annihilated_sq,
                            [&](std::size_t p, std::size_t q, const Schur2Result& sr) {
                              if (v != nullptr) apply_right(*v, p, q, sr.u);
                            });
}

namespace detail {

inline bool has_zero_diagonal(const SymMatrix& a) noexcept {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a(i, i) == 0.0) return true;
  return false;
}

inline SweepRecord make_record(const SymMatrix& a, std::size_t m, std::size_t sweep_index,
                               std::size_t rotations, double annihilated_sq) {
  SweepRecord r;
  r.sweep = sweep_index;
  r.off_row_m = off_row(a, m);
  r.off_total = off_norm(a);
  r.a_mm = a(m, m);
  r.rotations_applied = rotations;
  r.annihilated_sq = annihilated_sq;
  if (!has_zero_diagonal(a)) {
    r.alpha = off_norm(scaled(a).matrix());
    r.off_row_scaled = scaled_off_row(a, m);
  }
  return r;
}

inline void validate(const SymMatrix& a, const SolveOptions& o) {
  if (o.m >= a.size())
    throw Error(Errc::InvalidOptions, "target rank m=" + std::to_string(o.m) +
                                          " out of range for order " + std::to_string(a.size()));
  if (!(o.tol >= 0.0) || !std::isfinite(o.tol))
    throw Error(Errc::InvalidOptions, "tol must be finite and >= 0");
  if (!(o.stop_rel >= 0.0) || !std::isfinite(o.stop_rel))
    throw Error(Errc::InvalidOptions, "stop_rel must be finite and >= 0");
  if (o.max_sweeps < 1) throw Error(Errc::InvalidOptions, "max_sweeps must be >= 1");
  if (!(o.stagnation_decrease > 0.0 && o.stagnation_decrease < 1.0))
    throw Error(Errc::InvalidOptions, "stagnation_decrease must lie in (0, 1)");
}

}  // namespace detail

/// Approximates the (m+1)-th smallest eigenvalue of a and, optionally, its
/// eigenvector. The input is not modified.
inline EigenpairResult solve(const SymMatrix& a, const SolveOptions& opts) {
  detail::validate(a, opts);
  const std::size_t n = a.size();
  const std::size_t m = opts.m;

  auto [work, perm] = sort_by_diagonal(a);
  EigenpairResult res;
  res.permutation = std::move(perm);
  res.frob0 = frob_norm(a);
  const double stop = opts.stop_rel * res.frob0;

  // Accumulated transposed so each rotation touches two contiguous rows.
  std::optional<Matrix> vt;
  if (opts.want_vector) vt = Matrix::identity(n);

  std::vector<double> row_history{off_row(work, m)};
  if (opts.record_history) res.history.push_back(detail::make_record(work, m, 0, 0, 0.0));

  std::optional<SolveStatus> status;
  if (row_history.back() <= stop) status = SolveStatus::Converged;

  while (!status) {
    if (res.sweeps_used >= opts.max_sweeps) {
      status = SolveStatus::MaxSweeps;
      break;
    }
    double removed = 0.0;
    const std::size_t rotations =
        detail::sweep_with(work, m, opts.tol, &removed,
                           [&](std::size_t p, std::size_t q, const Schur2Result& sr) {
                             if (vt) detail::rotate_rows(*vt, p, q, sr.u);
                           });
    ++res.sweeps_used;
    row_history.push_back(off_row(work, m));
    if (opts.record_history)
      res.history.push_back(detail::make_record(work, m, res.sweeps_used, rotations, removed));

    const double now = row_history.back();
    const std::size_t w = opts.stagnation_window;
    if (now <= stop) {
      status = SolveStatus::Converged;
    } else if (rotations == 0) {
      status = SolveStatus::ToleranceFloor;
    } else if (w > 0 && res.sweeps_used >= w &&
               now > (1.0 - opts.stagnation_decrease) * row_history[res.sweeps_used - w]) {
      status = SolveStatus::Stagnated;
    }
  }

  res.status = *status;
  res.lambda_hat = work(m, m);
  res.off_row_m = row_history.back();
  if (vt) {
    const auto row = vt->data().subspan(m * n, n);
    std::vector<double> col = res.permutation.scatter(std::vector<double>(row.begin(), row.end()));
    double norm = 0.0;
    for (double x : col) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : col) x /= norm;
    normalize_sign(col);
    res.vector = std::move(col);
  }
  return res;
}

inline const std::vector<double>& eigenvector(const EigenpairResult& r) {
  if (!r.vector) throw Error(Errc::VectorNotAccumulated, "solve was run without want_vector");
  return *r.vector;
}

}  // namespace ddjacobi
