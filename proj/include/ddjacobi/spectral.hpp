#pragma once

// Two-way spectral clustering: Gaussian similarity, normalized Laplacian,
// and a sign split of the Fiedler vector computed by the targeted solver.

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ddjacobi/solver.hpp"
#include "ddjacobi/sym_matrix.hpp"

namespace ddjacobi {

/// n points in R^d, row-major.
class PointCloud {
 public:
  PointCloud(std::size_t n, std::size_t d, std::vector<double> coords)
      : n_(n), d_(d), x_(std::move(coords)) {
    if (n < 2 || d < 1) throw Error(Errc::InvalidArgument, "point cloud needs n >= 2 and d >= 1");
    if (x_.size() != n * d) throw Error(Errc::InvalidArgument, "coordinate count mismatch");
    for (double v : x_)
      if (!std::isfinite(v)) throw Error(Errc::NonFinite, "non-finite coordinate");
  }

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] std::size_t dim() const noexcept { return d_; }
  double operator()(std::size_t i, std::size_t k) const noexcept { return x_[i * d_ + k]; }
  [[nodiscard]] std::span<const double> data() const noexcept { return x_; }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> x_;
};

/// w_ij = exp(-||x_i - x_j||_2 / (2 sigma^2)) for i != j, w_ii = 0. The
/// exponent uses the plain (unsquared) Euclidean distance.
inline SymMatrix gaussian_similarity(const PointCloud& pc, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(Errc::InvalidArgument, "sigma must be positive");
  const std::size_t n = pc.size();
  const double scale = 2.0 * sigma * sigma;
  SymMatrix w(n);
  double* out = detail::SymAccess::data(w);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) {
      double d2 = 0.0;
      for (std::size_t k = 0; k < pc.dim(); ++k) {
        const double diff = pc(i, k) - pc(j, k);
        d2 += diff * diff;
      }
      const double v = std::exp(-std::sqrt(d2) / scale);
      out[i * n + j] = v;
      out[j * n + i] = v;
    }
  return w;
}

inline std::vector<double> degrees(const SymMatrix& w) {
  std::vector<double> d(w.size(), 0.0);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (double v : w.row(i)) d[i] += v;
  return d;
}

/// L = D^{-1/2} (D - W) D^{-1/2}, D = diag(row sums of W).
inline SymMatrix normalized_laplacian(const SymMatrix& w) {
  const std::size_t n = w.size();
  for (double v : w.data())
    if (v < 0.0) throw Error(Errc::InvalidArgument, "weights must be nonnegative");
  const std::vector<double> d = degrees(w);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(d[i] > 0.0))
      throw Error(Errc::IsolatedVertex, "vertex " + std::to_string(i + 1) + " has zero degree");
    r[i] = 1.0 / std::sqrt(d[i]);
  }
  SymMatrix l(n);
  double* out = detail::SymAccess::data(l);
  for (std::size_t i = 0; i < n; ++i) {
    out[i * n + i] = (d[i] - w(i, i)) * r[i] * r[i];
    for (std::size_t j = 0; j < i; ++j) {
      const double v = -w(i, j) * r[i] * r[j];
      out[i * n + j] = v;
      out[j * n + i] = v;
    }
  }
  return l;
}

struct ClusterResult {
  double lambda2 = 0.0;
  std::vector<double> fiedler;
  std::vector<int> labels;  // 0 where fiedler < 0, else 1
  SolveStatus solve_status = SolveStatus::MaxSweeps;
  std::size_t sweeps = 0;
};

inline std::vector<int> sign_labels(std::span<const double> v) {
  std::vector<int> labels(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) labels[i] = v[i] < 0.0 ? 0 : 1;
  return labels;
}

/// Solves for the second-smallest eigenpair of L and splits by sign. A
/// non-converged solve is reported through solve_status, not thrown.
inline ClusterResult fiedler_partition(const SymMatrix& l, SolveOptions opts = {}) {
  if (l.size() < 2) throw Error(Errc::InvalidArgument, "need at least two vertices");
  opts.m = 1;
  opts.want_vector = true;
  EigenpairResult res = solve(l, opts);
  ClusterResult out;
  out.lambda2 = res.lambda_hat;
  out.fiedler = std::move(*res.vector);
  out.labels = sign_labels(out.fiedler);
  out.solve_status = res.status;
  out.sweeps = res.sweeps_used;
  return out;
}

}  // namespace ddjacobi
