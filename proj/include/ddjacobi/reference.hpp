#pragma once

// Classical cyclic-by-rows Jacobi eigendecomposition. Slow (O(n^3) per
// sweep) but unconditionally convergent; the library uses it as the
// correctness oracle and as the exact spectrum source for diagnostics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "ddjacobi/rotation.hpp"
#include "ddjacobi/solver.hpp"
#include "ddjacobi/sym_matrix.hpp"

namespace ddjacobi {

struct EigDecomposition {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column j pairs with values[j]; empty in values-only mode
};

/// Rotates every (p, q), p < q, with |a_pq| >= threshold * ||A0||_F / n
/// until off(A) <= sqrt(eps) * ||A0||_F or no entry passes the gate, then runs one more sweep to
/// polish the eigenvectors (quadratic convergence takes the residual from
/// O(sqrt(eps)) to O(eps)). With want_vectors = false no accumulator is kept.
inline EigDecomposition full_jacobi(const SymMatrix& a0, double threshold = 0.0,
                                    std::size_t max_sweeps = 60, bool want_vectors = true) {
  const std::size_t n = a0.size();
  const double frob0 = frob_norm(a0);
  const double gate = threshold * frob0 / static_cast<double>(n);
  const double stop = std::sqrt(kEps) * frob0;

  SymMatrix a = a0;
  // Transposed accumulator: row j of w is column j of V.
  Matrix w = want_vectors ? Matrix::identity(n) : Matrix();
  std::vector<std::size_t> ks(n);
  std::iota(ks.begin(), ks.end(), std::size_t{0});
  auto cycle = [&] {
    std::size_t applied = 0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      applied += detail::rotate_against(
          a, p, std::span<const std::size_t>(ks).subspan(p + 1),
          [&](double apq) { return apq != 0.0 && std::abs(apq) >= gate; },
          [&](std::size_t i, std::size_t j, const Schur2Result& sr) {
            if (want_vectors) detail::rotate_rows(w, i, j, sr.u);
          });
    return applied;
  };

  std::size_t sweeps = 0;
  while (off_norm(a) > stop) {
    if (sweeps == max_sweeps)
      throw Error(Errc::NoConvergence,
                  "cyclic Jacobi did not converge in " + std::to_string(max_sweeps) + " sweeps");
    ++sweeps;
    if (cycle() == 0) break;  // everything left is below the gate
  }
  cycle();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  EigDecomposition out;
  out.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) out.values[j] = a(order[j], order[j]);
  if (!want_vectors) return out;
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const auto row = w.data().subspan(order[j] * n, n);
    std::vector<double> col(row.begin(), row.end());
    normalize_sign(col);
    out.vectors.set_column(j, col);
  }
  return out;
}

}  // namespace ddjacobi
