#pragma once

// Dense symmetric storage and the off-diagonal norm / diagonal scaling
// primitives the rest of the library is built on.
//
// Indices are 0-based throughout the C++ API. File formats and the CLI
// translate to 1-based indices at the boundary.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ddjacobi/error.hpp"

namespace ddjacobi {

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

namespace detail {
struct SymAccess;
}

/// Dense real symmetric matrix in full row-major storage.
///
/// Every mutation writes both triangles, so (i,j) and (j,i) are always
/// bit-identical. All entries are finite.
class SymMatrix {
 public:
  explicit SymMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {
    if (n == 0) throw Error(Errc::InvalidArgument, "matrix order must be >= 1");
  }

  static SymMatrix identity(std::size_t n) {
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.a_[i * n + i] = 1.0;
    return m;
  }

  static SymMatrix diagonal(std::span<const double> d) {
    SymMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m.set(i, i, d[i]);
    return m;
  }

  /// Builds from a row-major n*n buffer. Asymmetry up to
  /// 4*eps*||A||_F is averaged away; anything larger is rejected.
  static SymMatrix from_dense(std::size_t n, std::span<const double> values) {
    if (values.size() != n * n)
      throw Error(Errc::InvalidArgument, "expected " + std::to_string(n * n) + " values");
    double frob2 = 0.0;
    for (double v : values) {
      if (!std::isfinite(v)) throw Error(Errc::NonFinite, "non-finite matrix entry");
      frob2 += v * v;
    }
    const double slack = 4.0 * kEps * std::sqrt(frob2);
    SymMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      m.a_[i * n + i] = values[i * n + i];
      for (std::size_t j = 0; j < i; ++j) {
        const double lo = values[i * n + j];
        const double up = values[j * n + i];
        if (std::abs(lo - up) > slack)
          throw Error(Errc::AsymmetricInput, "entries (" + std::to_string(i + 1) + "," +
                                                 std::to_string(j + 1) + ") and transpose differ");
        const double v = lo == up ? lo : 0.5 * (lo + up);
        m.a_[i * n + j] = v;
        m.a_[j * n + i] = v;
      }
    }
    return m;
  }

  [[nodiscard]] std::size_t size() const noexcept { return n_; }

  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * n_ + j]; }

  [[nodiscard]] double at(std::size_t i, std::size_t j) const {
    check_index(i);
    check_index(j);
    return a_[i * n_ + j];
  }

  /// Sets a(i,j) and a(j,i).
  void set(std::size_t i, std::size_t j, double v) {
    check_index(i);
    check_index(j);
    if (!std::isfinite(v)) throw Error(Errc::NonFinite, "non-finite matrix entry");
    a_[i * n_ + j] = v;
    a_[j * n_ + i] = v;
  }

  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    check_index(i);
    return {a_.data() + i * n_, n_};
  }

  [[nodiscard]] std::span<const double> data() const noexcept { return a_; }

  [[nodiscard]] std::vector<double> diag() const {
    std::vector<double> d(n_);
    for (std::size_t i = 0; i < n_; ++i) d[i] = a_[i * n_ + i];
    return d;
  }

  void check_index(std::size_t i) const {
    if (i >= n_)
      throw Error(Errc::IndexOutOfRange,
                  "index " + std::to_string(i) + " out of range for order " + std::to_string(n_));
  }

  friend bool operator==(const SymMatrix&, const SymMatrix&) = default;

 private:
  friend struct detail::SymAccess;

  std::size_t n_;
  std::vector<double> a_;
};

namespace detail {
// Unchecked mutable access for the rotation kernels. Callers keep the
// two triangles equal.
struct SymAccess {
  static double* data(SymMatrix& m) noexcept { return m.a_.data(); }
};
}  // namespace detail

/// General dense square matrix, row-major. Used for eigenvector
/// accumulators and orthogonal factors.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return a_[i * cols_ + j]; }

  [[nodiscard]] std::vector<double> column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_column(std::size_t j, std::span<const double> c) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = c[i];
  }

  [[nodiscard]] std::span<const double> data() const noexcept { return a_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> a_;
};

inline Matrix multiply(const Matrix& x, const Matrix& y) {
  if (x.cols() != y.rows()) throw Error(Errc::InvalidArgument, "dimension mismatch");
  Matrix z(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t k = 0; k < x.cols(); ++k) {
      const double xik = x(i, k);
      if (xik == 0.0) continue;
      for (std::size_t j = 0; j < y.cols(); ++j) z(i, j) += xik * y(k, j);
    }
  return z;
}

inline Matrix transpose(const Matrix& x) {
  Matrix t(x.cols(), x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) t(j, i) = x(i, j);
  return t;
}

inline Matrix to_matrix(const SymMatrix& a) {
  Matrix m(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = a(i, j);
  return m;
}

/// ||X^T X - I||_F, the departure of X from having orthonormal columns.
inline double orthogonality_error(const Matrix& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.cols(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      double dot = 0.0;
      for (std::size_t r = 0; r < x.rows(); ++r) dot += x(r, i) * x(r, j);
      const double d = dot - (i == j ? 1.0 : 0.0);
      s += d * d;
    }
  return std::sqrt(s);
}

/// Bijection on {0..n-1}. map[i] is the source index placed at position i.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t v : map_) {
      if (v >= map_.size() || seen[v]) throw Error(Errc::InvalidArgument, "not a permutation");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    std::iota(m.begin(), m.end(), std::size_t{0});
    return Permutation(std::move(m));
  }

  [[nodiscard]] std::size_t size() const noexcept { return map_.size(); }
  std::size_t operator[](std::size_t i) const noexcept { return map_[i]; }
  [[nodiscard]] std::span<const std::size_t> map() const noexcept { return map_; }

  [[nodiscard]] std::vector<std::size_t> one_based() const {
    std::vector<std::size_t> out(map_);
    for (auto& v : out) ++v;
    return out;
  }

  [[nodiscard]] Permutation inverse() const {
    std::vector<std::size_t> inv(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
    return Permutation(std::move(inv));
  }

  /// (this ∘ other)[i] = other[this[i]]: apply this selection, then other's.
  [[nodiscard]] Permutation compose(const Permutation& other) const {
    std::vector<std::size_t> out(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) out[i] = other.map_[map_[i]];
    return Permutation(std::move(out));
  }

  [[nodiscard]] bool is_identity() const noexcept {
    for (std::size_t i = 0; i < map_.size(); ++i)
      if (map_[i] != i) return false;
    return true;
  }

  /// B = A(p,p), i.e. B(i,j) = A(map[i], map[j]).
  [[nodiscard]] SymMatrix apply(const SymMatrix& a) const {
    const std::size_t n = a.size();
    if (n != map_.size()) throw Error(Errc::InvalidArgument, "permutation size mismatch");
    SymMatrix b(n);
    double* out = detail::SymAccess::data(b);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] = a(map_[i], map_[j]);
    return b;
  }

  /// Maps a vector expressed in permuted coordinates back: x[map[i]] = w[i].
  [[nodiscard]] std::vector<double> scatter(std::span<const double> w) const {
    std::vector<double> x(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) x[map_[i]] = w[i];
    return x;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> map_;
};

/// H = |D|^{-1/2} A |D|^{-1/2}. The diagonal of H is sign(a_ii).
class ScaledView {
 public:
  explicit ScaledView(SymMatrix h) : h_(std::move(h)) {}
  [[nodiscard]] const SymMatrix& matrix() const noexcept { return h_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return h_(i, j); }
  [[nodiscard]] std::size_t size() const noexcept { return h_.size(); }

 private:
  SymMatrix h_;
};

inline double frob_norm(const SymMatrix& a) noexcept {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return std::sqrt(s);
}

inline double off_norm(const SymMatrix& a) noexcept {
  const std::size_t n = a.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

inline double off_row(const SymMatrix& a, std::size_t i) {
  a.check_index(i);
  double s = 0.0;
  const auto r = a.row(i);
  for (std::size_t j = 0; j < r.size(); ++j)
    if (j != i) s += r[j] * r[j];
  return std::sqrt(s);
}

inline void require_nonzero_diagonal(const SymMatrix& a) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a(i, i) == 0.0)
      throw Error(Errc::ZeroDiagonal, "diagonal entry " + std::to_string(i + 1) + " is zero");
}

inline ScaledView scaled(const SymMatrix& a) {
  require_nonzero_diagonal(a);
  const std::size_t n = a.size();
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = std::sqrt(std::abs(a(i, i)));
  SymMatrix h(n);
  double* out = detail::SymAccess::data(h);
  for (std::size_t i = 0; i < n; ++i) {
    out[i * n + i] = a(i, i) > 0.0 ? 1.0 : -1.0;
    for (std::size_t j = 0; j < i; ++j) {
      const double v = a(i, j) / (r[i] * r[j]);
      out[i * n + j] = v;
      out[j * n + i] = v;
    }
  }
  return ScaledView(std::move(h));
}

/// off(H(i,:)) without forming H. Requires nonzero diagonal.
inline double scaled_off_row(const SymMatrix& a, std::size_t i) {
  a.check_index(i);
  require_nonzero_diagonal(a);
  double s = 0.0;
  const double aii = std::abs(a(i, i));
  for (std::size_t j = 0; j < a.size(); ++j)
    if (j != i) s += a(i, j) * a(i, j) / (aii * std::abs(a(j, j)));
  return std::sqrt(s);
}

inline SymMatrix omega(const SymMatrix& a) {
  SymMatrix o = a;
  double* out = detail::SymAccess::data(o);
  for (std::size_t i = 0; i < a.size(); ++i) out[i * a.size() + i] = 0.0;
  return o;
}

/// Stable ascending sort of the diagonal; returns A(p,p) and p.
inline std::pair<SymMatrix, Permutation> sort_by_diagonal(const SymMatrix& a) {
  std::vector<std::size_t> p(a.size());
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::stable_sort(p.begin(), p.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
  Permutation perm(std::move(p));
  return {perm.apply(a), std::move(perm)};
}

}  // namespace ddjacobi
