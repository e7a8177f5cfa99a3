#pragma once

// 2x2 symmetric Schur decomposition and plane-rotation updates.
//
// A rotation (c, s) stands for U = [[c, s], [-s, c]] acting as
// B <- U^T B U in the (p, q) plane. The tangent t = s/c satisfies
// tan(2 phi) = 2 a_pq / (a_qq - a_pp) with phi in [-pi/4, pi/4], so the
// updated diagonal is (a_pp - t a_pq, a_qq + t a_pq).

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

#include "ddjacobi/sym_matrix.hpp"

namespace ddjacobi {

struct Rotation2 {
  double c = 1.0;
  double s = 0.0;

  [[nodiscard]] double tangent() const noexcept { return s / c; }
};

/// 2x2 orthogonal factor, row-major: {u00, u01, u10, u11}.
using Orth2 = std::array<double, 4>;

inline constexpr Orth2 kIdentity2{1.0, 0.0, 0.0, 1.0};

inline Orth2 to_orth2(Rotation2 r) noexcept { return {r.c, r.s, -r.s, r.c}; }

struct Schur2Result {
  Orth2 u = kIdentity2;
  std::array<double, 2> t{};  // t[0] <= t[1]
  bool swapped = false;       // columns of u were exchanged to order t
};

/// Rotation annihilating a_pq, via the Rutishauser tangent form. Ties
/// (a_pp == a_qq) take phi = +pi/4 scaled by sign(a_pq).
inline Rotation2 jacobi_angle(double a_pp, double a_pq, double a_qq) noexcept {
  if (a_pq == 0.0) return {};
  const double theta = (a_qq - a_pp) / (2.0 * a_pq);
  double t = 1.0;
  if (theta != 0.0) {
    t = 1.0 / (std::abs(theta) + std::hypot(1.0, theta));
    if (theta < 0.0) t = -t;
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c};
}

/// Schur form of [[b11, b12], [b12, b22]] with the diagonal of T ascending.
inline Schur2Result schur2(double b11, double b12, double b22) noexcept {
  const Rotation2 r = jacobi_angle(b11, b12, b22);
  const double tan_phi = r.tangent();
  Schur2Result out;
  out.u = to_orth2(r);
  out.t = {b11 - tan_phi * b12, b22 + tan_phi * b12};
  if (out.t[0] > out.t[1]) {
    out.u = {out.u[1], out.u[0], out.u[3], out.u[2]};
    out.t = {out.t[1], out.t[0]};
    out.swapped = true;
  }
  return out;
}

namespace detail {
inline void check_plane(std::size_t n, std::size_t p, std::size_t q) {
  if (p >= n || q >= n) throw Error(Errc::IndexOutOfRange, "rotation plane index out of range");
  if (p == q) throw Error(Errc::InvalidArgument, "rotation plane needs p != q");
}
}  // namespace detail

/// A <- Q^T A Q where Q embeds u in rows/columns (p, q). Only rows and
/// columns p and q change; each mirrored pair is written from one value.
inline void apply_two_sided(SymMatrix& a, std::size_t p, std::size_t q, const Orth2& u) {
  const std::size_t n = a.size();
  detail::check_plane(n, p, q);
  double* x = detail::SymAccess::data(a);
  const double u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];
  double* rp = x + p * n;
  double* rq = x + q * n;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == p || j == q) continue;
    const double ap = rp[j];
    const double aq = rq[j];
    const double np = u00 * ap + u10 * aq;
    const double nq = u01 * ap + u11 * aq;
    rp[j] = np;
    rq[j] = nq;
    x[j * n + p] = np;
    x[j * n + q] = nq;
  }
  const double app = rp[p], apq = rp[q], aqq = rq[q];
  // (U^T B U) for the 2x2 block.
  const double b00 = u00 * app + u10 * apq;
  const double b01 = u00 * apq + u10 * aqq;
  const double b10 = u01 * app + u11 * apq;
  const double b11 = u01 * apq + u11 * aqq;
  rp[p] = b00 * u00 + b01 * u10;
  rq[q] = b10 * u01 + b11 * u11;
  const double off = b00 * u01 + b01 * u11;
  rp[q] = off;
  rq[p] = off;
}

/// V(:, [p, q]) <- V(:, [p, q]) * u.
inline void apply_right(Matrix& v, std::size_t p, std::size_t q, const Orth2& u) {
  detail::check_plane(v.cols(), p, q);
  for (std::size_t i = 0; i < v.rows(); ++i) {
    const double vp = v(i, p);
    const double vq = v(i, q);
    v(i, p) = vp * u[0] + vq * u[2];
    v(i, q) = vp * u[1] + vq * u[3];
  }
}

/// One Jacobi step in the (p, q) plane, p < q: computes the ordered Schur
/// factor of the 2x2 principal block, applies it two-sidedly and stores the
/// annihilated pair as exact zeros and the ordered eigenvalues on the
/// diagonal.
inline Schur2Result annihilate(SymMatrix& a, std::size_t p, std::size_t q) {
  const std::size_t n = a.size();
  detail::check_plane(n, p, q);
  const Schur2Result sr = schur2(a(p, p), a(p, q), a(q, q));
  apply_two_sided(a, p, q, sr.u);
  double* x = detail::SymAccess::data(a);
  x[p * n + p] = sr.t[0];
  x[q * n + q] = sr.t[1];
  x[p * n + q] = 0.0;
  x[q * n + p] = 0.0;
  return sr;
}

namespace detail {

/// Row form of apply_right for a transposed accumulator: W = V^T, so
/// columns p, q of V are rows p, q of W.
inline void rotate_rows(Matrix& w, std::size_t p, std::size_t q, const Orth2& u) {
  for (std::size_t j = 0; j < w.cols(); ++j) {
    const double wp = w(p, j);
    const double wq = w(q, j);
    w(p, j) = u[0] * wp + u[2] * wq;
    w(q, j) = u[1] * wp + u[3] * wq;
  }
}

inline constexpr std::size_t kMirrorBlock = 16;

/// Annihilates a(m, k) for each k in ks, in order, when gate(a(m, k)) holds,
/// with the same arithmetic as annihilate(a, min(k, m), max(k, m)).
/// Returns the number of rotations and calls on_rotate(p, q, schur) after
/// each one.
///
/// Writing the mirrored column entries immediately costs one strided,
/// cache-missing store per row per rotation. Instead row m stays current,
/// column writes are deferred for a block of consecutive k and flushed row
/// by row, and rows entering the block are patched from the rows already
/// rotated in it. Results are bit-identical to the immediate version.
template <class Gate, class OnRotate>
std::size_t rotate_against(SymMatrix& a, std::size_t m, std::span<const std::size_t> ks, Gate&& gate,
                           OnRotate&& on_rotate) {
  const std::size_t n = a.size();
  a.check_index(m);
  double* x = SymAccess::data(a);
  double* rm = x + m * n;
  std::array<std::size_t, kMirrorBlock> block{};
  std::size_t held = 0;
  std::size_t count = 0;

  auto flush = [&] {
    // Inside the block the later row is current.
    for (std::size_t i = 0; i < held; ++i)
      for (std::size_t l = i + 1; l < held; ++l) x[block[i] * n + block[l]] = x[block[l] * n + block[i]];
    for (std::size_t j = 0; j < n; ++j) {
      if (j == m) continue;
      double* rj = x + j * n;
      for (std::size_t i = 0; i < held; ++i) rj[block[i]] = x[block[i] * n + j];
    }
    held = 0;
  };

  for (const std::size_t k : ks) {
    check_plane(n, m, k);
    double* rk = x + k * n;
    for (std::size_t i = 0; i < held; ++i) rk[block[i]] = x[block[i] * n + k];

    if (gate(rm[k])) {
      const std::size_t p = k < m ? k : m;
      const std::size_t q = k < m ? m : k;
      double* rp = x + p * n;
      double* rq = x + q * n;
      const Schur2Result sr = schur2(rp[p], rm[k], rq[q]);
      const double u00 = sr.u[0], u01 = sr.u[1], u10 = sr.u[2], u11 = sr.u[3];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == p || j == q) continue;
        const double ap = rp[j];
        const double aq = rq[j];
        rp[j] = u00 * ap + u10 * aq;
        rq[j] = u01 * ap + u11 * aq;
      }
      rp[p] = sr.t[0];
      rq[q] = sr.t[1];
      rp[q] = 0.0;
      rq[p] = 0.0;
      ++count;
      on_rotate(p, q, sr);
    }

    block[held++] = k;
    if (held == kMirrorBlock) flush();
  }
  flush();
  for (std::size_t j = 0; j < n; ++j) x[j * n + m] = rm[j];
  return count;
}

}  // namespace detail

}  // namespace ddjacobi
