#pragma once

// Convergence quantities for the targeted iteration: relative spectral
// gaps, the scaled off-norm alpha, the linear-contraction bound for
// strongly dominant inputs, the first-order per-sweep reduction factor,
// the diagonal-to-eigenvalue error bound and empirical rate fitting.

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ddjacobi/reference.hpp"
#include "ddjacobi/solver.hpp"
#include "ddjacobi/sym_matrix.hpp"

namespace ddjacobi {

struct GapSet {
  double gamma = 0.0;
  std::vector<double> gamma_j;
};

/// gamma_j = min_{i != j} |l_i - l_j| / (|l_i| + |l_j|); a pair of zeros
/// contributes 0. Input order does not matter.
inline GapSet min_relative_gap(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) throw Error(Errc::SingleEigenvalue, "relative gap needs at least two eigenvalues");
  GapSet g;
  g.gamma_j.assign(n, std::numeric_limits<double>::infinity());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = j + 1; i < n; ++i) {
      const double den = std::abs(values[i]) + std::abs(values[j]);
      const double r = den == 0.0 ? 0.0 : std::abs(values[i] - values[j]) / den;
      g.gamma_j[i] = std::min(g.gamma_j[i], r);
      g.gamma_j[j] = std::min(g.gamma_j[j], r);
    }
  g.gamma = *std::min_element(g.gamma_j.begin(), g.gamma_j.end());
  return g;
}

inline double rel(double x, double y) {
  const double den = std::abs(x) + std::abs(y);
  if (den == 0.0) throw Error(Errc::BothZero, "rel(0, 0) is undefined");
  return std::abs(x - y) / den;
}

/// off(H) for the scaled matrix H = |D|^{-1/2} A |D|^{-1/2}.
inline double alpha(const SymMatrix& a) { return off_norm(scaled(a).matrix()); }

struct Thm2Bound {
  bool applicable = false;  // alpha0 <= min(1/n, gamma) / 11
  double rate = 0.0;        // 2.8 * 1.001 * alpha0 / gamma
  double bound = 0.0;       // rate^ell * alpha0
};

/// Bound on off(H(m,:)) after ell sweeps, valid when `applicable`.
inline Thm2Bound thm2_bound(double alpha0, double gamma, std::size_t n, std::size_t ell) {
  if (!(gamma > 0.0)) throw Error(Errc::InvalidArgument, "gamma must be positive");
  if (n < 3) throw Error(Errc::InvalidArgument, "bound requires n >= 3");
  if (ell < 1 || ell > n) throw Error(Errc::InvalidArgument, "ell must lie in [1, n]");
  Thm2Bound b;
  b.applicable = alpha0 <= std::min(1.0 / static_cast<double>(n), gamma) / 11.0;
  b.rate = 2.8 * 1.001 * alpha0 / gamma;
  b.bound = std::pow(b.rate, static_cast<double>(ell)) * alpha0;
  return b;
}

/// Inputs of the first-order reduction estimate for target row m.
struct FoaTerms {
  double gamma_hat = 0.0;   // min_{p != m} |a_mm / a_pp - 1|
  double alpha0 = 0.0;      // off(H)
  double alpha_hat0 = 0.0;  // off(H) with row and column m removed
  double eps0 = 0.0;        // off(H(m,:))

  /// Predicted eps_{n-1} / eps_0 to first order.
  [[nodiscard]] double factor() const { return alpha_hat0 / (std::sqrt(2.0) * gamma_hat); }
  [[nodiscard]] double factor_full_alpha() const { return alpha0 / (std::sqrt(2.0) * gamma_hat); }
};

/// The first-order analysis is stated for m = n; any other target is
/// handled by replacing a_nn with a_mm.
inline FoaTerms foa_terms(const SymMatrix& a, std::size_t m) {
  a.check_index(m);
  const ScaledView h = scaled(a);
  FoaTerms f;
  f.gamma_hat = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (p == m) continue;
    if (a(p, p) == a(m, m))
      throw Error(Errc::DegenerateGapHat,
                  "diagonal entries " + std::to_string(p + 1) + " and " + std::to_string(m + 1) +
                      " coincide");
    f.gamma_hat = std::min(f.gamma_hat, std::abs(a(m, m) / a(p, p) - 1.0));
  }
  double block = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (i != m && j != m) block += h(i, j) * h(i, j);
  f.alpha_hat0 = std::sqrt(2.0 * block);
  f.alpha0 = off_norm(h.matrix());
  f.eps0 = off_row(h.matrix(), m);
  return f;
}

inline double foa_factor(const SymMatrix& a, std::size_t m) { return foa_terms(a, m).factor(); }

/// Bound on |a_ii - lambda_i| / |a_ii|; meaningful when alpha <= gamma / (gamma + 3).
inline double sep_bound(double a_ii, double off_row_h, double gamma) {
  if (gamma == 0.0)
    throw Error(Errc::BoundUndefined, "coalesced eigenvalues: relative gap is zero");
  if (!(gamma > 0.0)) throw Error(Errc::InvalidArgument, "gamma must be positive");
  if (a_ii == 0.0) throw Error(Errc::ZeroDiagonal, "diagonal entry is zero");
  return 4.0 * off_row_h * off_row_h / gamma;
}

inline bool sep_bound_valid(double alpha_value, double gamma) {
  return alpha_value <= gamma / (gamma + 3.0);
}

/// Per-sweep contraction factor exp(slope) of a least-squares line through
/// log(values[k]) against k. Fitting stops at the first value below
/// `floor`, so a machine-precision plateau does not bias the slope.
inline double fit_rate(std::span<const double> values, double floor = 0.0) {
  std::size_t used = 0;
  for (double v : values) {
    if (!(v > 0.0)) throw Error(Errc::NonpositiveValues, "history value is not positive");
    if (v < floor) break;
    ++used;
  }
  if (used < 3) throw Error(Errc::InsufficientHistory, "need at least 3 usable history values");

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < used; ++k) {
    const double x = static_cast<double>(k);
    const double y = std::log(values[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double cnt = static_cast<double>(used);
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return std::exp(slope);
}

enum class GapMode { Exact, Estimated };

struct DiagnosticsReport {
  GapMode mode = GapMode::Estimated;
  double alpha0 = 0.0;
  std::optional<double> gamma;             // exact (oracle) or diagonal surrogate, per mode
  std::optional<double> gamma_m;
  std::optional<double> gamma_hat;         // first-order surrogate gap; absent when degenerate
  std::optional<double> rho;               // alpha0 / gamma_m
  std::optional<double> alpha_over_gamma;  // alpha0 / gamma
  bool thm2_applicable = false;
  std::optional<double> thm2_rate_bound;
  std::optional<double> foa_factor;
  std::optional<double> fitted_rate;
  std::vector<double> spectrum;            // eigenvalues (exact) or sorted diagonal (estimated)
};

/// Diagnostics for target rank m (0-based, after the diagonal sort).
/// Exact mode runs the O(n^3) oracle; estimated mode uses the sorted
/// diagonal as eigenvalue surrogates. Requires a nonzero diagonal.
inline DiagnosticsReport diagnose(const SymMatrix& a, std::size_t m, GapMode mode,
                                  std::span<const double> history = {}) {
  a.check_index(m);
  const SymMatrix sorted = sort_by_diagonal(a).first;
  DiagnosticsReport r;
  r.mode = mode;
  r.alpha0 = alpha(sorted);
  r.spectrum = mode == GapMode::Exact ? full_jacobi(sorted, 0.0, 60, false).values : sorted.diag();
  const std::size_t n = a.size();
  if (n >= 2) {
    const GapSet g = min_relative_gap(r.spectrum);
    r.gamma = g.gamma;
    r.gamma_m = g.gamma_j[m];
    if (g.gamma_j[m] > 0.0) r.rho = r.alpha0 / g.gamma_j[m];
    if (g.gamma > 0.0) {
      r.alpha_over_gamma = r.alpha0 / g.gamma;
      if (n >= 3) {
        const Thm2Bound b = thm2_bound(r.alpha0, g.gamma, n, 1);
        r.thm2_applicable = b.applicable;
        r.thm2_rate_bound = b.rate;
      }
    }
    try {
      const FoaTerms f = foa_terms(sorted, m);
      r.gamma_hat = f.gamma_hat;
      r.foa_factor = f.factor();
    } catch (const Error& e) {
      if (e.code() != Errc::DegenerateGapHat) throw;
    }
  }
  if (history.size() >= 3) r.fitted_rate = fit_rate(history, 100.0 * kEps * frob_norm(a));
  return r;
}

}  // namespace ddjacobi
