#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ddjacobi/diagnostics.hpp"
#include "ddjacobi/io.hpp"
#include "test_support.hpp"

namespace dj = ddjacobi;
using dj::kEps;
using dj::SymMatrix;

namespace {

template <class F>
dj::Errc error_of(F&& f) {
  try {
    f();
  } catch (const dj::Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return dj::Errc::InvalidArgument;
}

TEST(RelativeGap, Examples) {
  const std::vector<double> v{1, 2, 4};
  const auto g = dj::min_relative_gap(v);
  EXPECT_DOUBLE_EQ(g.gamma, 1.0 / 3.0);
  for (double x : g.gamma_j) EXPECT_DOUBLE_EQ(x, 1.0 / 3.0);

  const std::vector<double> same{1, 1};
  EXPECT_EQ(dj::min_relative_gap(same).gamma, 0.0);

  const std::vector<double> one{1};
  EXPECT_EQ(error_of([&] { (void)dj::min_relative_gap(one); }), dj::Errc::SingleEigenvalue);
}

TEST(RelativeGap, ExampleOneSpectrum) {
  const auto vals = dj::full_jacobi(dj::io::gen_example1()).values;
  const auto g = dj::min_relative_gap(vals);
  EXPECT_NEAR(g.gamma, 0.048, 5e-4);
  // Closest neighbours of the sixth eigenvalue are near 6 and 7: 1/13.
  EXPECT_NEAR(g.gamma_j[5], 1.0 / 13.0, 5e-5);
}

TEST(RelativeGap, EntriesInUnitIntervalAndOrderFree) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-10, 10);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(2 + trial % 7);
    for (double& x : v) x = d(rng);
    const auto g = dj::min_relative_gap(v);
    for (double x : g.gamma_j) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
    std::vector<double> r(v.rbegin(), v.rend());
    EXPECT_EQ(dj::min_relative_gap(r).gamma, g.gamma);
  }
}

TEST(Rel, Examples) {
  EXPECT_EQ(dj::rel(1, 3), 0.5);
  EXPECT_EQ(dj::rel(2.5, 2.5), 0.0);
  EXPECT_EQ(dj::rel(-1, 1), 1.0);
  EXPECT_EQ(error_of([] { (void)dj::rel(0, 0); }), dj::Errc::BothZero);
}

TEST(Alpha, Examples) {
  const std::vector<double> d{1, 2, 3};
  EXPECT_EQ(dj::alpha(SymMatrix::diagonal(d)), 0.0);
  EXPECT_NEAR(dj::alpha(dj::io::gen_example1()), 0.023, 5e-4);
  SymMatrix a(2);
  a.set(0, 0, 4);
  a.set(0, 1, 2);
  a.set(1, 1, 9);
  EXPECT_NEAR(dj::alpha(a), std::sqrt(2.0) / 3.0, 4 * kEps);
}

TEST(Alpha, InvariantUnderPositiveDiagonalScaling) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(0.1, 10);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const std::size_t n = 3 + seed % 8;
    const SymMatrix a = dj::testing::random_dominant(n, seed, 0.3);
    std::vector<double> s(n);
    for (double& x : s) x = d(rng);
    SymMatrix b(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j <= i; ++j) b.set(i, j, s[i] * a(i, j) * s[j]);
    EXPECT_NEAR(dj::alpha(b), dj::alpha(a), 8 * static_cast<double>(n) * kEps);
  }
}

TEST(Thm2Bound, Examples) {
  const auto yes = dj::thm2_bound(0.01, 0.5, 5, 1);
  EXPECT_TRUE(yes.applicable);
  EXPECT_NEAR(yes.bound, 2.8 * 1.001 * 0.01 / 0.5 * 0.01, 1e-18);
  EXPECT_NEAR(yes.bound, 5.606e-4, 1e-7);
  EXPECT_FALSE(dj::thm2_bound(0.1, 0.5, 5, 1).applicable);
  EXPECT_EQ(error_of([] { (void)dj::thm2_bound(0.01, 0.0, 5, 1); }), dj::Errc::InvalidArgument);
  EXPECT_EQ(error_of([] { (void)dj::thm2_bound(0.01, 0.5, 5, 6); }), dj::Errc::InvalidArgument);
}

TEST(Thm2Bound, ApplicableImpliesSmallRate) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0, 1);
  int hits = 0;
  for (int trial = 0; trial < 5000; ++trial) {
    const std::size_t n = 3 + trial % 40;
    const double gamma = u(rng);
    const double alpha0 = u(rng) * 0.05;
    const auto b = dj::thm2_bound(alpha0, gamma, n, 1);
    if (!b.applicable) continue;
    ++hits;
    EXPECT_LE(b.rate, 0.26);
  }
  EXPECT_GT(hits, 100);
}

TEST(Foa, Examples) {
  SymMatrix a(3);
  a.set(0, 0, 1);
  a.set(1, 1, 2);
  a.set(2, 2, 10);
  a.set(1, 0, 1e-6);
  a.set(2, 0, 1e-6);
  a.set(2, 1, 1e-6);
  const auto f = dj::foa_terms(a, 2);
  EXPECT_DOUBLE_EQ(f.gamma_hat, 4.0);
  EXPECT_NEAR(f.alpha_hat0, std::sqrt(2.0) * 1e-6 / std::sqrt(2.0), 1e-20);

  const std::vector<double> d{1, 2, 3};
  EXPECT_EQ(dj::foa_factor(SymMatrix::diagonal(d), 1), 0.0);

  const std::vector<double> tie{1, 1, 3};
  EXPECT_EQ(error_of([&] { (void)dj::foa_terms(SymMatrix::diagonal(tie), 0); }),
            dj::Errc::DegenerateGapHat);
}

TEST(Foa, PredictsOneSweepReductionToFirstOrder) {
  // Small perturbations: the observed eps_1 / eps_0 should sit at or below
  // the first-order factor, up to higher-order terms.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 6;
    const SymMatrix a = dj::io::gen_random_dd(n, 1e-3, 400 + seed);
    const std::size_t m = n - 1;
    const auto f = dj::foa_terms(a, m);
    dj::SolveOptions o;
    o.m = m;
    o.stop_rel = 0.0;
    o.max_sweeps = 1;
    const auto r = dj::solve(a, o);
    const double ratio = *r.history[1].off_row_scaled / *r.history[0].off_row_scaled;
    EXPECT_LE(ratio, 1.05 * f.factor_full_alpha());
  }
}

TEST(SepBound, Examples) {
  EXPECT_EQ(dj::sep_bound(2.0, 0.0, 0.3), 0.0);
  EXPECT_NEAR(dj::sep_bound(1.0, 1e-3, 0.1), 4e-5, 1e-18);
  EXPECT_EQ(error_of([] { (void)dj::sep_bound(1.0, 1e-3, 0.0); }), dj::Errc::BoundUndefined);
  EXPECT_TRUE(dj::sep_bound_valid(0.01, 0.1));
  EXPECT_FALSE(dj::sep_bound_valid(0.5, 0.1));
}

TEST(FitRate, Examples) {
  std::vector<double> geo;
  for (int k = 0; k < 8; ++k) geo.push_back(std::pow(0.1, k));
  EXPECT_NEAR(dj::fit_rate(geo), 0.1, 1e-12);
  const std::vector<double> flat(5, 2.5);
  EXPECT_NEAR(dj::fit_rate(flat), 1.0, 1e-15);

  const std::vector<double> hist{6.8959e-3, 5.8019e-5, 5.6684e-7, 2.4057e-9, 1.1235e-11, 3.2494e-14};
  const double r = dj::fit_rate(hist);
  EXPECT_GE(r, 5.48e-3 / 2);
  EXPECT_LE(r, 5.48e-3 * 2);
}

TEST(FitRate, FloorAndErrors) {
  const std::vector<double> v{1, 0.1, 0.01, 1e-17, 1e-16, 1e-17};
  EXPECT_NEAR(dj::fit_rate(v, 1e-15), 0.1, 1e-12);
  const std::vector<double> two{1, 0.1};
  EXPECT_EQ(error_of([&] { (void)dj::fit_rate(two); }), dj::Errc::InsufficientHistory);
  const std::vector<double> neg{1, -1, 0.1};
  EXPECT_EQ(error_of([&] { (void)dj::fit_rate(neg); }), dj::Errc::NonpositiveValues);
}

TEST(Diagnose, ExampleOneExact) {
  const auto r = dj::diagnose(dj::io::gen_example1(), 5, dj::GapMode::Exact);
  EXPECT_NEAR(r.alpha0, 0.023, 5e-4);
  EXPECT_NEAR(*r.gamma, 0.048, 5e-4);
  EXPECT_GE(*r.alpha_over_gamma, 0.45);
  EXPECT_LE(*r.alpha_over_gamma, 0.51);
  EXPECT_FALSE(r.thm2_applicable);
  ASSERT_TRUE(r.foa_factor.has_value());
  EXPECT_DOUBLE_EQ(*r.gamma_hat, 1.0 / 7.0);
}

TEST(Diagnose, EstimatedModeUsesDiagonal) {
  const std::vector<double> d{3, 1, 2};
  const auto r = dj::diagnose(SymMatrix::diagonal(d), 0, dj::GapMode::Estimated);
  EXPECT_EQ(r.alpha0, 0.0);
  EXPECT_EQ(r.spectrum, (std::vector<double>{1, 2, 3}));
  EXPECT_DOUBLE_EQ(*r.gamma_m, 1.0 / 3.0);
}

TEST(Diagnose, ZeroDiagonalIsAnError) {
  SymMatrix a(2);
  a.set(0, 0, 1);
  a.set(0, 1, 0.5);
  EXPECT_EQ(error_of([&] { (void)dj::diagnose(a, 0, dj::GapMode::Estimated); }),
            dj::Errc::ZeroDiagonal);
}

TEST(Diagnose, InvariantUnderSymmetricPermutation) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SymMatrix a = dj::io::gen_random_dd(7, 0.01, seed);
    const dj::Permutation p(std::vector<std::size_t>{6, 2, 4, 0, 1, 5, 3});
    const auto ra = dj::diagnose(a, 3, dj::GapMode::Exact);
    const auto rb = dj::diagnose(p.apply(a), 3, dj::GapMode::Exact);
    EXPECT_NEAR(ra.alpha0, rb.alpha0, 1e-15);
    EXPECT_NEAR(*ra.gamma, *rb.gamma, 1e-12);
    EXPECT_NEAR(*ra.foa_factor, *rb.foa_factor, 1e-12);
  }
}

}  // namespace
