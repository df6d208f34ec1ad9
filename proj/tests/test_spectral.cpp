#include <gtest/gtest.h>

#include <cmath>

#include "dnls/spectral.hpp"
#include "oracles.hpp"

using namespace dnls;

namespace {

struct Case {
  int n, m;
  Potential pot;
  double a;
};

std::vector<Case> fixture_grid() {
  std::vector<Case> out;
  for (int n : {3, 5, 6, 7, 8}) {
    for (int m = 0; 2 * m <= n; ++m) {
      if (4 * m == n) continue;
      for (const Potential& pot :
           {Potential::cubic(1.0), Potential::cubic(-1.0), Potential::saturable(1.0)}) {
        for (double a : {0.0, 0.2, 0.6, 1.0}) out.push_back({n, m, pot, a});
      }
    }
  }
  return out;
}

}  // namespace

TEST(BlockData, FixtureRowN6M1) {
  const LatticeConfig cfg(6, 1);
  const BlockData b = block_data(cfg, Potential::cubic(1.0), 0.2, 1);
  EXPECT_NEAR(b.alpha, 0.5, 1e-15);
  EXPECT_NEAR(b.beta, 1.5, 1e-15);
  EXPECT_NEAR(*b.phi, 0.16, 1e-15);
  EXPECT_NEAR(*b.gamma, -8.0, 1e-13);
  EXPECT_NEAR(b.nu_plus.real(), 1.958258, 1e-6);
  EXPECT_NEAR(b.nu_minus.real(), 1.041742, 1e-6);
  EXPECT_TRUE(b.real_pair());
  // 1.5 +- sqrt(0.25 * 0.84)
  EXPECT_NEAR(b.nu_plus.real(), 1.5 + std::sqrt(0.21), 1e-15);
}

TEST(BlockData, ModeNIsTrivial) {
  const LatticeConfig cfg(6, 1);
  const BlockData b = block_data(cfg, Potential::cubic(1.0), 0.2, 6);
  EXPECT_FALSE(b.phi.has_value());
  EXPECT_EQ(b.alpha, 0.0);
  EXPECT_EQ(b.beta, 0.0);
  EXPECT_EQ(b.nu_plus, 0.0);
  EXPECT_THROW(block_data(cfg, Potential::cubic(1.0), 0.2, 0), ConfigError);
}

TEST(BlockData, EigenvaluesMatchGeneral2x2Solver) {
  for (const Case& c : fixture_grid()) {
    const LatticeConfig cfg(c.n, c.m);
    for (int k = 1; k < c.n; ++k) {
      const BlockData b = block_data(cfg, c.pot, c.a, k);
      const auto [e0, e1] = oracle::block_eigenvalues(b.alpha, b.beta, b.rank_one);
      // Defective pairs (phi = 1) resolve only to sqrt(eps).
      const double tol = std::abs(*b.phi - 1.0) < 1e-6 ? 1e-7 : 1e-12;
      std::complex<double> p = b.nu_plus, q = b.nu_minus;
      if (p.real() < q.real() || (p.real() == q.real() && p.imag() < q.imag())) std::swap(p, q);
      EXPECT_LT(std::abs(p - e0), tol) << "n=" << c.n << " m=" << c.m << " k=" << k;
      EXPECT_LT(std::abs(q - e1), tol);
    }
  }
}

TEST(BlockData, ConjugateModeReflectsFrequencies) {
  // {nu_{n-k}^{+-}} = {-nu_k^{-+}}
  const LatticeConfig cfg(7, 2);
  for (int k = 1; k < 7; ++k) {
    const BlockData b = block_data(cfg, Potential::cubic(1.0), 0.4, k);
    const BlockData c = block_data(cfg, Potential::cubic(1.0), 0.4, 7 - k);
    EXPECT_LT(std::abs(c.nu_plus + b.nu_minus), 1e-14);
    EXPECT_LT(std::abs(c.nu_minus + b.nu_plus), 1e-14);
  }
}

TEST(BlockDiagonalization, HessianActsAsBlockOnFourierVectors) {
  for (const Case& c : fixture_grid()) {
    const LatticeConfig cfg(c.n, c.m);
    const Eigen::MatrixXcd h = hessian_at_equilibrium(cfg, c.pot, c.a).cast<std::complex<double>>();
    for (int k = 1; k <= c.n; ++k) {
      const BlockData b = block_data(cfg, c.pot, c.a, k);
      for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Vector2cd z(std::complex<double>(oracle::uniform(-1, 1), oracle::uniform(-1, 1)),
                                 std::complex<double>(oracle::uniform(-1, 1), oracle::uniform(-1, 1)));
        const Eigen::VectorXcd tz = oracle::fourier_vector(c.n, c.m, k, z);
        const Eigen::VectorXcd tbz = oracle::fourier_vector(c.n, c.m, k, b.B * z);
        EXPECT_LT((h * tz - tbz).norm(), 1e-10) << "n=" << c.n << " m=" << c.m << " k=" << k;
        EXPECT_LT((block_basis(cfg, k, z) - tz).norm(), 1e-14);
      }
    }
  }
}

TEST(Spectrum, ClosedFormMatchesDenseWhenAllPhiAtMostOne) {
  int checked = 0;
  for (const Case& c : fixture_grid()) {
    const LatticeConfig cfg(c.n, c.m);
    if (!c.pot.in_domain(c.a * c.a)) continue;
    bool real = true;
    for (int k = 1; k < c.n; ++k) real = real && *block_data(cfg, c.pot, c.a, k).phi <= 1.0 + 1e-12;
    if (!real) continue;
    const double d = spectrum_distance(closed_form_spectrum(cfg, c.pot, c.a),
                                       full_spectrum(cfg, c.pot, c.a));
    EXPECT_LE(d, 1e-8) << "n=" << c.n << " m=" << c.m << " a=" << c.a;
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Spectrum, ComplexPairsAppearAboveHopfThreshold) {
  // phi_1 = 4 a^2 for n=6, m=1, c=1: a = 0.6 gives phi_1 = 1.44 > 1.
  const LatticeConfig cfg(6, 1);
  const Potential pot = Potential::cubic(1.0);
  const double d = spectrum_distance(closed_form_spectrum(cfg, pot, 0.6), full_spectrum(cfg, pot, 0.6));
  EXPECT_LE(d, 1e-8);
  const BlockData b = block_data(cfg, pot, 0.6, 1);
  EXPECT_FALSE(b.real_pair());
  EXPECT_NEAR(b.nu_plus.imag(), std::sqrt(0.25 * 0.44), 1e-13);
}

TEST(Spectrum, DistanceMatching) {
  using cd = std::complex<double>;
  EXPECT_EQ(spectrum_distance({cd(1, 0), cd(0, 2)}, {cd(0, 2), cd(1, 1e-3)}), 1e-3);
  EXPECT_TRUE(std::isinf(spectrum_distance({cd(1, 0)}, {})));
}

TEST(Stability, SigmaRule) {
  EXPECT_EQ(sigma_m(LatticeConfig(6, 1), Potential::cubic(1.0), 0.3), 1);
  EXPECT_EQ(sigma_m(LatticeConfig(6, 1), Potential::cubic(-1.0), 0.3), -1);
  EXPECT_EQ(sigma_m(LatticeConfig(6, 3), Potential::cubic(1.0), 0.3), -1);
  EXPECT_EQ(sigma_m(LatticeConfig(6, 0), Potential::cubic(1.0), 0.3), 1);
  EXPECT_EQ(sigma_m(LatticeConfig(6, 1), Potential::polynomial({0.0, 1.0}), 0.3), 0);
}

TEST(Stability, FocusingThresholdAtClosedForm) {
  const LatticeConfig cfg(6, 1);
  const Potential pot = Potential::cubic(1.0);
  const double alpha1 = block_data(cfg, pot, 0.0, 1).alpha;
  const double a_star = std::sqrt(alpha1 / 2.0);
  EXPECT_NEAR(a_star, 0.5, 1e-15);
  for (double a : {0.1, 0.3, 0.49, 0.499999}) {
    const StabilityVerdict v = classify_stability(cfg, pot, a);
    EXPECT_TRUE(v.stable) << a;
    EXPECT_TRUE(v.oracle_stable) << a;
  }
  for (double a : {0.500001, 0.51, 0.8, 1.5}) {
    const StabilityVerdict v = classify_stability(cfg, pot, a);
    EXPECT_FALSE(v.stable) << a;
    EXPECT_FALSE(v.oracle_stable) << a;
  }
}

TEST(Stability, DefocusingAndUpperWavenumberAlwaysStable) {
  for (int i = 1; i <= 40; ++i) {
    const double a = 0.05 * i;
    const StabilityVerdict d = classify_stability(LatticeConfig(6, 1), Potential::cubic(-1.0), a);
    const StabilityVerdict f = classify_stability(LatticeConfig(6, 3), Potential::cubic(1.0), a);
    EXPECT_TRUE(d.stable && d.oracle_stable) << a;
    EXPECT_TRUE(f.stable && f.oracle_stable) << a;
  }
}

TEST(Stability, VerdictAgreesWithOracleOnGrid) {
  // Where the criterion applies it must agree with the dense spectrum.
  for (const Case& c : fixture_grid()) {
    if (c.a == 0.0) continue;
    const LatticeConfig cfg(c.n, c.m);
    const StabilityVerdict v = classify_stability(cfg, c.pot, c.a);
    bool near_boundary = false;
    for (const ModeStability& row : v.per_k) near_boundary |= std::abs(row.phi - 1.0) < 1e-9;
    if (near_boundary) continue;
    EXPECT_EQ(v.stable, v.oracle_stable) << "n=" << c.n << " m=" << c.m << " a=" << c.a;
  }
}
