#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dnls/verification.hpp"
#include "oracles.hpp"

using namespace dnls;

namespace {

constexpr double kPi = std::numbers::pi;

struct Fixture {
  LatticeConfig cfg{6, 1};
  Potential pot = Potential::cubic(1.0);
  StandingWave sw = make_standing_wave(cfg, pot, 0.2);
};

// u_j(t) = a_j + e^{j m zeta J} x_n(nu t + j k zeta), sampled on one period.
Trajectory synthetic_wave(const Fixture& f, const ReducedProfile& p, double nu, int samples) {
  const LatticeLoop x = embed_reduced(p, f.cfg);
  Trajectory traj;
  traj.dt = 2 * kPi / nu / samples;
  for (int i = 0; i <= samples; ++i) {
    const double t = i * traj.dt;
    LatticeState u = f.sw.equilibrium;
    for (int j = 0; j < 6; ++j) u.segment<2>(2 * j) += x.evaluate(j, nu * t);
    traj.times.push_back(t);
    traj.states.push_back(u);
  }
  return traj;
}

}  // namespace

TEST(Integrator, EquilibriumStaysFixed) {
  const Fixture f;
  const Trajectory traj = integrate(f.cfg, f.pot, f.sw.omega, f.sw.equilibrium, 1e-2, 5.0);
  EXPECT_EQ(traj.states.size(), 501u);
  EXPECT_DOUBLE_EQ(traj.times.back(), 5.0);
  for (const LatticeState& u : traj.states) EXPECT_LT((u - f.sw.equilibrium).norm(), 1e-12);
}

TEST(Integrator, StepIsAdjustedToHitTheEndpoint) {
  const Fixture f;
  const Trajectory traj = integrate(f.cfg, f.pot, f.sw.omega, f.sw.equilibrium, 0.3, 1.0);
  EXPECT_EQ(traj.states.size(), 4u);
  EXPECT_NEAR(traj.dt, 1.0 / 3.0, 1e-15);
  EXPECT_THROW(integrate(f.cfg, f.pot, f.sw.omega, f.sw.equilibrium, -1.0, 1.0), ConfigError);
}

TEST(Integrator, SecondOrderConvergence) {
  const Fixture f;
  const LatticeState u0 = f.sw.equilibrium + oracle::random_vector(12, 0.1);
  const double T = 2.0;
  const LatticeState ref = integrate(f.cfg, f.pot, f.sw.omega, u0, 1e-3, T).states.back();
  std::vector<double> err;
  for (double dt : {0.04, 0.02, 0.01}) {
    err.push_back((integrate(f.cfg, f.pot, f.sw.omega, u0, dt, T).states.back() - ref).norm());
  }
  EXPECT_NEAR(err[0] / err[1], 4.0, 0.3);
  EXPECT_NEAR(err[1] / err[2], 4.0, 0.3);
}

TEST(Integrator, PowerIsConservedAndEnergyDriftIsSecondOrder) {
  const Fixture f;
  const LatticeState u0 = f.sw.equilibrium + oracle::random_vector(12, 0.3);
  const Trajectory coarse = integrate(f.cfg, f.pot, f.sw.omega, u0, 0.02, 10.0);
  const Trajectory fine = integrate(f.cfg, f.pot, f.sw.omega, u0, 0.01, 10.0);
  const InvariantDrift dc = invariant_drift(coarse, f.cfg, f.pot, f.sw.omega);
  const InvariantDrift df = invariant_drift(fine, f.cfg, f.pot, f.sw.omega);
  EXPECT_LE(dc.dP, 1e-10);
  EXPECT_LE(df.dP, 1e-10);
  EXPECT_GT(dc.dH, 0.0);
  EXPECT_NEAR(dc.dH / df.dH, 4.0, 1.0);
}

TEST(TravelingWave, SyntheticWaveHasNoError) {
  const Fixture f;
  for (int k = 1; k < 6; ++k) {
    ReducedProfile p(k, 3);
    p.cos_a << 0.01, 0.04, -0.01, 0.003;
    p.sin_b << 0.03, 0.008, -0.002;
    const Trajectory traj = synthetic_wave(f, p, 1.7, 600);
    EXPECT_LT(traveling_wave_error(traj, f.cfg, f.sw, k, 1.7), 1e-12) << k;
    // A wrong mode does not satisfy the relation.
    EXPECT_GT(traveling_wave_error(traj, f.cfg, f.sw, (k % 5) + 1, 1.7), 1e-4) << k;
  }
}

TEST(TravelingWave, OddSampleCountAndWrongFrequency) {
  const Fixture f;
  ReducedProfile p(2, 2);
  p.cos_a << 0.0, 0.05, 0.01;
  p.sin_b << 0.02, -0.01;
  const Trajectory traj = synthetic_wave(f, p, 2.3, 601);
  EXPECT_LT(traveling_wave_error(traj, f.cfg, f.sw, 2, 2.3), 1e-12);
  EXPECT_THROW(traveling_wave_error(traj, f.cfg, f.sw, 2, 2.3 * 1.0001), ConfigError);
}

TEST(SpatialPeriod, FollowsGcdRule) {
  const Fixture f;
  for (int k = 1; k < 6; ++k) {
    ReducedProfile p(k, 2);
    p.cos_a << 0.01, 0.05, 0.02;
    p.sin_b << 0.03, 0.01;
    const Trajectory traj = synthetic_wave(f, p, 1.3, 200);
    EXPECT_LT(spatial_period_error(traj, f.cfg, k), 1e-14);
  }
  // A perturbation off the fixed space breaks the period-2 pattern of k = 3.
  ReducedProfile p(3, 2);
  p.cos_a << 0.0, 0.05, 0.0;
  p.sin_b << 0.03, 0.0;
  Trajectory traj = synthetic_wave(f, p, 1.3, 200);
  EXPECT_LT(spatial_period_error(traj, f.cfg, 3), 1e-14);
  traj.states[7](5) += 1e-2;
  EXPECT_GT(spatial_period_error(traj, f.cfg, 3), 1e-3);
}

TEST(ReconstructState, MatchesEmbeddingAtTimeZero) {
  const Fixture f;
  ReducedProfile p(3, 2);
  p.cos_a << 0.01, 0.05, 0.02;
  p.sin_b << 0.03, 0.01;
  const LatticeState u = reconstruct_state(f.cfg, f.sw, p);
  const double zeta = f.cfg.zeta();
  for (int j = 0; j < 6; ++j) {
    const double t = j * 3 * zeta;
    const Eigen::Vector2d xn(0.01 + 0.05 * std::cos(t) + 0.02 * std::cos(2 * t),
                             0.03 * std::sin(t) + 0.01 * std::sin(2 * t));
    const Eigen::Vector2d ref = f.sw.equilibrium.segment<2>(2 * j) + rotation(j * zeta) * xn;
    EXPECT_LT((u.segment<2>(2 * j) - ref).norm(), 1e-15);
  }
}

TEST(VerifyPoint, FirstBranchPointsPassAllChecks) {
  const Fixture f;
  BifurcationPoint onset;
  for (const BifurcationPoint& p : enumerate_bifurcations(f.cfg, f.pot, 0.2)) {
    if (p.k == 3) onset = p;
  }
  ContinuationOptions opts;
  opts.max_steps = 5;
  const Branch br = continue_branch(f.cfg, f.pot, f.sw, onset, opts);
  ASSERT_EQ(br.points.size(), 5u);
  for (const BranchPoint& p : br.points) {
    const PointVerification v = verify_point(f.cfg, f.pot, f.sw, p);
    EXPECT_NEAR(v.period, 2 * kPi / p.nu, 1e-15);
    EXPECT_EQ(v.steps, std::lround(v.period / 1e-3));
    EXPECT_LE(v.closure, 1e-6);
    EXPECT_LE(v.dP, 1e-10);
    EXPECT_LE(v.traveling_error, 1e-6);
    EXPECT_EQ(v.spatial_period, 2);
    EXPECT_LE(v.spatial_error, 1e-6);
  }
}

TEST(VerifyPoint, NonPeriodicStartFailsClosure) {
  // Same amplitude as a branch point but with nu detuned: not a periodic orbit.
  const Fixture f;
  BranchPoint p;
  p.profile = ReducedProfile(3, 4);
  p.profile.cos_a(1) = 0.05;
  p.profile.sin_b(0) = 0.05;
  p.nu = 1.9;
  const PointVerification v = verify_point(f.cfg, f.pot, f.sw, p, 2e-3);
  EXPECT_GT(v.closure, 1e-4);
  EXPECT_LE(v.dP, 1e-10);
}
