/*
 * verification.hpp: direct time integration of JJ du/dt = grad H(u) in the
 * rotating frame, used as an independent check of continued periodic orbits.
 */
#pragma once

#include <string>
#include <vector>

#include "dnls/continuation.hpp"
#include "dnls/lattice.hpp"
#include "dnls/symmetry.hpp"

namespace dnls {

struct Trajectory {
  std::vector<double> times;
  std::vector<LatticeState> states;
  double dt = 0.0;
  std::string integrator = "implicit_midpoint";
};

struct MidpointOptions {
  double tol = 1e-13;
  int max_iter = 100;
};

/// Implicit-midpoint integration on [0, T]. The step is adjusted to
/// T / round(T / dt) so that the last sample sits exactly at T.
Trajectory integrate(const LatticeConfig& cfg, const Potential& pot, double omega,
                     const LatticeState& u0, double dt, double T,
                     const MidpointOptions& opts = {});

struct InvariantDrift {
  double dH = 0.0;
  double dP = 0.0;
};

InvariantDrift invariant_drift(const Trajectory& traj, const LatticeConfig& cfg,
                               const Potential& pot, double omega);

/// ||u(T) - u(0)|| between the last and the first sample.
double closure_error(const Trajectory& traj);

/// sup_{j,t} | |u_{j+1}|(t) - |u_j|(t + k zeta / nu) |, using trigonometric
/// interpolation of the norms over one period 2 pi / nu.
double traveling_wave_error(const Trajectory& traj, const LatticeConfig& cfg,
                            const StandingWave& sw, int k, double nu);

/// sup_{j,t} | |u_{j+p}|(t) - |u_j|(t) | with p = n / gcd(n, k).
double spatial_period_error(const Trajectory& traj, const LatticeConfig& cfg, int k);

/// u_j(0) = a_j + e^{j m zeta J} x_n(j k zeta).
LatticeState reconstruct_state(const LatticeConfig& cfg, const StandingWave& sw,
                               const ReducedProfile& profile);

struct PointVerification {
  double period = 0.0;
  int steps = 0;
  double closure = 0.0;
  double dH = 0.0;
  double dP = 0.0;
  double traveling_error = 0.0;
  double spatial_error = 0.0;
  int spatial_period = 0;
};

/// Integrates a branch point over `periods` periods 2 pi / nu and collects all
/// checks. The step is adjusted so that one period holds a whole number of steps.
PointVerification verify_point(const LatticeConfig& cfg, const Potential& pot,
                               const StandingWave& sw, const BranchPoint& point, double dt = 1e-3,
                               int periods = 1);

}  // namespace dnls
