#include "dnls/verification.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

namespace dnls {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double site_norm(const LatticeState& u, int j) { return u.segment<2>(2 * j).norm(); }

// Number of samples covering exactly one period, or throws.
int samples_per_period(const Trajectory& traj, double period) {
  if (traj.states.size() < 2 || !(traj.dt > 0.0)) {
    throw ConfigError("verification: trajectory needs at least two samples");
  }
  const double ratio = period / traj.dt;
  const long count = std::lround(ratio);
  if (std::abs(ratio - count) > 1e-6 * std::max(1.0, ratio)) {
    throw ConfigError("verification: sample grid is not commensurate with the period");
  }
  if (count < 2 || static_cast<std::size_t>(count) >= traj.states.size() + 1) {
    throw ConfigError("verification: trajectory spans less than one period");
  }
  return static_cast<int>(count);
}

// f(t + shift) on the samples of one period of a real periodic signal.
std::vector<double> shifted_samples(const std::vector<double>& f, double shift_fraction) {
  const int m = static_cast<int>(f.size());
  const int bins = m / 2 + 1;
  std::vector<double> in(f);
  std::vector<std::complex<double>> spec(bins);
  std::vector<double> out(m);
  fftw_plan fwd = fftw_plan_dft_r2c_1d(m, in.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                                       FFTW_ESTIMATE);
  fftw_execute(fwd);
  fftw_destroy_plan(fwd);
  for (int h = 0; h < bins; ++h) {
    const double angle = kTwoPi * h * shift_fraction;
    if (m % 2 == 0 && h == m / 2) {
      spec[h] *= std::cos(angle);
    } else {
      spec[h] *= std::polar(1.0, angle);
    }
  }
  fftw_plan inv = fftw_plan_dft_c2r_1d(m, reinterpret_cast<fftw_complex*>(spec.data()), out.data(),
                                       FFTW_ESTIMATE);
  fftw_execute(inv);
  fftw_destroy_plan(inv);
  for (double& v : out) v /= m;
  return out;
}

}  // namespace

Trajectory integrate(const LatticeConfig& cfg, const Potential& pot, double omega,
                     const LatticeState& u0, double dt, double T, const MidpointOptions& opts) {
  require_state(cfg, u0);
  if (!(dt > 0.0)) throw ConfigError("integrate: dt must be positive");
  if (!(T >= dt)) throw ConfigError("integrate: requires T >= dt");
  const long steps = std::max(1L, std::lround(T / dt));
  const double h = T / static_cast<double>(steps);

  Trajectory traj;
  traj.dt = h;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(u0);

  LatticeState u = u0;
  for (long s = 0; s < steps; ++s) {
    // u_next = u + h f((u + u_next) / 2), by fixed-point iteration.
    LatticeState next = u + h * rotating_rhs(cfg, pot, omega, u);
    bool converged = false;
    for (int it = 0; it < opts.max_iter; ++it) {
      const LatticeState update = u + h * rotating_rhs(cfg, pot, omega, 0.5 * (u + next));
      const double change = (update - next).norm();
      next = update;
      if (!std::isfinite(change)) break;
      if (change <= opts.tol * std::max(1.0, next.norm())) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw NumericalError("integrator",
                           "implicit midpoint iteration did not converge at t=" +
                               std::to_string(s * h));
    }
    u = next;
    traj.times.push_back(static_cast<double>(s + 1) * h);
    traj.states.push_back(u);
  }
  return traj;
}

InvariantDrift invariant_drift(const Trajectory& traj, const LatticeConfig& cfg,
                               const Potential& pot, double omega) {
  InvariantDrift d;
  if (traj.states.empty()) return d;
  const double h0 = hamiltonian(cfg, pot, omega, traj.states.front());
  const double p0 = power(traj.states.front());
  for (const LatticeState& u : traj.states) {
    d.dH = std::max(d.dH, std::abs(hamiltonian(cfg, pot, omega, u) - h0));
    d.dP = std::max(d.dP, std::abs(power(u) - p0));
  }
  return d;
}

double closure_error(const Trajectory& traj) {
  if (traj.states.empty()) return 0.0;
  return (traj.states.back() - traj.states.front()).norm();
}

double traveling_wave_error(const Trajectory& traj, const LatticeConfig& cfg,
                            const StandingWave& /*sw*/, int k, double nu) {
  if (!(nu > 0.0)) throw ConfigError("traveling wave: frequency must be positive");
  const int m = samples_per_period(traj, kTwoPi / nu);
  const int n = cfg.n();
  // Shift k zeta / nu over the period 2 pi / nu is the fraction k / n.
  const double fraction = static_cast<double>(k) / n;
  double worst = 0.0;
  std::vector<double> norms(m);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) norms[i] = site_norm(traj.states[i], j);
    const std::vector<double> shifted = shifted_samples(norms, fraction);
    const int jp = cfg.site(j + 1);
    for (int i = 0; i < m; ++i) {
      worst = std::max(worst, std::abs(site_norm(traj.states[i], jp) - shifted[i]));
    }
  }
  return worst;
}

double spatial_period_error(const Trajectory& traj, const LatticeConfig& cfg, int k) {
  const int n = cfg.n();
  const int p = n / std::gcd(n, k);
  double worst = 0.0;
  for (const LatticeState& u : traj.states) {
    for (int j = 0; j < n; ++j) {
      worst = std::max(worst, std::abs(site_norm(u, cfg.site(j + p)) - site_norm(u, j)));
    }
  }
  return worst;
}

LatticeState reconstruct_state(const LatticeConfig& cfg, const StandingWave& sw,
                               const ReducedProfile& profile) {
  const LatticeLoop x = embed_reduced(profile, cfg);
  LatticeState u = sw.equilibrium;
  for (int j = 0; j < cfg.n(); ++j) u.segment<2>(2 * j) += x.evaluate(j, 0.0);
  return u;
}

PointVerification verify_point(const LatticeConfig& cfg, const Potential& pot,
                               const StandingWave& sw, const BranchPoint& point, double dt,
                               int periods) {
  if (periods < 1) throw ConfigError("verify: periods must be >= 1");
  if (!(dt > 0.0)) throw ConfigError("verify: dt must be positive");
  PointVerification v;
  v.period = kTwoPi / point.nu;
  const long per_period = std::max(2L, std::lround(v.period / dt));
  const double h = v.period / static_cast<double>(per_period);
  const LatticeState u0 = reconstruct_state(cfg, sw, point.profile);
  const Trajectory traj = integrate(cfg, pot, sw.omega, u0, h, periods * v.period);
  const InvariantDrift drift = invariant_drift(traj, cfg, pot, sw.omega);
  v.steps = static_cast<int>(traj.states.size()) - 1;
  v.closure = closure_error(traj);
  v.dH = drift.dH;
  v.dP = drift.dP;
  v.traveling_error = traveling_wave_error(traj, cfg, sw, point.profile.k, point.nu);
  v.spatial_period = cfg.n() / std::gcd(cfg.n(), point.profile.k);
  v.spatial_error = spatial_period_error(traj, cfg, point.profile.k);
  return v;
}

}  // namespace dnls
