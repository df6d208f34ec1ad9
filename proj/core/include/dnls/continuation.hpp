/*
 * continuation.hpp: Fourier-Galerkin periodic orbits in the fixed-point space
 * and pseudo-arclength continuation from the trivial branch.
 *
 * Unknowns are the reduced profile p = [a_0..a_N, b_1..b_N] of site n and the
 * frequency nu. With u(t) = a_m + x(nu t), periodic orbits are zeros of
 *   f(x; nu) = JJ x' - nu^{-1} grad H(a_m + x).
 * By equivariance f maps the fixed space to itself, so only the site-n
 * component is evaluated; its neighbours follow from the embedding
 *   x_{+-1}(t) = e^{+-m zeta J} x_n(t +- k zeta).
 * The nonlinearity is sampled on 4N+1 equispaced times, x' is exact.
 */
#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "dnls/bifurcation.hpp"
#include "dnls/lattice.hpp"
#include "dnls/symmetry.hpp"

namespace dnls {

struct ContinuationOptions {
  int harmonics = 32;
  double newton_tol = 1e-10;
  int max_newton_iter = 25;
  double ds0 = 1e-2;
  double ds_min = 1e-5;
  double ds_max = 1e-1;
  /// Maximum number of accepted points, first point included.
  int max_steps = 500;
  /// RMS amplitude bound on x_n; <= 0 selects 10 a (1 when a = 0).
  double amplitude_cap = 0.0;
  double first_step_eps = 1e-3;
  double nu_min = 1e-6;
  double nu_max = 1e3;

  void validate() const;
};

enum class FiniteDifference { forward, central };

/// Reduced residual of f restricted to the fixed space of mode k.
class GalerkinSystem {
 public:
  GalerkinSystem(LatticeConfig cfg, Potential pot, StandingWave sw, int k, int harmonics);

  int k() const noexcept { return k_; }
  int harmonics() const noexcept { return harmonics_; }
  int grid_size() const noexcept { return grid_; }
  /// Number of profile unknowns 2N+1.
  int dim() const noexcept { return 2 * harmonics_ + 1; }

  Eigen::VectorXd residual(const Eigen::VectorXd& p, double nu) const;

  /// d residual / d(p, nu), shape dim() x (dim() + 1).
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& p, double nu,
                           FiniteDifference scheme = FiniteDifference::forward) const;

  const LatticeConfig& config() const noexcept { return cfg_; }
  const Potential& potential() const noexcept { return pot_; }
  const StandingWave& standing_wave() const noexcept { return sw_; }

 private:
  LatticeConfig cfg_;
  Potential pot_;
  StandingWave sw_;
  int k_;
  int harmonics_;
  int grid_;
  // Rows: collocation times, columns: harmonics 0..N.
  Eigen::MatrixXd cos_, sin_;            // at t_i
  Eigen::MatrixXd cos_fwd_, sin_fwd_;    // at t_i + k zeta
  Eigen::MatrixXd cos_back_, sin_back_;  // at t_i - k zeta
  Eigen::Matrix2d rot_fwd_, rot_back_;   // e^{+-m zeta J}
};

/// Galerkin residual for a single profile (convenience wrapper).
Eigen::VectorXd residual(const ReducedProfile& p, double nu, const LatticeConfig& cfg,
                         const Potential& pot, const StandingWave& sw);

/// f(x; nu) on a full loop, evaluated site by site on 4N+1 collocation times
/// and truncated to the loop's harmonics.
LatticeLoop vector_field(const LatticeConfig& cfg, const Potential& pot, const StandingWave& sw,
                         double nu, const LatticeLoop& x);

/// RMS norm of x_n(t) over one period.
double profile_amplitude(const ReducedProfile& p);

struct OnsetKernel {
  ReducedProfile tangent;  // unit Euclidean norm, a_1 >= 0
  double nu_onset = 0.0;
  int kernel_dimension = 0;
};

/// Null direction of the reduced linearization at (0, nu_k^{sign}). Throws
/// ResonanceError for a double eigenvalue (phi_k = 1) or a kernel that is not
/// one-dimensional.
OnsetKernel onset_kernel(const LatticeConfig& cfg, const Potential& pot, const StandingWave& sw,
                         int k, int sign, int harmonics = 32);

struct BranchPoint {
  ReducedProfile profile;
  double nu = 0.0;
  double amplitude = 0.0;
  double residual_norm = 0.0;
  /// Arclength step that produced this point (first_step_eps for the first point).
  double ds = 0.0;
  /// Unit tangent in (p, nu) at this point.
  Eigen::VectorXd tangent;
};

enum class Termination { max_steps, amplitude_cap, nu_bound, newton_failure, domain_violation };
std::string to_string(Termination t);

struct Branch {
  BifurcationPoint onset;
  ReducedProfile kernel;
  std::vector<BranchPoint> points;
  Termination termination = Termination::max_steps;
  std::string detail;
};

Branch continue_branch(const LatticeConfig& cfg, const Potential& pot, const StandingWave& sw,
                       const BifurcationPoint& onset, const ContinuationOptions& opts = {});

/// Re-solves an accepted point at another harmonic cutoff on the hyperplane
/// through it orthogonal to its tangent.
BranchPoint resolve_point(const LatticeConfig& cfg, const Potential& pot, const StandingWave& sw,
                          const BranchPoint& point, int harmonics,
                          const ContinuationOptions& opts = {});

}  // namespace dnls
