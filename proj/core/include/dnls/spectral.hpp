/*
 * spectral.hpp: Fourier-block diagonalization of D^2 H(a_m) and stability
 *
 *   T_k z = n^{-1/2} (e^{j (ik I + mJ) zeta} z)_{j=1..n}
 *   D^2H(a_m) T_k z = T_k B_k z,
 *   B_k = -alpha_k I + beta_k (iJ) + 2 a^2 V''(a^2) diag(1, 0)
 *   alpha_k = 4 cos(m zeta) sin^2(k zeta / 2),  beta_k = 2 sin(m zeta) sin(k zeta)
 *   phi_k = 2 a^2 V''(a^2) / alpha_k,  gamma_k = 1 - (beta_k / alpha_k)^2
 *   nu_k^{+-} = beta_k +- sqrt(alpha_k^2 (1 - phi_k))
 *
 * JJ D^2H(a_m) has eigenvalues i nu_k^{+-} (k = 1..n-1) and a double zero
 * from the gauge symmetry.
 */
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

#include "dnls/lattice.hpp"

namespace dnls {

struct BlockData {
  int k = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::optional<double> phi;    // unset for k = n
  std::optional<double> gamma;  // unset for k = n
  double rank_one = 0.0;        // 2 a^2 V''(a^2)
  Eigen::Matrix2cd B;
  std::complex<double> nu_plus;
  std::complex<double> nu_minus;

  /// nu_k^{+-} real, i.e. phi_k <= 1 (always true for k = n).
  bool real_pair() const noexcept { return nu_plus.imag() == 0.0 && nu_minus.imag() == 0.0; }

  /// L^{-1} (iJ B_k) L, L = diag(1, i): [[beta, -alpha], [alpha (phi - 1), beta]].
  Eigen::Matrix2d reduced_matrix() const;

  /// det B_k = beta^2 - alpha^2 (1 - phi) for k < n, 0 for k = n.
  double determinant() const;
};

/// T_k z as a complex 2n-vector.
Eigen::VectorXcd block_basis(const LatticeConfig& cfg, int k, const Eigen::Vector2cd& z);

BlockData block_data(const LatticeConfig& cfg, const Potential& pot, double a, int k);
/// Blocks k = 1..n in order.
std::vector<BlockData> all_blocks(const LatticeConfig& cfg, const Potential& pot, double a);

/// Dense eigenvalues of JJ D^2H(a_m), no use of the block structure. Computed
/// in extended precision so that the defective gauge zero and Hamiltonian-Hopf
/// collisions resolve well below 1e-8.
std::vector<std::complex<double>> full_spectrum(const LatticeConfig& cfg, const Potential& pot,
                                                double a);

/// {i nu_k^{+-} : k = 1..n-1} U {0, 0}, assembled from block_data.
std::vector<std::complex<double>> closed_form_spectrum(const LatticeConfig& cfg,
                                                       const Potential& pot, double a);

/// Largest distance in a greedy nearest-pair matching of two equal-size
/// multisets (infinity when the sizes differ).
double spectrum_distance(std::vector<std::complex<double>> lhs,
                         std::vector<std::complex<double>> rhs);

/// sigma_m: sgn V''(a^2) for m in [0, n/4), -sgn V''(a^2) for m in (n/4, n/2].
/// m = 0 uses the first rule. Zero when V''(a^2) = 0.
int sigma_m(const LatticeConfig& cfg, const Potential& pot, double a);

struct ModeStability {
  int k = 0;
  double phi = 0.0;
  double gamma = 0.0;
  std::complex<double> nu_plus;
  std::complex<double> nu_minus;
  bool real = true;
};

struct StabilityVerdict {
  int sigma = 0;
  double phi_1 = 0.0;
  /// Linear-stability criterion holds: sigma < 0, or sigma > 0 and phi_1 < 1.
  /// sigma = 0 (V''(a^2) = 0) gives phi_k = 0 for all k and counts as stable.
  bool stable = false;
  /// Dense-spectrum answer, meaningful also where the criterion says nothing.
  bool oracle_stable = false;
  double max_real_part = 0.0;
  std::vector<ModeStability> per_k;  // k = 1..n-1
};

StabilityVerdict classify_stability(const LatticeConfig& cfg, const Potential& pot, double a);

}  // namespace dnls
