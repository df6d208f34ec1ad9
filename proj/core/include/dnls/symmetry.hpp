/*
 * symmetry.hpp: group action on loops and the dihedral fixed-point space
 *
 * Loops x_j(t) are real, 2*pi-periodic and stored spectrally,
 *   x_j(t) = sum_{|l| <= N} c_{j,l} e^{i l t},   c_{j,-l} = conj(c_{j,l}),
 * so only c_{j,0..N} in C^2 are kept. The generators act as
 *   S x_j(t)     = e^{-m zeta J} x_{j+1}(t)        (lattice shift)
 *   T_phi x_j(t) = x_j(t + phi)                    (time shift)
 *   K x_j(t)     = R x_{-j}(-t)                    (reflection)
 * with K S = S^{-1} K and K T_phi = T_{-phi} K.
 *
 * The fixed space of <S T_{-k zeta}, K> is parametrized by site n (index 0):
 *   x_j(t) = e^{j m zeta J} x_n(t + j k zeta),   x_n(t) = R x_n(-t),
 * i.e. the first component of x_n is a cosine series, the second a sine series.
 */
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "dnls/lattice.hpp"

namespace dnls {

/// Element S^shift T_phase K^reflect.
struct GroupElement {
  int shift = 0;
  double phase = 0.0;
  bool reflect = false;

  static GroupElement identity() { return {}; }
  static GroupElement lattice_shift(int s = 1) { return {s, 0.0, false}; }
  static GroupElement time_shift(double phi) { return {0, phi, false}; }
  static GroupElement reflection() { return {0, 0.0, true}; }
};

/// Group product g * h (apply h first), shift taken mod n and phase mod 2 pi.
GroupElement compose(const GroupElement& g, const GroupElement& h, const LatticeConfig& cfg);

class LatticeLoop {
 public:
  LatticeLoop(int sites, int harmonics);

  int sites() const noexcept { return sites_; }
  int harmonics() const noexcept { return harmonics_; }

  Eigen::Vector2cd& coeff(int site, int l) { return coeffs_[index(site, l)]; }
  const Eigen::Vector2cd& coeff(int site, int l) const { return coeffs_[index(site, l)]; }

  /// x_site(t) in R^2.
  Eigen::Vector2d evaluate(int site, double t) const;

  /// Largest coefficient difference over all sites and harmonics.
  double distance(const LatticeLoop& other) const;
  /// Imposes real c_{j,0}.
  void enforce_real_mean();

 private:
  std::size_t index(int site, int l) const {
    return static_cast<std::size_t>(site) * (harmonics_ + 1) + static_cast<std::size_t>(l);
  }

  int sites_;
  int harmonics_;
  std::vector<Eigen::Vector2cd> coeffs_;
};

/// Symmetric profile of site n for mode k:
///   x_n(t) = (a_0 + sum_l a_l cos(l t), sum_l b_l sin(l t)),  l = 1..N.
struct ReducedProfile {
  int k = 1;
  Eigen::VectorXd cos_a;  // a_0..a_N
  Eigen::VectorXd sin_b;  // b_1..b_N (sin_b(l-1) = b_l)

  ReducedProfile() = default;
  ReducedProfile(int mode, int harmonics);

  int harmonics() const noexcept { return static_cast<int>(sin_b.size()); }
  int size() const noexcept { return 2 * harmonics() + 1; }

  /// Flat layout [a_0, a_1..a_N, b_1..b_N].
  Eigen::VectorXd flatten() const;
  static ReducedProfile unflatten(int mode, const Eigen::VectorXd& flat);

  /// Same profile with the harmonic cutoff changed (zero padded or truncated).
  ReducedProfile resized(int harmonics) const;

  /// C^2 coefficient of e^{ilt} for site n.
  Eigen::Vector2cd complex_coeff(int l) const;
};

LatticeLoop act(const GroupElement& g, const LatticeLoop& x, const LatticeConfig& cfg);

LatticeLoop embed_reduced(const ReducedProfile& p, const LatticeConfig& cfg);

/// Group average over <S T_{-k zeta}, K> restricted to site n. Left inverse of
/// embed_reduced and the identity on the fixed space.
ReducedProfile project_reduced(const LatticeLoop& x, int k, const LatticeConfig& cfg);

/// The equilibrium a_m as a constant loop.
LatticeLoop constant_loop(const LatticeState& u, int harmonics);

}  // namespace dnls
