/*
 * lattice.hpp: n-site periodic DNLS lattice in the rotating frame
 *
 * Complex sites u_j are stored as adjacent real pairs (Re u_j, Im u_j), site j
 * (0-based, indices mod n) at entries 2j, 2j+1. Multiplication by i is the
 * symplectic matrix J = [[0,-1],[1,0]]; complex conjugation is R = diag(1,-1).
 *
 *   H(u)    = 1/2 sum_j { V(|u_j|^2) + omega |u_j|^2 - |u_{j+1} - u_j|^2 }
 *   grad_j  = (omega + V'(|u_j|^2)) u_j + u_{j+1} - 2 u_j + u_{j-1}
 *   JJ du/dt = grad H(u),  JJ = diag(J, ..., J)
 *
 * The standing wave a_j = a exp(j m zeta J) e_1 is an equilibrium when
 *   omega = 4 sin^2(m zeta / 2) - V'(a^2).
 */
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "dnls/errors.hpp"

namespace dnls {

using LatticeState = Eigen::VectorXd;

/// Ring of n sites carrying the standing-wave wavenumber m.
///
/// m is reduced modulo n and then reflected into [0, n/2]; waves m and n-m are
/// related by complex conjugation. The value m = n/4 is rejected.
class LatticeConfig {
 public:
  LatticeConfig(int n, int m);

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  int requested_m() const noexcept { return requested_m_; }
  double zeta() const noexcept { return 2.0 * std::numbers::pi / n_; }
  int dim() const noexcept { return 2 * n_; }

  /// Site index j taken modulo n into [0, n).
  int site(int j) const noexcept { return ((j % n_) + n_) % n_; }

 private:
  int n_;
  int m_;
  int requested_m_;
};

enum class PotentialKind { cubic, saturable, polynomial };

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

/// On-site nonlinearity V(s), s = |u_j|^2.
///
///   cubic       V(s) = c s^2 / 2
///   saturable   V(s) = c ln(1 + s),   s > -1
///   polynomial  V(s) = sum_i p_i s^i
class Potential {
 public:
  static Potential cubic(double c);
  static Potential saturable(double c);
  static Potential polynomial(std::vector<double> coefficients);

  PotentialKind kind() const noexcept { return kind_; }
  const std::vector<double>& params() const noexcept { return params_; }
  /// Coupling constant c of the cubic and saturable potentials.
  double c() const;

  bool in_domain(double s) const noexcept;
  double value(double s) const;
  double first(double s) const;
  double second(double s) const;
  double derivative(double s, int order) const;

 private:
  Potential(PotentialKind kind, std::vector<double> params)
      : kind_(kind), params_(std::move(params)) {}
  void require_domain(double s) const;

  PotentialKind kind_;
  std::vector<double> params_;
};

/// V(s), V'(s) or V''(s) for order 0, 1, 2.
double potential_derivatives(const Potential& pot, double s, int order);

struct StandingWave {
  double a = 0.0;
  double omega = 0.0;
  LatticeState equilibrium;
};

/// e^{theta J} = cos(theta) I + sin(theta) J.
inline Eigen::Matrix2d rotation(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

inline Eigen::Matrix2d symplectic_j() {
  Eigen::Matrix2d j;
  j << 0.0, -1.0, 1.0, 0.0;
  return j;
}

inline Eigen::Matrix2d conjugation_r() {
  Eigen::Matrix2d r;
  r << 1.0, 0.0, 0.0, -1.0;
  return r;
}

StandingWave make_standing_wave(const LatticeConfig& cfg, const Potential& pot, double a);

double hamiltonian(const LatticeConfig& cfg, const Potential& pot, double omega,
                   const LatticeState& u);
LatticeState gradient(const LatticeConfig& cfg, const Potential& pot, double omega,
                      const LatticeState& u);
/// D^2 H(u) at an arbitrary state.
Eigen::MatrixXd hessian(const LatticeConfig& cfg, const Potential& pot, double omega,
                        const LatticeState& u);
/// D^2 H(a_m) from its block form: identity neighbours, diagonal blocks
/// -2 cos(m zeta) I + 2 a^2 V''(a^2) e^{j m zeta J} e_1 e_1^T e^{-j m zeta J}.
Eigen::MatrixXd hessian_at_equilibrium(const LatticeConfig& cfg, const Potential& pot, double a);

/// du/dt = -JJ grad H(u).
LatticeState rotating_rhs(const LatticeConfig& cfg, const Potential& pot, double omega,
                          const LatticeState& u);

LatticeState apply_symplectic(const LatticeState& u);
LatticeState gauge_rotate(const LatticeState& u, double theta);
/// (shift u)_j = u_{j+s}.
LatticeState shift_sites(const LatticeState& u, int s);
/// P(u) = sum_j |u_j|^2.
double power(const LatticeState& u);

/// max |FD(rotating_rhs)(a_m) + JJ D^2H(a_m)|, pins the sign convention of
/// the rotating-frame vector field.
double sign_convention_error(const LatticeConfig& cfg, const Potential& pot, double a);
/// Throws NumericalError when sign_convention_error exceeds 1e-6.
void assert_sign_convention(const LatticeConfig& cfg, const Potential& pot, double a);

void require_state(const LatticeConfig& cfg, const LatticeState& u);

namespace detail {

// Block-form equilibrium Hessian in an arbitrary scalar type; the long double
// instance feeds the dense spectrum oracle.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> equilibrium_hessian(int n, int m, Scalar a,
                                                                          Scalar v2) {
  using std::cos;
  using std::sin;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar zeta = Scalar(2) * pi / Scalar(n);
  const Scalar diag = Scalar(-2) * cos(Scalar(m) * zeta);
  const Scalar rank_one = Scalar(2) * a * a * v2;
  Mat h = Mat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    const Scalar theta = Scalar(j % n) * Scalar(m) * zeta;
    const Scalar cj = cos(theta);
    const Scalar sj = sin(theta);
    // e^{theta J} e_1 = (cos, sin)
    h(2 * j, 2 * j) = diag + rank_one * cj * cj;
    h(2 * j, 2 * j + 1) = rank_one * cj * sj;
    h(2 * j + 1, 2 * j) = rank_one * cj * sj;
    h(2 * j + 1, 2 * j + 1) = diag + rank_one * sj * sj;
    const int jp = (j + 1) % n;
    const int jm = (j + n - 1) % n;
    for (int d = 0; d < 2; ++d) {
      h(2 * j + d, 2 * jp + d) += Scalar(1);
      h(2 * j + d, 2 * jm + d) += Scalar(1);
    }
  }
  return h;
}

}  // namespace detail

}  // namespace dnls
