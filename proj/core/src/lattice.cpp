#include "dnls/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace dnls {

LatticeConfig::LatticeConfig(int n, int m) : n_(n), m_(0), requested_m_(m) {
  if (n < 3) {
    throw ConfigError("lattice: n=" + std::to_string(n) + " violates n >= 3");
  }
  int reduced = ((m % n) + n) % n;
  if (2 * reduced > n) reduced = n - reduced;
  if (4 * reduced == n) {
    throw ConfigError("lattice: m=n/4 excluded (n=" + std::to_string(n) +
                      ", m=" + std::to_string(m) + ")");
  }
  m_ = reduced;
}

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::cubic:
      return "cubic";
    case PotentialKind::saturable:
      return "saturable";
    case PotentialKind::polynomial:
      return "polynomial";
  }
  return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& name) {
  if (name == "cubic") return PotentialKind::cubic;
  if (name == "saturable") return PotentialKind::saturable;
  if (name == "polynomial") return PotentialKind::polynomial;
  throw ConfigError("potential: unknown kind '" + name + "'");
}

Potential Potential::cubic(double c) {
  if (!std::isfinite(c)) throw ConfigError("potential: cubic coupling must be finite");
  return Potential(PotentialKind::cubic, {c});
}

Potential Potential::saturable(double c) {
  if (!std::isfinite(c)) throw ConfigError("potential: saturable coupling must be finite");
  return Potential(PotentialKind::saturable, {c});
}

Potential Potential::polynomial(std::vector<double> coefficients) {
  if (coefficients.empty()) {
    throw ConfigError("potential: polynomial needs at least one coefficient");
  }
  for (double p : coefficients) {
    if (!std::isfinite(p)) throw ConfigError("potential: polynomial coefficients must be finite");
  }
  return Potential(PotentialKind::polynomial, std::move(coefficients));
}

double Potential::c() const {
  if (kind_ == PotentialKind::polynomial) {
    throw ConfigError("potential: polynomial potential has no single coupling c");
  }
  return params_.front();
}

bool Potential::in_domain(double s) const noexcept {
  if (!std::isfinite(s)) return false;
  return kind_ != PotentialKind::saturable || s > -1.0;
}

void Potential::require_domain(double s) const {
  if (!in_domain(s)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "potential: argument s=" << s << " outside the domain of " << to_string(kind_)
        << (kind_ == PotentialKind::saturable ? " (requires s > -1)" : "");
    throw DomainError(msg.str());
  }
}

double Potential::value(double s) const { return derivative(s, 0); }
double Potential::first(double s) const { return derivative(s, 1); }
double Potential::second(double s) const { return derivative(s, 2); }

double Potential::derivative(double s, int order) const {
  if (order < 0 || order > 2) {
    throw ConfigError("potential: derivative order must be 0, 1 or 2");
  }
  require_domain(s);
  switch (kind_) {
    case PotentialKind::cubic: {
      const double c = params_[0];
      if (order == 0) return 0.5 * c * s * s;
      if (order == 1) return c * s;
      return c;
    }
    case PotentialKind::saturable: {
      const double c = params_[0];
      if (order == 0) return c * std::log1p(s);
      if (order == 1) return c / (1.0 + s);
      return -c / ((1.0 + s) * (1.0 + s));
    }
    case PotentialKind::polynomial: {
      // Horner on the order-th derivative's coefficients.
      double acc = 0.0;
      const int degree = static_cast<int>(params_.size()) - 1;
      for (int i = degree; i >= order; --i) {
        double coeff = params_[i];
        for (int f = 0; f < order; ++f) coeff *= static_cast<double>(i - f);
        acc = acc * s + coeff;
      }
      return acc;
    }
  }
  return 0.0;
}

double potential_derivatives(const Potential& pot, double s, int order) {
  return pot.derivative(s, order);
}

void require_state(const LatticeConfig& cfg, const LatticeState& u) {
  if (u.size() != cfg.dim()) {
    throw ConfigError("lattice: state has length " + std::to_string(u.size()) + ", expected 2n=" +
                      std::to_string(cfg.dim()));
  }
}

StandingWave make_standing_wave(const LatticeConfig& cfg, const Potential& pot, double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) {
    throw ConfigError("standing wave: amplitude must satisfy a >= 0");
  }
  StandingWave sw;
  sw.a = a;
  const double half = 0.5 * cfg.m() * cfg.zeta();
  sw.omega = 4.0 * std::sin(half) * std::sin(half) - pot.first(a * a);
  sw.equilibrium = LatticeState::Zero(cfg.dim());
  for (int j = 0; j < cfg.n(); ++j) {
    const double theta = j * cfg.m() * cfg.zeta();
    sw.equilibrium(2 * j) = a * std::cos(theta);
    sw.equilibrium(2 * j + 1) = a * std::sin(theta);
  }
  return sw;
}

double hamiltonian(const LatticeConfig& cfg, const Potential& pot, double omega,
                   const LatticeState& u) {
  require_state(cfg, u);
  const int n = cfg.n();
  double sum = 0.0;
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    const double s = u(2 * j) * u(2 * j) + u(2 * j + 1) * u(2 * j + 1);
    const double dx = u(2 * jp) - u(2 * j);
    const double dy = u(2 * jp + 1) - u(2 * j + 1);
    sum += pot.value(s) + omega * s - (dx * dx + dy * dy);
  }
  return 0.5 * sum;
}

LatticeState gradient(const LatticeConfig& cfg, const Potential& pot, double omega,
                      const LatticeState& u) {
  require_state(cfg, u);
  const int n = cfg.n();
  LatticeState g(cfg.dim());
  for (int j = 0; j < n; ++j) {
    const int jp = (j + 1) % n;
    const int jm = (j + n - 1) % n;
    const double s = u(2 * j) * u(2 * j) + u(2 * j + 1) * u(2 * j + 1);
    const double onsite = omega + pot.first(s);
    for (int d = 0; d < 2; ++d) {
      g(2 * j + d) = onsite * u(2 * j + d) + u(2 * jp + d) - 2.0 * u(2 * j + d) + u(2 * jm + d);
    }
  }
  return g;
}

Eigen::MatrixXd hessian(const LatticeConfig& cfg, const Potential& pot, double omega,
                        const LatticeState& u) {
  require_state(cfg, u);
  const int n = cfg.n();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(cfg.dim(), cfg.dim());
  for (int j = 0; j < n; ++j) {
    const Eigen::Vector2d uj = u.segment<2>(2 * j);
    const double s = uj.squaredNorm();
    const double onsite = omega + pot.first(s) - 2.0;
    h.block<2, 2>(2 * j, 2 * j) =
        onsite * Eigen::Matrix2d::Identity() + 2.0 * pot.second(s) * uj * uj.transpose();
    const int jp = (j + 1) % n;
    const int jm = (j + n - 1) % n;
    h.block<2, 2>(2 * j, 2 * jp) += Eigen::Matrix2d::Identity();
    h.block<2, 2>(2 * j, 2 * jm) += Eigen::Matrix2d::Identity();
  }
  return h;
}

Eigen::MatrixXd hessian_at_equilibrium(const LatticeConfig& cfg, const Potential& pot, double a) {
  if (!(a >= 0.0)) throw ConfigError("hessian: amplitude must satisfy a >= 0");
  return detail::equilibrium_hessian<double>(cfg.n(), cfg.m(), a, pot.second(a * a));
}

LatticeState apply_symplectic(const LatticeState& u) {
  LatticeState out(u.size());
  for (Eigen::Index j = 0; j + 1 < u.size(); j += 2) {
    out(j) = -u(j + 1);
    out(j + 1) = u(j);
  }
  return out;
}

LatticeState rotating_rhs(const LatticeConfig& cfg, const Potential& pot, double omega,
                          const LatticeState& u) {
  return -apply_symplectic(gradient(cfg, pot, omega, u));
}

LatticeState gauge_rotate(const LatticeState& u, double theta) {
  const Eigen::Matrix2d r = rotation(theta);
  LatticeState out(u.size());
  for (Eigen::Index j = 0; j + 1 < u.size(); j += 2) {
    out.segment<2>(j) = r * u.segment<2>(j);
  }
  return out;
}

LatticeState shift_sites(const LatticeState& u, int s) {
  const int n = static_cast<int>(u.size() / 2);
  LatticeState out(u.size());
  for (int j = 0; j < n; ++j) {
    const int src = (((j + s) % n) + n) % n;
    out.segment<2>(2 * j) = u.segment<2>(2 * src);
  }
  return out;
}

double power(const LatticeState& u) { return u.squaredNorm(); }

double sign_convention_error(const LatticeConfig& cfg, const Potential& pot, double a) {
  const StandingWave sw = make_standing_wave(cfg, pot, a);
  const Eigen::MatrixXd h = hessian_at_equilibrium(cfg, pot, a);
  const int dim = cfg.dim();
  const double step = 1e-6;
  double worst = 0.0;
  for (int i = 0; i < dim; ++i) {
    LatticeState up = sw.equilibrium;
    LatticeState dn = sw.equilibrium;
    up(i) += step;
    dn(i) -= step;
    const LatticeState column = (rotating_rhs(cfg, pot, sw.omega, up) -
                                 rotating_rhs(cfg, pot, sw.omega, dn)) /
                                (2.0 * step);
    const LatticeState expected = -apply_symplectic(h.col(i));
    worst = std::max(worst, (column - expected).cwiseAbs().maxCoeff());
  }
  return worst;
}

void assert_sign_convention(const LatticeConfig& cfg, const Potential& pot, double a) {
  const double err = sign_convention_error(cfg, pot, a);
  if (!(err <= 1e-6)) {
    throw NumericalError("self-test", "linearization of rotating_rhs differs from -JJ D^2H by " +
                                          std::to_string(err));
  }
}

}  // namespace dnls
