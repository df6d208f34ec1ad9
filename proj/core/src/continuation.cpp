#include "dnls/continuation.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace dnls {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Eigen::VectorXd pad_state(const Eigen::VectorXd& y, int k, int harmonics) {
  const Eigen::Index dim = y.size() - 1;
  const ReducedProfile p = ReducedProfile::unflatten(k, y.head(dim)).resized(harmonics);
  Eigen::VectorXd out(p.size() + 1);
  out.head(p.size()) = p.flatten();
  out(p.size()) = y(dim);
  return out;
}

struct NewtonResult {
  bool converged = false;
  Eigen::VectorXd y;
  double residual_norm = 0.0;
  int iterations = 0;
  std::string reason;
};

// Newton on {R(p, nu) = 0, c . y = c0}; y = [p; nu].
NewtonResult bordered_newton(const GalerkinSystem& sys, Eigen::VectorXd y, const Eigen::VectorXd& c,
                             double c0, const ContinuationOptions& opts,
                             int min_iterations = 0) {
  const int dim = sys.dim();
  NewtonResult out;
  double first_norm = -1.0;
  for (int it = 0; it <= opts.max_newton_iter; ++it) {
    const Eigen::VectorXd r = sys.residual(y.head(dim), y(dim));
    const double norm = r.norm();
    const double con = c.dot(y) - c0;
    if (first_norm < 0.0) first_norm = norm;
    out.residual_norm = norm;
    out.iterations = it;
    if (!std::isfinite(norm)) {
      out.reason = "residual not finite";
      break;
    }
    const bool satisfied =
        norm <= opts.newton_tol && std::abs(con) <= 1e-12 * std::max(1.0, std::abs(c0));
    if (satisfied && it >= min_iterations) {
      out.converged = true;
      out.y = std::move(y);
      return out;
    }
    if (it == opts.max_newton_iter) {
      out.reason = "no convergence in " + std::to_string(opts.max_newton_iter) + " iterations";
      break;
    }
    if (it > 2 && norm > 1e3 * std::max(first_norm, opts.newton_tol)) {
      out.reason = "diverging";
      break;
    }
    Eigen::MatrixXd a(dim + 1, dim + 1);
    a.topRows(dim) = sys.jacobian(y.head(dim), y(dim));
    a.row(dim) = c.transpose();
    Eigen::VectorXd rhs(dim + 1);
    rhs.head(dim) = -r;
    rhs(dim) = -con;
    const Eigen::VectorXd dy = a.partialPivLu().solve(rhs);
    if (!dy.allFinite()) {
      out.reason = "singular bordered Jacobian";
      break;
    }
    y += dy;
    if (!(y(dim) > 0.0)) {
      out.reason = "frequency left R+";
      break;
    }
  }
  out.y = std::move(y);
  return out;
}

// Unit null vector of [dR/dp, dR/dnu] oriented along `previous`.
Eigen::VectorXd branch_tangent(const GalerkinSystem& sys, const Eigen::VectorXd& y,
                               const Eigen::VectorXd& previous) {
  const int dim = sys.dim();
  Eigen::MatrixXd a(dim + 1, dim + 1);
  a.topRows(dim) = sys.jacobian(y.head(dim), y(dim));
  a.row(dim) = previous.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dim + 1);
  rhs(dim) = 1.0;
  Eigen::VectorXd t = a.partialPivLu().solve(rhs);
  if (!t.allFinite() || t.norm() == 0.0) {
    throw NumericalError("continuation", "tangent system singular");
  }
  return t / t.norm();
}

BranchPoint make_point(int k, const Eigen::VectorXd& y, double residual_norm, double ds,
                       Eigen::VectorXd tangent) {
  BranchPoint pt;
  const Eigen::Index dim = y.size() - 1;
  pt.profile = ReducedProfile::unflatten(k, y.head(dim));
  pt.nu = y(dim);
  pt.amplitude = profile_amplitude(pt.profile);
  pt.residual_norm = residual_norm;
  pt.ds = ds;
  pt.tangent = std::move(tangent);
  return pt;
}

Eigen::VectorXd point_state(const BranchPoint& pt) {
  Eigen::VectorXd y(pt.profile.size() + 1);
  y.head(pt.profile.size()) = pt.profile.flatten();
  y(pt.profile.size()) = pt.nu;
  return y;
}

}  // namespace

void ContinuationOptions::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("continuation options: " + what); };
  if (harmonics < 1) fail("harmonics must be >= 1");
  if (!(newton_tol > 0.0)) fail("newton_tol must be positive");
  if (max_newton_iter < 1) fail("max_newton_iter must be positive");
  if (!(ds_min > 0.0 && ds0 > 0.0 && ds_max > 0.0)) fail("arclength steps must be positive");
  if (!(ds_min <= ds0 && ds0 <= ds_max)) fail("requires ds_min <= ds0 <= ds_max");
  if (max_steps < 1) fail("max_steps must be positive");
  if (!(first_step_eps > 0.0)) fail("first_step_eps must be positive");
  if (!(nu_min > 0.0 && nu_max > nu_min)) fail("requires 0 < nu_min < nu_max");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::max_steps:
      return "max_steps";
    case Termination::amplitude_cap:
      return "amplitude_cap";
    case Termination::nu_bound:
      return "nu_bound";
    case Termination::newton_failure:
      return "newton_failure";
    case Termination::domain_violation:
      return "domain_violation";
  }
  return "unknown";
}

GalerkinSystem::GalerkinSystem(LatticeConfig cfg, Potential pot, StandingWave sw, int k,
                               int harmonics)
    : cfg_(std::move(cfg)),
      pot_(std::move(pot)),
      sw_(std::move(sw)),
      k_(k),
      harmonics_(harmonics),
      grid_(4 * harmonics + 1) {
  if (k < 1 || k > cfg_.n()) throw ConfigError("galerkin: mode k must lie in [1, n]");
  if (harmonics < 1) throw ConfigError("galerkin: harmonic cutoff must be >= 1");
  const double lag = k * cfg_.zeta();
  auto table = [&](double offset, bool sine) {
    Eigen::MatrixXd t(grid_, harmonics_ + 1);
    for (int i = 0; i < grid_; ++i) {
      const double time = kTwoPi * i / grid_ + offset;
      for (int l = 0; l <= harmonics_; ++l) t(i, l) = sine ? std::sin(l * time) : std::cos(l * time);
    }
    return t;
  };
  cos_ = table(0.0, false);
  sin_ = table(0.0, true);
  cos_fwd_ = table(lag, false);
  sin_fwd_ = table(lag, true);
  cos_back_ = table(-lag, false);
  sin_back_ = table(-lag, true);
  rot_fwd_ = rotation(cfg_.m() * cfg_.zeta());
  rot_back_ = rotation(-cfg_.m() * cfg_.zeta());
}

Eigen::VectorXd GalerkinSystem::residual(const Eigen::VectorXd& p, double nu) const {
  if (p.size() != dim()) throw ConfigError("galerkin: profile size differs from 2N+1");
  if (!(nu > 0.0)) throw NumericalError("residual", "frequency must be positive");
  const int n_h = harmonics_;
  const Eigen::VectorXd a = p.head(n_h + 1);
  Eigen::VectorXd b(n_h + 1);
  b(0) = 0.0;
  b.tail(n_h) = p.tail(n_h);

  const Eigen::VectorXd x1 = cos_ * a;
  const Eigen::VectorXd x2 = sin_ * b;
  const Eigen::VectorXd x1f = cos_fwd_ * a;
  const Eigen::VectorXd x2f = sin_fwd_ * b;
  const Eigen::VectorXd x1b = cos_back_ * a;
  const Eigen::VectorXd x2b = sin_back_ * b;

  Eigen::VectorXd g1(grid_), g2(grid_);
  const double amp = sw_.a;
  for (int i = 0; i < grid_; ++i) {
    const Eigen::Vector2d u0(amp + x1(i), x2(i));
    const double onsite = sw_.omega + pot_.first(u0.squaredNorm()) - 2.0;
    const Eigen::Vector2d up = rot_fwd_ * Eigen::Vector2d(amp + x1f(i), x2f(i));
    const Eigen::Vector2d um = rot_back_ * Eigen::Vector2d(amp + x1b(i), x2b(i));
    const Eigen::Vector2d g = onsite * u0 + up + um;
    g1(i) = g(0);
    g2(i) = g(1);
  }

  const double scale = -2.0 / (nu * grid_);
  const Eigen::VectorXd proj_a = scale * (cos_.transpose() * g1);
  const Eigen::VectorXd proj_b = scale * (sin_.transpose() * g2);

  Eigen::VectorXd r(dim());
  r(0) = 0.5 * proj_a(0);
  for (int l = 1; l <= n_h; ++l) {
    r(l) = proj_a(l) - l * b(l);
    r(n_h + l) = proj_b(l) - l * a(l);
  }
  return r;
}

Eigen::MatrixXd GalerkinSystem::jacobian(const Eigen::VectorXd& p, double nu,
                                         FiniteDifference scheme) const {
  const int d = dim();
  Eigen::MatrixXd jac(d, d + 1);
  Eigen::VectorXd y(d + 1);
  y.head(d) = p;
  y(d) = nu;
  auto eval = [&](const Eigen::VectorXd& v) { return residual(v.head(d), v(d)); };
  if (scheme == FiniteDifference::forward) {
    const Eigen::VectorXd r0 = eval(y);
    for (int i = 0; i <= d; ++i) {
      const double h = 1.5e-8 * std::max(1.0, std::abs(y(i)));
      Eigen::VectorXd yp = y;
      yp(i) += h;
      jac.col(i) = (eval(yp) - r0) / (yp(i) - y(i));
    }
  } else {
    for (int i = 0; i <= d; ++i) {
      const double h = 6e-6 * std::max(1.0, std::abs(y(i)));
      Eigen::VectorXd yp = y;
      Eigen::VectorXd ym = y;
      yp(i) += h;
      ym(i) -= h;
      jac.col(i) = (eval(yp) - eval(ym)) / (yp(i) - ym(i));
    }
  }
  return jac;
}

Eigen::VectorXd residual(const ReducedProfile& p, double nu, const LatticeConfig& cfg,
                         const Potential& pot, const StandingWave& sw) {
  const GalerkinSystem sys(cfg, pot, sw, p.k, p.harmonics());
  return sys.residual(p.flatten(), nu);
}

LatticeLoop vector_field(const LatticeConfig& cfg, const Potential& pot, const StandingWave& sw,
                         double nu, const LatticeLoop& x) {
  if (x.sites() != cfg.n()) throw ConfigError("vector_field: loop site count differs from n");
  if (!(nu > 0.0)) throw NumericalError("vector_field", "frequency must be positive");
  const int n = cfg.n();
  const int harmonics = x.harmonics();
  const int grid = 4 * harmonics + 1;
  using cd = std::complex<double>;

  LatticeLoop grad_coeffs(n, harmonics);
  for (int i = 0; i < grid; ++i) {
    const double t = kTwoPi * i / grid;
    LatticeState u = sw.equilibrium;
    for (int j = 0; j < n; ++j) u.segment<2>(2 * j) += x.evaluate(j, t);
    const LatticeState g = gradient(cfg, pot, sw.omega, u);
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2cd gj = g.segment<2>(2 * j).cast<cd>();
      for (int l = 0; l <= harmonics; ++l) {
        grad_coeffs.coeff(j, l) += gj * std::polar(1.0 / grid, -l * t);
      }
    }
  }

  const Eigen::Matrix2cd jmat = symplectic_j().cast<cd>();
  LatticeLoop f(n, harmonics);
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l <= harmonics; ++l) {
      f.coeff(j, l) = jmat * (cd(0.0, l) * x.coeff(j, l)) - grad_coeffs.coeff(j, l) / nu;
    }
  }
  f.enforce_real_mean();
  return f;
}

double profile_amplitude(const ReducedProfile& p) {
  double ms = p.cos_a(0) * p.cos_a(0);
  ms += 0.5 * (p.cos_a.tail(p.harmonics()).squaredNorm() + p.sin_b.squaredNorm());
  return std::sqrt(ms);
}

OnsetKernel onset_kernel(const LatticeConfig& cfg, const Potential& pot, const StandingWave& sw,
                         int k, int sign, int harmonics) {
  if (k < 1 || k >= cfg.n()) throw ConfigError("onset: mode k must lie in [1, n-1]");
  const BlockData b = block_data(cfg, pot, sw.a, k);
  const double scale = std::max(1.0, std::abs(b.beta));
  if (!b.real_pair() || std::abs(b.nu_plus - b.nu_minus) <= 1e-6 * scale) {
    std::ostringstream msg;
    msg << "double eigenvalue at k=" << k << " (phi_k = " << *b.phi
        << "): 1:1 resonance nu_k^+ = nu_k^-, Hamiltonian-Hopf point not continued";
    throw ResonanceError("onset", msg.str());
  }
  const double nu = sign > 0 ? b.nu_plus.real() : b.nu_minus.real();
  if (!(nu > 0.0)) {
    throw ConfigError("onset: nu_k^" + std::string(sign > 0 ? "+" : "-") +
                      " is not positive for k=" + std::to_string(k));
  }

  const GalerkinSystem sys(cfg, pot, sw, k, harmonics);
  const int d = sys.dim();
  const Eigen::MatrixXd jac =
      sys.jacobian(Eigen::VectorXd::Zero(d), nu, FiniteDifference::central).leftCols(d);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = 1e-7 * sv(0);
  int kernel = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) kernel += sv(i) <= cutoff;
  if (kernel != 1) {
    throw ResonanceError("onset", "reduced linearization at nu=" + std::to_string(nu) +
                                      " has kernel dimension " + std::to_string(kernel));
  }
  Eigen::VectorXd v = svd.matrixV().col(d - 1);
  v /= v.norm();
  if (v(1) < 0.0 || (v(1) == 0.0 && v(harmonics + 1) < 0.0)) v = -v;

  OnsetKernel out;
  out.tangent = ReducedProfile::unflatten(k, v);
  out.nu_onset = nu;
  out.kernel_dimension = kernel;
  return out;
}

Branch continue_branch(const LatticeConfig& cfg, const Potential& pot, const StandingWave& sw,
                       const BifurcationPoint& onset, const ContinuationOptions& opts) {
  opts.validate();
  if (onset.suppressed()) {
    throw ResonanceError("continuation",
                         "onset k=" + std::to_string(onset.k) +
                             " is the smaller frequency of a 1:l resonance (l >= 2); refused");
  }
  if (onset.has(FlagKind::resonance_1_to_1)) {
    throw ResonanceError("continuation", "onset k=" + std::to_string(onset.k) +
                                             " sits on a 1:1 resonance (double eigenvalue)");
  }
  const OnsetKernel kernel = onset_kernel(cfg, pot, sw, onset.k, onset.sign, opts.harmonics);
  const GalerkinSystem sys(cfg, pot, sw, onset.k, opts.harmonics);
  const int d = sys.dim();
  const double amp_cap =
      opts.amplitude_cap > 0.0 ? opts.amplitude_cap : (sw.a > 0.0 ? 10.0 * sw.a : 1.0);

  Branch branch;
  branch.onset = onset;
  branch.kernel = kernel.tangent;

  const Eigen::VectorXd tau = kernel.tangent.flatten();
  Eigen::VectorXd y(d + 1);
  y.head(d) = opts.first_step_eps * tau;
  y(d) = kernel.nu_onset;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
  c.head(d) = tau;

  Eigen::VectorXd tangent;
  try {
    NewtonResult first = bordered_newton(sys, y, c, opts.first_step_eps, opts);
    if (!first.converged) {
      throw NumericalError("continuation", "first step off the trivial branch failed: " +
                                               first.reason);
    }
    Eigen::VectorXd seed = Eigen::VectorXd::Zero(d + 1);
    seed.head(d) = tau;
    tangent = branch_tangent(sys, first.y, seed);
    y = first.y;
    branch.points.push_back(
        make_point(onset.k, y, first.residual_norm, opts.first_step_eps, tangent));
  } catch (const DomainError& e) {
    branch.termination = Termination::domain_violation;
    branch.detail = e.what();
    return branch;
  }

  double ds = opts.ds0;
  branch.termination = Termination::max_steps;
  while (static_cast<int>(branch.points.size()) < opts.max_steps) {
    std::optional<NewtonResult> accepted;
    std::string last_reason;
    try {
      while (true) {
        const Eigen::VectorXd predicted = y + ds * tangent;
        NewtonResult res = bordered_newton(sys, predicted, tangent, tangent.dot(predicted), opts);
        if (res.converged) {
          accepted = std::move(res);
          break;
        }
        last_reason = res.reason;
        ds *= 0.5;
        if (ds < opts.ds_min) break;
      }
    } catch (const DomainError& e) {
      branch.termination = Termination::domain_violation;
      branch.detail = e.what();
      return branch;
    }
    if (!accepted) {
      branch.termination = Termination::newton_failure;
      branch.detail = "corrector failed with ds < ds_min: " + last_reason;
      return branch;
    }

    const Eigen::VectorXd& y_new = accepted->y;
    const double nu_new = y_new(d);
    if (!(nu_new > opts.nu_min && nu_new < opts.nu_max)) {
      branch.termination = Termination::nu_bound;
      branch.detail = "nu=" + std::to_string(nu_new) + " outside (nu_min, nu_max)";
      return branch;
    }
    const double amp = profile_amplitude(ReducedProfile::unflatten(onset.k, y_new.head(d)));
    if (amp > amp_cap) {
      branch.termination = Termination::amplitude_cap;
      branch.detail = "amplitude " + std::to_string(amp) + " exceeds cap " + std::to_string(amp_cap);
      return branch;
    }
    tangent = branch_tangent(sys, y_new, tangent);
    branch.points.push_back(make_point(onset.k, y_new, accepted->residual_norm, ds, tangent));
    y = y_new;
    if (accepted->iterations <= 3) ds = std::min(opts.ds_max, 1.5 * ds);
  }
  return branch;
}

BranchPoint resolve_point(const LatticeConfig& cfg, const Potential& pot, const StandingWave& sw,
                          const BranchPoint& point, int harmonics,
                          const ContinuationOptions& opts) {
  const int k = point.profile.k;
  const GalerkinSystem sys(cfg, pot, sw, k, harmonics);
  const Eigen::VectorXd y = pad_state(point_state(point), k, harmonics);
  Eigen::VectorXd t = pad_state(point.tangent, k, harmonics);
  t /= t.norm();
  NewtonResult res = bordered_newton(sys, y, t, t.dot(y), opts, 2);
  if (!res.converged) {
    throw NumericalError("continuation", "re-solve at N=" + std::to_string(harmonics) +
                                             " failed: " + res.reason);
  }
  return make_point(k, res.y, res.residual_norm, point.ds, t);
}

}  // namespace dnls
