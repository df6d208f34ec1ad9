#include "dnls/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dnls {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

}  // namespace

GroupElement compose(const GroupElement& g, const GroupElement& h, const LatticeConfig& cfg) {
  const int sign = g.reflect ? -1 : 1;
  GroupElement out;
  out.shift = cfg.site(g.shift + sign * h.shift);
  out.phase = wrap_phase(g.phase + sign * h.phase);
  out.reflect = g.reflect != h.reflect;
  return out;
}

LatticeLoop::LatticeLoop(int sites, int harmonics)
    : sites_(sites),
      harmonics_(harmonics),
      coeffs_(static_cast<std::size_t>(sites) * (harmonics + 1), Eigen::Vector2cd::Zero()) {
  if (sites < 1 || harmonics < 0) throw ConfigError("loop: invalid dimensions");
}

Eigen::Vector2d LatticeLoop::evaluate(int site, double t) const {
  Eigen::Vector2d x = coeff(site, 0).real();
  for (int l = 1; l <= harmonics_; ++l) {
    const std::complex<double> e = std::polar(1.0, l * t);
    x += 2.0 * (coeff(site, l) * e).real();
  }
  return x;
}

double LatticeLoop::distance(const LatticeLoop& other) const {
  if (other.sites_ != sites_ || other.harmonics_ != harmonics_) {
    throw ConfigError("loop: cutoff mismatch");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    worst = std::max(worst, (coeffs_[i] - other.coeffs_[i]).cwiseAbs().maxCoeff());
  }
  return worst;
}

void LatticeLoop::enforce_real_mean() {
  for (int j = 0; j < sites_; ++j) {
    coeff(j, 0) = coeff(j, 0).real().cast<std::complex<double>>();
  }
}

ReducedProfile::ReducedProfile(int mode, int harmonics)
    : k(mode), cos_a(Eigen::VectorXd::Zero(harmonics + 1)), sin_b(Eigen::VectorXd::Zero(harmonics)) {
  if (harmonics < 1) throw ConfigError("profile: harmonic cutoff must be >= 1");
}

Eigen::VectorXd ReducedProfile::flatten() const {
  Eigen::VectorXd flat(size());
  flat.head(cos_a.size()) = cos_a;
  flat.tail(sin_b.size()) = sin_b;
  return flat;
}

ReducedProfile ReducedProfile::unflatten(int mode, const Eigen::VectorXd& flat) {
  if (flat.size() < 3 || flat.size() % 2 == 0) {
    throw ConfigError("profile: flat vector must have odd length 2N+1 >= 3");
  }
  const int harmonics = static_cast<int>((flat.size() - 1) / 2);
  ReducedProfile p(mode, harmonics);
  p.cos_a = flat.head(harmonics + 1);
  p.sin_b = flat.tail(harmonics);
  return p;
}

ReducedProfile ReducedProfile::resized(int harmonics) const {
  ReducedProfile p(k, harmonics);
  const int common = std::min(harmonics, this->harmonics());
  p.cos_a.head(common + 1) = cos_a.head(common + 1);
  p.sin_b.head(common) = sin_b.head(common);
  return p;
}

Eigen::Vector2cd ReducedProfile::complex_coeff(int l) const {
  using cd = std::complex<double>;
  if (l == 0) return Eigen::Vector2cd(cd(cos_a(0), 0.0), cd(0.0, 0.0));
  // a cos(lt) = 2 Re[(a/2) e^{ilt}],  b sin(lt) = 2 Re[(-i b/2) e^{ilt}]
  return Eigen::Vector2cd(cd(0.5 * cos_a(l), 0.0), cd(0.0, -0.5 * sin_b(l - 1)));
}

LatticeLoop act(const GroupElement& g, const LatticeLoop& x, const LatticeConfig& cfg) {
  if (x.sites() != cfg.n()) throw ConfigError("act: loop site count differs from n");
  const int n = cfg.n();
  const int harmonics = x.harmonics();
  const Eigen::Matrix2d r = conjugation_r();

  // K first, then T_phase, then S^shift.
  LatticeLoop y = x;
  if (g.reflect) {
    for (int j = 0; j < n; ++j) {
      for (int l = 0; l <= harmonics; ++l) {
        y.coeff(j, l) = r.cast<std::complex<double>>() * x.coeff(cfg.site(-j), l).conjugate();
      }
    }
  }
  if (g.phase != 0.0) {
    for (int j = 0; j < n; ++j) {
      for (int l = 1; l <= harmonics; ++l) y.coeff(j, l) *= std::polar(1.0, l * g.phase);
    }
  }
  const int s = cfg.site(g.shift);
  if (s == 0) return y;
  LatticeLoop out(n, harmonics);
  const Eigen::Matrix2cd rot = rotation(-s * cfg.m() * cfg.zeta()).cast<std::complex<double>>();
  for (int j = 0; j < n; ++j) {
    for (int l = 0; l <= harmonics; ++l) out.coeff(j, l) = rot * y.coeff(cfg.site(j + s), l);
  }
  return out;
}

LatticeLoop embed_reduced(const ReducedProfile& p, const LatticeConfig& cfg) {
  if (p.k < 1 || p.k > cfg.n()) throw ConfigError("embed: mode k must lie in [1, n]");
  const int n = cfg.n();
  const int harmonics = p.harmonics();
  LatticeLoop x(n, harmonics);
  for (int j = 0; j < n; ++j) {
    const Eigen::Matrix2cd rot = rotation(j * cfg.m() * cfg.zeta()).cast<std::complex<double>>();
    const double lag = j * p.k * cfg.zeta();
    for (int l = 0; l <= harmonics; ++l) {
      x.coeff(j, l) = rot * p.complex_coeff(l) * std::polar(1.0, l * lag);
    }
  }
  return x;
}

ReducedProfile project_reduced(const LatticeLoop& x, int k, const LatticeConfig& cfg) {
  if (x.sites() != cfg.n()) throw ConfigError("project: loop site count differs from n");
  if (k < 1 || k > cfg.n()) throw ConfigError("project: mode k must lie in [1, n]");
  const int n = cfg.n();
  const int harmonics = x.harmonics();
  if (harmonics < 1) throw ConfigError("project: loop needs at least one harmonic");
  const Eigen::Matrix2cd r = conjugation_r().cast<std::complex<double>>();

  ReducedProfile p(k, harmonics);
  for (int l = 0; l <= harmonics; ++l) {
    // Site-n component of the average over (S T_{-k zeta})^s, s = 0..n-1.
    Eigen::Vector2cd y = Eigen::Vector2cd::Zero();
    for (int s = 0; s < n; ++s) {
      const Eigen::Matrix2cd rot = rotation(-s * cfg.m() * cfg.zeta()).cast<std::complex<double>>();
      y += rot * x.coeff(s, l) * std::polar(1.0, -l * s * k * cfg.zeta());
    }
    y /= static_cast<double>(n);
    // Average with the reflection.
    const Eigen::Vector2cd sym = 0.5 * (y + r * y.conjugate());
    if (l == 0) {
      p.cos_a(0) = sym(0).real();
    } else {
      p.cos_a(l) = 2.0 * sym(0).real();
      p.sin_b(l - 1) = -2.0 * sym(1).imag();
    }
  }
  return p;
}

LatticeLoop constant_loop(const LatticeState& u, int harmonics) {
  const int n = static_cast<int>(u.size() / 2);
  LatticeLoop x(n, harmonics);
  for (int j = 0; j < n; ++j) x.coeff(j, 0) = u.segment<2>(2 * j).cast<std::complex<double>>();
  return x;
}

}  // namespace dnls
