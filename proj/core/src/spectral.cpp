#include "dnls/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

namespace dnls {

namespace {

using ld = long double;

// sin(pi p / q) with exact zeros at integer multiples of pi.
ld sin_pi_ratio(long p, long q) {
  if (p % q == 0) return 0.0L;
  return std::sin(std::numbers::pi_v<ld> * static_cast<ld>(p) / static_cast<ld>(q));
}

ld cos_pi_ratio(long p, long q) {
  if ((2 * p) % q == 0 && ((2 * p) / q) % 2 != 0) return 0.0L;
  return std::cos(std::numbers::pi_v<ld> * static_cast<ld>(p) / static_cast<ld>(q));
}

}  // namespace

Eigen::Matrix2d BlockData::reduced_matrix() const {
  Eigen::Matrix2d m;
  // alpha (phi - 1) = rank_one - alpha also covers k = n.
  m << beta, -alpha, rank_one - alpha, beta;
  return m;
}

double BlockData::determinant() const {
  return beta * beta - alpha * (alpha - rank_one);
}

Eigen::VectorXcd block_basis(const LatticeConfig& cfg, int k, const Eigen::Vector2cd& z) {
  if (k < 1 || k > cfg.n()) throw ConfigError("block_basis: k must lie in [1, n]");
  const int n = cfg.n();
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  Eigen::VectorXcd out(cfg.dim());
  for (int site = 1; site <= n; ++site) {
    // e^{j (ik I + mJ) zeta} = e^{i j k zeta} e^{j m zeta J}
    const Eigen::Matrix2cd rot =
        rotation(site * cfg.m() * cfg.zeta()).cast<std::complex<double>>();
    const std::complex<double> phase = std::polar(1.0, site * k * cfg.zeta());
    out.segment<2>(2 * cfg.site(site)) = scale * phase * rot * z;
  }
  return out;
}

BlockData block_data(const LatticeConfig& cfg, const Potential& pot, double a, int k) {
  if (k < 1 || k > cfg.n()) throw ConfigError("block_data: k must lie in [1, n]");
  const long n = cfg.n();
  const long m = cfg.m();
  BlockData b;
  b.k = k;

  const ld rank_one = 2.0L * static_cast<ld>(a) * static_cast<ld>(a) * pot.second(a * a);
  b.rank_one = static_cast<double>(rank_one);

  ld alpha = 0.0L;
  ld beta = 0.0L;
  if (k != n) {
    // zeta = 2 pi / n: m zeta = pi (2m)/n, k zeta / 2 = pi k / n, k zeta = pi (2k)/n.
    const ld half = sin_pi_ratio(k, n);
    alpha = 4.0L * cos_pi_ratio(2 * m, n) * half * half;
    beta = 2.0L * sin_pi_ratio(2 * m, n) * sin_pi_ratio(2 * k, n);
  }
  b.alpha = static_cast<double>(alpha);
  b.beta = static_cast<double>(beta);

  using cd = std::complex<double>;
  b.B << cd(b.rank_one - b.alpha, 0.0), cd(0.0, -b.beta), cd(0.0, b.beta), cd(-b.alpha, 0.0);

  if (k == n) {
    b.nu_plus = 0.0;
    b.nu_minus = 0.0;
    return b;
  }
  b.phi = static_cast<double>(rank_one / alpha);
  b.gamma = static_cast<double>(1.0L - (beta / alpha) * (beta / alpha));

  // alpha^2 (1 - phi) = alpha (alpha - 2 a^2 V'')
  const ld disc = alpha * (alpha - rank_one);
  if (disc >= 0.0L) {
    const ld root = std::sqrt(disc);
    b.nu_plus = static_cast<double>(beta + root);
    b.nu_minus = static_cast<double>(beta - root);
  } else {
    const ld root = std::sqrt(-disc);
    b.nu_plus = cd(static_cast<double>(beta), static_cast<double>(root));
    b.nu_minus = cd(static_cast<double>(beta), -static_cast<double>(root));
  }
  return b;
}

std::vector<BlockData> all_blocks(const LatticeConfig& cfg, const Potential& pot, double a) {
  std::vector<BlockData> blocks;
  blocks.reserve(cfg.n());
  for (int k = 1; k <= cfg.n(); ++k) blocks.push_back(block_data(cfg, pot, a, k));
  return blocks;
}

std::vector<std::complex<double>> full_spectrum(const LatticeConfig& cfg, const Potential& pot,
                                                double a) {
  using MatLd = Eigen::Matrix<ld, Eigen::Dynamic, Eigen::Dynamic>;
  const MatLd h = detail::equilibrium_hessian<ld>(cfg.n(), cfg.m(), static_cast<ld>(a),
                                                  static_cast<ld>(pot.second(a * a)));
  MatLd jh(h.rows(), h.cols());
  for (int j = 0; j < cfg.n(); ++j) {
    jh.row(2 * j) = -h.row(2 * j + 1);
    jh.row(2 * j + 1) = h.row(2 * j);
  }
  Eigen::EigenSolver<MatLd> solver(jh, false);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver", "dense eigenvalue iteration did not converge");
  }
  std::vector<std::complex<double>> out;
  out.reserve(jh.rows());
  for (Eigen::Index i = 0; i < jh.rows(); ++i) {
    const std::complex<ld> ev = solver.eigenvalues()(i);
    out.emplace_back(static_cast<double>(ev.real()), static_cast<double>(ev.imag()));
  }
  return out;
}

std::vector<std::complex<double>> closed_form_spectrum(const LatticeConfig& cfg,
                                                       const Potential& pot, double a) {
  const std::complex<double> i(0.0, 1.0);
  std::vector<std::complex<double>> out;
  out.reserve(cfg.dim());
  for (int k = 1; k < cfg.n(); ++k) {
    const BlockData b = block_data(cfg, pot, a, k);
    out.push_back(i * b.nu_plus);
    out.push_back(i * b.nu_minus);
  }
  out.emplace_back(0.0, 0.0);
  out.emplace_back(0.0, 0.0);
  return out;
}

double spectrum_distance(std::vector<std::complex<double>> lhs,
                         std::vector<std::complex<double>> rhs) {
  if (lhs.size() != rhs.size()) return std::numeric_limits<double>::infinity();
  const std::size_t count = lhs.size();
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  pairs.reserve(count * count);
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) pairs.emplace_back(std::abs(lhs[i] - rhs[j]), i, j);
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<bool> used_l(count, false), used_r(count, false);
  double worst = 0.0;
  std::size_t matched = 0;
  for (const auto& [d, i, j] : pairs) {
    if (used_l[i] || used_r[j]) continue;
    used_l[i] = used_r[j] = true;
    worst = std::max(worst, d);
    if (++matched == count) break;
  }
  return worst;
}

int sigma_m(const LatticeConfig& cfg, const Potential& pot, double a) {
  const double v2 = pot.second(a * a);
  const int s = (v2 > 0.0) - (v2 < 0.0);
  return 4 * cfg.m() < cfg.n() ? s : -s;
}

StabilityVerdict classify_stability(const LatticeConfig& cfg, const Potential& pot, double a) {
  StabilityVerdict v;
  v.sigma = sigma_m(cfg, pot, a);
  for (int k = 1; k < cfg.n(); ++k) {
    const BlockData b = block_data(cfg, pot, a, k);
    ModeStability row;
    row.k = k;
    row.phi = *b.phi;
    row.gamma = *b.gamma;
    row.nu_plus = b.nu_plus;
    row.nu_minus = b.nu_minus;
    row.real = b.real_pair();
    v.per_k.push_back(row);
  }
  v.phi_1 = v.per_k.front().phi;
  v.stable = v.sigma <= 0 || v.phi_1 < 1.0;

  for (const auto& ev : full_spectrum(cfg, pot, a)) {
    v.max_real_part = std::max(v.max_real_part, std::abs(ev.real()));
  }
  v.oracle_stable = v.max_real_part <= 1e-7;
  return v;
}

}  // namespace dnls
