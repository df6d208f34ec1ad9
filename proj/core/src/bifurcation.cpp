#include "dnls/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dnls {

std::string to_string(Regime r) { return r == Regime::a ? "a" : "b"; }

std::string to_string(FlagKind f) {
  switch (f) {
    case FlagKind::resonance_1_to_l:
      return "resonance_1_to_l";
    case FlagKind::resonance_1_to_1:
      return "resonance_1_to_1";
    case FlagKind::near_degenerate:
      return "near_degenerate";
    case FlagKind::suppressed:
      return "suppressed";
  }
  return "unknown";
}

bool BifurcationPoint::has(FlagKind kind) const {
  return std::any_of(flags.begin(), flags.end(),
                     [kind](const BifurcationFlag& f) { return f.kind == kind; });
}

std::string BifurcationPoint::flag_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (i) out << ';';
    out << to_string(flags[i].kind);
    if (flags[i].kind == FlagKind::resonance_1_to_l) {
      out << "(l=" << flags[i].l << ",j=" << flags[i].j << (flags[i].sign_j > 0 ? "+" : "-")
          << ")";
    }
  }
  return out.str();
}

DegeneracyReport check_nondegenerate(const LatticeConfig& cfg, const Potential& pot, double a,
                                     double tol_deg) {
  DegeneracyReport r;
  r.rank_one = 2.0 * a * a * pot.second(a * a);
  r.v_second_nonzero = std::abs(r.rank_one) > tol_deg;
  std::vector<int> failing;
  for (int k = 1; k < cfg.n(); ++k) {
    const BlockData b = block_data(cfg, pot, a, k);
    const double margin = std::abs(*b.phi - *b.gamma);
    r.phi_gamma_margins.push_back(margin);
    r.block_determinants.push_back(b.determinant());
    if (!(margin > tol_deg)) failing.push_back(k);
  }
  r.nondegenerate = r.v_second_nonzero && failing.empty();
  std::ostringstream why;
  if (!r.v_second_nonzero) {
    why << "V''-condition fails: 2a^2 V''(a^2) = " << r.rank_one << " at a=" << a;
  }
  if (!failing.empty()) {
    if (!r.v_second_nonzero) why << "; ";
    why << "phi_k = gamma_k for k =";
    for (int k : failing) why << ' ' << k;
  }
  r.failing_condition = why.str();
  return r;
}

std::vector<ResonanceRecord> check_nonresonant(const LatticeConfig& cfg, const Potential& pot,
                                               double a, double tol_res) {
  struct Freq {
    int k;
    int sign;
    double value;
  };
  std::vector<Freq> real_freqs;
  std::vector<ResonanceRecord> out;
  for (int k = 1; k < cfg.n(); ++k) {
    const BlockData b = block_data(cfg, pot, a, k);
    if (std::abs(*b.phi - 1.0) <= tol_res) {
      ResonanceRecord rec;
      rec.kind = ResonanceKind::one_to_one;
      rec.k = rec.j = k;
      rec.nu_k = b.nu_plus.real();
      rec.nu_j = b.nu_minus.real();
      out.push_back(rec);
    }
    if (b.real_pair()) {
      real_freqs.push_back({k, +1, b.nu_plus.real()});
      real_freqs.push_back({k, -1, b.nu_minus.real()});
    }
  }

  double max_abs = 0.0;
  double min_pos = 0.0;
  for (const Freq& f : real_freqs) {
    max_abs = std::max(max_abs, std::abs(f.value));
    if (f.value > tol_res && (min_pos == 0.0 || f.value < min_pos)) min_pos = f.value;
  }
  if (min_pos == 0.0) return out;
  const int l_max =
      std::min(kMaxResonanceOrder, static_cast<int>(std::ceil(max_abs / min_pos - 1e-12)));

  for (const Freq& cand : real_freqs) {
    if (!(cand.value > tol_res)) continue;
    for (const Freq& other : real_freqs) {
      if (other.k == cand.k) continue;
      for (int l = 1; l <= std::max(1, l_max); ++l) {
        if (std::abs(other.value - l * cand.value) < tol_res) {
          ResonanceRecord rec;
          rec.kind = ResonanceKind::one_to_l;
          rec.k = cand.k;
          rec.sign = cand.sign;
          rec.j = other.k;
          rec.sign_j = other.sign;
          rec.l = l;
          rec.nu_k = cand.value;
          rec.nu_j = other.value;
          out.push_back(rec);
        }
      }
    }
  }
  return out;
}

namespace {

std::optional<Regime> regime_of(const LatticeConfig& cfg, const BlockData& b) {
  if (!b.phi || !b.gamma) return std::nullopt;
  const double phi = *b.phi;
  const double gamma = *b.gamma;
  if (phi >= 1.0) return std::nullopt;
  if (phi < gamma) return Regime::a;
  if (phi > gamma && 2 * b.k <= cfg.n()) return Regime::b;
  return std::nullopt;
}

}  // namespace

std::optional<Regime> mode_regime(const LatticeConfig& cfg, const BlockData& block) {
  return regime_of(cfg, block);
}

std::vector<BifurcationPoint> enumerate_bifurcations(const LatticeConfig& cfg,
                                                     const Potential& pot, double a,
                                                     const EnumerationOptions& opts) {
  const DegeneracyReport deg = check_nondegenerate(cfg, pot, a, opts.tol_deg);
  if (!deg.nondegenerate) {
    throw DegenerateAmplitudeError("bifurcations: degenerate amplitude: " + deg.failing_condition);
  }
  const std::vector<ResonanceRecord> resonances = check_nonresonant(cfg, pot, a, opts.tol_res);

  std::vector<BifurcationPoint> points;
  for (int k = 1; k < cfg.n(); ++k) {
    const BlockData b = block_data(cfg, pot, a, k);
    const std::optional<Regime> regime = regime_of(cfg, b);
    if (!regime) continue;

    std::vector<int> signs{+1};
    if (*regime == Regime::b) signs.push_back(-1);
    for (int sign : signs) {
      BifurcationPoint p;
      p.k = k;
      p.sign = sign;
      p.nu_onset = sign > 0 ? b.nu_plus.real() : b.nu_minus.real();
      p.regime = *regime;
      if (!(p.nu_onset > 0.0)) continue;

      if (std::abs(*b.phi - *b.gamma) < opts.boundary_tol ||
          std::abs(*b.phi - 1.0) < opts.boundary_tol) {
        p.flags.push_back({FlagKind::near_degenerate});
      }
      bool suppress = false;
      for (const ResonanceRecord& r : resonances) {
        if (r.kind == ResonanceKind::one_to_one) {
          if (r.k == k) p.flags.push_back({FlagKind::resonance_1_to_1});
          continue;
        }
        if (r.k == k && r.sign == sign) {
          p.flags.push_back({FlagKind::resonance_1_to_l, r.l, r.j, r.sign_j});
          if (r.l >= 2) suppress = true;
        } else if (r.j == k && r.sign_j == sign) {
          // Larger partner of the resonance, kept.
          p.flags.push_back({FlagKind::resonance_1_to_l, r.l, r.k, r.sign});
        }
      }
      if (suppress) p.flags.push_back({FlagKind::suppressed});
      points.push_back(std::move(p));
    }
  }
  return points;
}

namespace {

double threshold_target(const BlockData& b, ThresholdTarget target) {
  if (target == ThresholdTarget::hopf) return 1.0;
  // gamma_k = 0 exactly when beta_k = alpha_k; keep round-off from producing a root.
  return std::abs(*b.gamma) < 1e-12 ? 0.0 : *b.gamma;
}

// Smallest positive a with phi_k(a) = target for phi = -(2c/alpha) (a/(1+a^2))^2.
std::optional<double> saturable_root(double c, double alpha, double target) {
  if (c == 0.0) return std::nullopt;
  const double r2 = -target * alpha / (2.0 * c);
  if (!(r2 > 0.0) || r2 > 0.25) return std::nullopt;
  const double r = std::sqrt(r2);
  // r a^2 - a + r = 0
  return (1.0 - std::sqrt(std::max(0.0, 1.0 - 4.0 * r2))) / (2.0 * r);
}

std::optional<double> cubic_root(double c, double alpha, double target) {
  if (c == 0.0) return std::nullopt;
  const double a2 = target * alpha / (2.0 * c);
  if (!(a2 > 0.0)) return std::nullopt;
  return std::sqrt(a2);
}

void require_mode(const LatticeConfig& cfg, int k) {
  if (k < 1 || k >= cfg.n()) throw ConfigError("thresholds: k must lie in [1, n-1]");
}

}  // namespace

std::optional<double> bisect_threshold(const LatticeConfig& cfg, const Potential& pot, int k,
                                       ThresholdTarget target, double a_max, double tol) {
  require_mode(cfg, k);
  const BlockData b0 = block_data(cfg, pot, 0.0, k);
  const double goal = threshold_target(b0, target);
  auto f = [&](double a) { return *block_data(cfg, pot, a, k).phi - goal; };

  constexpr int kGrid = 4096;
  double lo = 0.0;
  double f_lo = f(0.0);
  bool skip_origin = f_lo == 0.0;
  for (int i = 1; i <= kGrid; ++i) {
    const double hi = a_max * i / kGrid;
    const double f_hi = f(hi);
    if (f_hi == 0.0) return hi;
    if (!skip_origin && (f_lo < 0.0) != (f_hi < 0.0)) {
      double l = lo, h = hi, fl = f_lo;
      while (h - l > tol) {
        const double mid = 0.5 * (l + h);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (fl < 0.0)) {
          l = mid;
          fl = fm;
        } else {
          h = mid;
        }
      }
      return 0.5 * (l + h);
    }
    skip_origin = false;
    lo = hi;
    f_lo = f_hi;
  }
  return std::nullopt;
}

AmplitudeThresholds amplitude_thresholds(const LatticeConfig& cfg, const Potential& pot, int k,
                                         double a_max) {
  require_mode(cfg, k);
  const BlockData b = block_data(cfg, pot, 0.0, k);
  AmplitudeThresholds out;
  switch (pot.kind()) {
    case PotentialKind::cubic:
      out.a_hopf = cubic_root(pot.c(), b.alpha, 1.0);
      out.a_gamma = cubic_root(pot.c(), b.alpha, threshold_target(b, ThresholdTarget::gamma));
      break;
    case PotentialKind::saturable:
      out.a_hopf = saturable_root(pot.c(), b.alpha, 1.0);
      out.a_gamma = saturable_root(pot.c(), b.alpha, threshold_target(b, ThresholdTarget::gamma));
      break;
    case PotentialKind::polynomial:
      out.a_hopf = bisect_threshold(cfg, pot, k, ThresholdTarget::hopf, a_max);
      out.a_gamma = bisect_threshold(cfg, pot, k, ThresholdTarget::gamma, a_max);
      break;
  }
  return out;
}

}  // namespace dnls
