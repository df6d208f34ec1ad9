/*
 * bifurcation.hpp: onset enumeration, non-degeneracy/non-resonance checks and
 * amplitude thresholds.
 *
 * Regime (a): phi_k < gamma_k, k in [1, n-1]   -> one onset nu_k^+ > 0
 * Regime (b): gamma_k < phi_k < 1, k in [1, n/2] -> onsets nu_k^+ and nu_k^-
 * phi_k >= 1 is a Hamiltonian-Hopf collision: flagged, never an onset.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dnls/lattice.hpp"
#include "dnls/spectral.hpp"

namespace dnls {

inline constexpr double kDefaultDegeneracyTol = 1e-9;
inline constexpr double kDefaultResonanceTol = 1e-9;
inline constexpr int kMaxResonanceOrder = 64;

enum class Regime { a, b };
std::string to_string(Regime r);

struct DegeneracyReport {
  bool v_second_nonzero = false;
  double rank_one = 0.0;                  // 2 a^2 V''(a^2), B_n eigenvalue in the fixed space
  std::vector<double> phi_gamma_margins;  // |phi_k - gamma_k|, index k-1, k = 1..n-1
  std::vector<double> block_determinants; // beta_k^2 - alpha_k^2 (1 - phi_k), k = 1..n-1
  bool nondegenerate = false;
  std::string failing_condition;          // empty when non-degenerate
};

DegeneracyReport check_nondegenerate(const LatticeConfig& cfg, const Potential& pot, double a,
                                     double tol_deg = kDefaultDegeneracyTol);

enum class ResonanceKind { one_to_l, one_to_one };

/// one_to_l:   |nu_j^{sign_j} - l nu_k^{sign}| < tol, j != k
/// one_to_one: nu_k^+ = nu_k^- (phi_k = 1), j = k, l = 1
struct ResonanceRecord {
  ResonanceKind kind = ResonanceKind::one_to_l;
  int k = 0;
  int sign = +1;
  int j = 0;
  int sign_j = +1;
  int l = 1;
  double nu_k = 0.0;
  double nu_j = 0.0;
};

std::vector<ResonanceRecord> check_nonresonant(const LatticeConfig& cfg, const Potential& pot,
                                               double a, double tol_res = kDefaultResonanceTol);

enum class FlagKind { resonance_1_to_l, resonance_1_to_1, near_degenerate, suppressed };
std::string to_string(FlagKind f);

struct BifurcationFlag {
  FlagKind kind;
  int l = 0;
  int j = 0;
  int sign_j = 0;
};

struct BifurcationPoint {
  int k = 0;
  int sign = +1;
  double nu_onset = 0.0;
  Regime regime = Regime::a;
  std::vector<BifurcationFlag> flags;

  bool has(FlagKind kind) const;
  /// Smaller partner of a 1:l resonance with l >= 2.
  bool suppressed() const { return has(FlagKind::suppressed); }
  std::string flag_string() const;
};

/// Regime of mode k, or nullopt for phi_k >= 1, phi_k = gamma_k or k = n.
/// Applies at any amplitude (including the degenerate a = 0).
std::optional<Regime> mode_regime(const LatticeConfig& cfg, const BlockData& block);

struct EnumerationOptions {
  double tol_deg = kDefaultDegeneracyTol;
  double tol_res = kDefaultResonanceTol;
  /// Margin to the boundaries phi = gamma and phi = 1 that raises near_degenerate.
  double boundary_tol = 1e-9;
};

/// Throws DegenerateAmplitudeError naming the failing condition when a is degenerate.
std::vector<BifurcationPoint> enumerate_bifurcations(const LatticeConfig& cfg,
                                                     const Potential& pot, double a,
                                                     const EnumerationOptions& opts = {});

struct AmplitudeThresholds {
  std::optional<double> a_hopf;   // phi_k(a) = 1
  std::optional<double> a_gamma;  // phi_k(a) = gamma_k
};

enum class ThresholdTarget { hopf, gamma };

/// Closed forms for cubic and saturable potentials, bisection otherwise.
/// The smallest positive root is returned.
AmplitudeThresholds amplitude_thresholds(const LatticeConfig& cfg, const Potential& pot, int k,
                                         double a_max = 10.0);

/// Smallest root of phi_k(a) = target on (0, a_max] by grid scan plus bisection.
std::optional<double> bisect_threshold(const LatticeConfig& cfg, const Potential& pot, int k,
                                       ThresholdTarget target, double a_max = 10.0,
                                       double tol = 1e-13);

}  // namespace dnls
