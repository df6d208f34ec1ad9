// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dnls/bifurcation.hpp"
#include "dnls/continuation.hpp"
#include "dnls/io.hpp"
#include "dnls/spectral.hpp"
#include "dnls/verification.hpp"
#include "oracles.hpp"

using namespace dnls;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

struct GridCase {
  int n, m;
  Potential pot;
  double a;
};

std::vector<GridCase> fixture_grid() {
  std::vector<GridCase> out;
  for (int n : {3, 5, 6, 7, 8}) {
    for (int m = 0; 2 * m <= n; ++m) {
      if (4 * m == n) continue;
      for (const Potential& pot :
           {Potential::cubic(1.0), Potential::cubic(-1.0), Potential::saturable(1.0)}) {
        for (double a : {0.0, 0.2, 0.6, 1.0}) {
          if (pot.in_domain(a * a)) out.push_back({n, m, pot, a});
        }
      }
    }
  }
  return out;
}

const LatticeConfig kCfg(6, 1);
const Potential kCubic = Potential::cubic(1.0);

Branch fixture_branch(int max_steps, double* elapsed = nullptr) {
  const StandingWave sw = make_standing_wave(kCfg, kCubic, 0.2);
  BifurcationPoint onset;
  for (const BifurcationPoint& p : enumerate_bifurcations(kCfg, kCubic, 0.2)) {
    if (p.k == 3 && p.sign == +1) onset = p;
  }
  ContinuationOptions opts;
  opts.harmonics = 32;
  opts.max_steps = max_steps;
  const auto t0 = Clock::now();
  Branch br = continue_branch(kCfg, kCubic, sw, onset, opts);
  if (elapsed) *elapsed = seconds_since(t0);
  return br;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  int checked = 0;
  for (const GridCase& c : fixture_grid()) {
    const LatticeConfig cfg(c.n, c.m);
    bool real = true;
    for (int k = 1; k < c.n; ++k) real = real && *block_data(cfg, c.pot, c.a, k).phi <= 1.0;
    if (!real) continue;
    worst = std::max(worst, spectrum_distance(closed_form_spectrum(cfg, c.pot, c.a),
                                              full_spectrum(cfg, c.pot, c.a)));
    ++checked;
  }
  const double t = seconds_since(t0);
  o.require(worst <= 1e-8, "max distance " + fmt("%.3g", worst));
  o.require(t < 5.0, "runtime " + fmt("%.3g", t) + " s");
  o.detail = o.pass ? std::to_string(checked) + " configurations, max distance " +
                          fmt("%.3g", worst) + ", " + fmt("%.3g", t) + " s"
                    : o.detail;
  return o;
}

Outcome criterion2() {
  Outcome o;
  double worst = 0.0;
  for (const GridCase& c : fixture_grid()) {
    const LatticeConfig cfg(c.n, c.m);
    const Eigen::MatrixXcd h = hessian_at_equilibrium(cfg, c.pot, c.a).cast<std::complex<double>>();
    for (int k = 1; k <= c.n; ++k) {
      const BlockData b = block_data(cfg, c.pot, c.a, k);
      for (int trial = 0; trial < 10; ++trial) {
        const Eigen::Vector2cd z(oracle::cd(oracle::uniform(-1, 1), oracle::uniform(-1, 1)),
                                 oracle::cd(oracle::uniform(-1, 1), oracle::uniform(-1, 1)));
        const Eigen::VectorXcd tz = oracle::fourier_vector(c.n, c.m, k, z);
        const Eigen::VectorXcd tbz = oracle::fourier_vector(c.n, c.m, k, b.B * z);
        worst = std::max(worst, (h * tz - tbz).norm());
      }
    }
  }
  o.require(worst <= 1e-10, "max residual " + fmt("%.3g", worst));
  if (o.pass) o.detail = "max residual " + fmt("%.3g", worst);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const StandingWave sw = make_standing_wave(kCfg, kCubic, 0.2);
  const std::vector<GroupElement> gens{GroupElement::lattice_shift(), GroupElement::time_shift(0.731),
                                       GroupElement::reflection()};
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const LatticeLoop x = oracle::random_loop(6, 8, 0.4);
    const double nu = oracle::uniform(0.5, 3.0);
    const LatticeLoop fx = vector_field(kCfg, kCubic, sw, nu, x);
    for (const GroupElement& g : gens) {
      worst = std::max(worst, vector_field(kCfg, kCubic, sw, nu, act(g, x, kCfg))
                                  .distance(act(g, fx, kCfg)));
    }
  }
  o.require(worst <= 1e-10, "max defect " + fmt("%.3g", worst));
  if (o.pass) o.detail = "max defect " + fmt("%.3g", worst);
  return o;
}

Outcome criterion4() {
  Outcome o;
  double lo = 0.1, hi = 1.0;
  o.require(classify_stability(kCfg, kCubic, lo).stable && !classify_stability(kCfg, kCubic, hi).stable,
            "no bracket");
  while (hi - lo > 1e-9) {
    const double mid = 0.5 * (lo + hi);
    (classify_stability(kCfg, kCubic, mid).stable ? lo : hi) = mid;
  }
  const double alpha1 = block_data(kCfg, kCubic, 0.0, 1).alpha;
  const double closed = std::sqrt(alpha1 / (2.0 * 1.0));
  const double flip = 0.5 * (lo + hi);
  o.require(std::abs(flip - 0.5) <= 1e-6 && std::abs(flip - closed) <= 1e-6,
            "flip at " + fmt("%.9f", flip));
  for (int i = 1; i <= 200; ++i) {
    const double a = 0.01 * i;
    const StabilityVerdict d = classify_stability(kCfg, Potential::cubic(-1.0), a);
    const StabilityVerdict f = classify_stability(LatticeConfig(6, 3), kCubic, a);
    o.require(d.stable && d.oracle_stable, "defocusing unstable at a=" + fmt("%.2f", a));
    o.require(f.stable && f.oracle_stable, "m=3 unstable at a=" + fmt("%.2f", a));
  }
  if (o.pass) o.detail = "flip at " + fmt("%.9f", flip);
  return o;
}

Outcome criterion5() {
  Outcome o;
  struct E {
    int k, sign;
    double nu;
    Regime r;
  };
  const std::vector<E> expected{{1, +1, 1.958258, Regime::b},
                                {1, -1, 1.041742, Regime::b},
                                {2, +1, 2.959452, Regime::b},
                                {2, -1, 0.040548, Regime::b},
                                {3, +1, 1.959592, Regime::a}};
  const std::vector<BifurcationPoint> pts = enumerate_bifurcations(kCfg, kCubic, 0.2);
  o.require(pts.size() == expected.size(), std::to_string(pts.size()) + " onsets");
  if (!o.pass) return o;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const std::string tag = "onset " + std::to_string(i);
    o.require(pts[i].k == expected[i].k && pts[i].sign == expected[i].sign, tag + " mode");
    o.require(std::abs(pts[i].nu_onset - expected[i].nu) <= 1e-6, tag + " frequency");
    o.require(pts[i].regime == expected[i].r, tag + " regime");
  }
  if (o.pass) o.detail = "5 onsets, regimes b,b,a";
  return o;
}

Outcome criterion6() {
  Outcome o;
  double elapsed = 0.0;
  const auto t0 = Clock::now();
  const Branch br = fixture_branch(20, &elapsed);
  o.require(br.points.size() == 20, std::to_string(br.points.size()) + " points: " + br.detail);
  if (!o.pass) return o;
  double worst_res = 0.0;
  for (const BranchPoint& p : br.points) worst_res = std::max(worst_res, p.residual_norm);
  o.require(worst_res <= 1e-10, "residual " + fmt("%.3g", worst_res));

  const double a0 = br.points[0].amplitude, a1 = br.points[1].amplitude;
  const double nu0 =
      (br.points[0].nu * a1 * a1 - br.points[1].nu * a0 * a0) / (a1 * a1 - a0 * a0);
  o.require(std::abs(nu0 - 1.959592) <= 1e-6, "extrapolated onset " + fmt("%.9f", nu0));

  const StandingWave sw = make_standing_wave(kCfg, kCubic, 0.2);
  double worst_diff = 0.0;
  for (const BranchPoint& p : br.points) {
    const BranchPoint q = resolve_point(kCfg, kCubic, sw, p, 64);
    worst_diff = std::max(worst_diff, (q.profile.flatten() - p.profile.resized(64).flatten()).norm());
  }
  o.require(worst_diff <= 1e-8, "N doubling changes profile by " + fmt("%.3g", worst_diff));
  const double total = seconds_since(t0);
  o.require(total < 30.0, "runtime " + fmt("%.3g", total) + " s");
  if (o.pass) {
    o.detail = "nu0 " + fmt("%.9f", nu0) + ", residual " + fmt("%.2g", worst_res) +
               ", N doubling " + fmt("%.2g", worst_diff) + ", " + fmt("%.2g", total) + " s";
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const Branch br = fixture_branch(5);
  o.require(br.points.size() == 5, "branch too short");
  if (!o.pass) return o;
  const StandingWave sw = make_standing_wave(kCfg, kCubic, 0.2);
  double closure = 0, dp = 0, tw = 0, sp = 0;
  for (const BranchPoint& p : br.points) {
    const PointVerification v = verify_point(kCfg, kCubic, sw, p, 1e-3, 1);
    closure = std::max(closure, v.closure);
    dp = std::max(dp, v.dP);
    tw = std::max(tw, v.traveling_error);
    sp = std::max(sp, v.spatial_error);
    o.require(v.spatial_period == 2, "spatial period " + std::to_string(v.spatial_period));
  }
  o.require(closure <= 1e-6, "closure " + fmt("%.3g", closure));
  o.require(dp <= 1e-10, "power drift " + fmt("%.3g", dp));
  o.require(tw <= 1e-6, "traveling-wave error " + fmt("%.3g", tw));
  o.require(sp <= 1e-6, "spatial period error " + fmt("%.3g", sp));
  if (o.pass) {
    o.detail = "closure " + fmt("%.2g", closure) + ", dP " + fmt("%.2g", dp) + ", wave " +
               fmt("%.2g", tw) + ", period-2 " + fmt("%.2g", sp);
  }
  return o;
}

Outcome criterion8() {
  Outcome o;
  o.require(!check_nonresonant(kCfg, kCubic, 0.0).empty(), "no resonance at a=0");

  const std::vector<ResonanceRecord> hopf = check_nonresonant(kCfg, kCubic, 0.5);
  bool flagged = false;
  for (const ResonanceRecord& r : hopf) flagged |= r.kind == ResonanceKind::one_to_one && r.k == 1;
  o.require(flagged, "phi_1 = 1 not flagged 1:1");
  bool refused = false;
  try {
    onset_kernel(kCfg, kCubic, make_standing_wave(kCfg, kCubic, 0.5), 1, +1, 8);
  } catch (const ResonanceError& e) {
    refused = std::string(e.what()).find("double eigenvalue") != std::string::npos;
  }
  o.require(refused, "onset_kernel did not refuse the double eigenvalue");

  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "dnls_acceptance";
  std::filesystem::create_directories(dir);
  const std::filesystem::path path = dir / "quarter.json";
  std::ofstream(path) << R"({"lattice": {"n": 8, "m": 2}, "potential": {"kind": "cubic", "c": 1}})";
  std::ostringstream log, err;
  io::Overrides ov;
  ov.out = dir.string();
  const int code = io::run("spectrum", path.string(), ov, log, err);
  o.require(code == 2, "4m=n exit code " + std::to_string(code));
  if (o.pass) o.detail = "a=0 flagged, 1:1 refused, 4m=n exits 2";
  return o;
}

Outcome criterion9() {
  Outcome o;
  double worst_g = 0.0, worst_h = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    int n = 0, m = 0;
    do {
      n = oracle::uniform_int(3, 8);
      m = oracle::uniform_int(0, n / 2);
    } while (4 * m == n);
    const LatticeConfig cfg(n, m);
    const Potential pot = trial % 2 ? Potential::cubic(oracle::uniform(-2, 2))
                                    : Potential::saturable(oracle::uniform(-2, 2));
    const double omega = oracle::uniform(-2, 2);
    const LatticeState u = oracle::random_vector(cfg.dim(), 0.9);
    const Eigen::VectorXd fg = oracle::fd_gradient(
        [&](const Eigen::VectorXd& x) { return hamiltonian(cfg, pot, omega, x); }, u);
    const Eigen::MatrixXd fh = oracle::fd_jacobian(
        [&](const Eigen::VectorXd& x) { return gradient(cfg, pot, omega, x); }, u);
    worst_g = std::max(worst_g, (gradient(cfg, pot, omega, u) - fg).cwiseAbs().maxCoeff());
    worst_h = std::max(worst_h, (hessian(cfg, pot, omega, u) - fh).cwiseAbs().maxCoeff());
  }
  o.require(worst_g <= 1e-6, "gradient " + fmt("%.3g", worst_g));
  o.require(worst_h <= 1e-6, "hessian " + fmt("%.3g", worst_h));
  if (o.pass) o.detail = "gradient " + fmt("%.2g", worst_g) + ", hessian " + fmt("%.2g", worst_h);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3,
                                                       criterion4, criterion5, criterion6,
                                                       criterion7, criterion8, criterion9};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
  }
  return failures == 0 ? 0 : 1;
}
