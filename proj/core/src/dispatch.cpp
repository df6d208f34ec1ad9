#include <algorithm>
#include <filesystem>
#include <limits>
#include <map>
#include <ostream>
#include <random>

#include "dnls/bifurcation.hpp"
#include "dnls/continuation.hpp"
#include "dnls/io.hpp"
#include "dnls/spectral.hpp"
#include "dnls/verification.hpp"

namespace dnls::io {

namespace {

namespace fs = std::filesystem;

struct Context {
  const RunConfig& cfg;
  fs::path out;
  int k = 0;
  int sign = +1;
  std::ostream& log;
};

double require_amplitude(const RunConfig& cfg, const std::string& command) {
  if (!cfg.amplitude) throw ConfigError(command + ": config needs 'amplitude'");
  return *cfg.amplitude;
}

std::string sign_char(int sign) { return sign > 0 ? "+" : "-"; }

std::string file(const Context& ctx, const std::string& name) {
  const fs::path p = ctx.out / name;
  ctx.log << "wrote " << p.string() << '\n';
  return p.string();
}

void run_spectrum(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const double a = require_amplitude(cfg, "spectrum");
  {
    CsvWriter csv(file(ctx, "spectrum.csv"),
                  {"k", "alpha", "beta", "phi", "gamma", "nu_plus_re", "nu_plus_im", "nu_minus_re",
                   "nu_minus_im"});
    for (int k = 1; k < cfg.lattice.n(); ++k) {
      const BlockData b = block_data(cfg.lattice, cfg.potential, a, k);
      csv.cell(k).cell(b.alpha).cell(b.beta).cell(*b.phi).cell(*b.gamma);
      csv.cell(b.nu_plus.real()).cell(b.nu_plus.imag());
      csv.cell(b.nu_minus.real()).cell(b.nu_minus.imag());
      csv.end_row();
    }
  }
  std::vector<std::complex<double>> ev = full_spectrum(cfg.lattice, cfg.potential, a);
  std::sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) {
    return x.imag() != y.imag() ? x.imag() < y.imag() : x.real() < y.real();
  });
  CsvWriter csv(file(ctx, "eigenvalues.csv"), {"index", "re", "im"});
  for (std::size_t i = 0; i < ev.size(); ++i) {
    csv.cell(static_cast<int>(i)).cell(ev[i].real()).cell(ev[i].imag());
    csv.end_row();
  }
}

void run_stability(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  std::vector<double> amplitudes;
  if (cfg.sweep) {
    amplitudes = cfg.sweep->values();
  } else {
    amplitudes.push_back(require_amplitude(cfg, "stability"));
  }
  CsvWriter csv(file(ctx, "stability.csv"),
                {"a", "sigma", "phi_1", "stable", "oracle_stable", "max_real_part"});
  for (double a : amplitudes) {
    const StabilityVerdict v = classify_stability(cfg.lattice, cfg.potential, a);
    csv.cell(a).cell(v.sigma).cell(v.phi_1).cell(v.stable ? 1 : 0).cell(v.oracle_stable ? 1 : 0);
    csv.cell(v.max_real_part);
    csv.end_row();
  }
}

void run_thresholds(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  CsvWriter csv(file(ctx, "thresholds.csv"), {"k", "a_hopf", "a_gamma"});
  const double none = std::numeric_limits<double>::quiet_NaN();
  for (int k = 1; k < cfg.lattice.n(); ++k) {
    const AmplitudeThresholds t =
        amplitude_thresholds(cfg.lattice, cfg.potential, k, cfg.thresholds_a_max);
    csv.cell(k).cell(t.a_hopf.value_or(none)).cell(t.a_gamma.value_or(none));
    csv.end_row();
  }
}

void run_bifurcations(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const double a = require_amplitude(cfg, "bifurcations");
  const std::vector<BifurcationPoint> points = enumerate_bifurcations(cfg.lattice, cfg.potential, a);
  CsvWriter csv(file(ctx, "bifurcations.csv"), {"k", "sign", "nu_onset", "regime", "flags"});
  for (const BifurcationPoint& p : points) {
    csv.cell(p.k).cell(sign_char(p.sign)).cell(p.nu_onset).cell(to_string(p.regime));
    csv.cell(p.flag_string());
    csv.end_row();
  }
}

BifurcationPoint find_onset(const Context& ctx, double a) {
  const std::vector<BifurcationPoint> points =
      enumerate_bifurcations(ctx.cfg.lattice, ctx.cfg.potential, a);
  for (const BifurcationPoint& p : points) {
    if (p.k == ctx.k && p.sign == ctx.sign) return p;
  }
  throw ConfigError("continue: no onset at k=" + std::to_string(ctx.k) + ", sign " +
                    sign_char(ctx.sign) + " for a=" + format_number(a));
}

Branch compute_branch(const Context& ctx, ContinuationOptions opts) {
  if (ctx.k == 0) throw ConfigError("continue: mode k is required (config 'k' or --k)");
  const double a = require_amplitude(ctx.cfg, "continue");
  const StandingWave sw = make_standing_wave(ctx.cfg.lattice, ctx.cfg.potential, a);
  const BifurcationPoint onset = find_onset(ctx, a);
  return continue_branch(ctx.cfg.lattice, ctx.cfg.potential, sw, onset, opts);
}

void run_continue(const Context& ctx) {
  const Branch branch = compute_branch(ctx, ctx.cfg.continuation);
  ctx.log << "termination: " << to_string(branch.termination);
  if (!branch.detail.empty()) ctx.log << " (" << branch.detail << ")";
  ctx.log << ", " << branch.points.size() << " points\n";

  const std::string name = "branch_k" + std::to_string(ctx.k) + sign_char(ctx.sign) + ".csv";
  CsvWriter csv(file(ctx, name), {"step", "nu", "amplitude", "residual", "ds", "a0", "a1", "b1",
                                  "a2", "b2", "a3", "b3"});
  for (std::size_t i = 0; i < branch.points.size(); ++i) {
    const BranchPoint& pt = branch.points[i];
    const ReducedProfile lead = pt.profile.resized(std::max(3, pt.profile.harmonics()));
    csv.cell(static_cast<int>(i)).cell(pt.nu).cell(pt.amplitude).cell(pt.residual_norm);
    csv.cell(pt.ds).cell(lead.cos_a(0));
    for (int l = 1; l <= 3; ++l) csv.cell(lead.cos_a(l)).cell(lead.sin_b(l - 1));
    csv.end_row();
  }
  for (std::size_t i = 0; i < branch.points.size(); ++i) {
    const bool last = i + 1 == branch.points.size();
    if (i % static_cast<std::size_t>(ctx.cfg.snapshot_every) != 0 && !last) continue;
    const ReducedProfile& p = branch.points[i].profile;
    CsvWriter snap(file(ctx, "profile_step" + std::to_string(i) + ".csv"), {"l", "a", "b"});
    for (int l = 0; l <= p.harmonics(); ++l) {
      snap.cell(l).cell(p.cos_a(l)).cell(l == 0 ? 0.0 : p.sin_b(l - 1));
      snap.end_row();
    }
  }
}

void run_verify(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const IntegrationOptions& io = cfg.integration;
  ContinuationOptions opts = cfg.continuation;
  opts.max_steps = std::min(opts.max_steps, io.points);
  const Branch branch = compute_branch(ctx, opts);
  const double a = *cfg.amplitude;
  const StandingWave sw = make_standing_wave(cfg.lattice, cfg.potential, a);

  CsvWriter csv(file(ctx, "verify.csv"),
                {"step", "nu", "amplitude", "period", "steps", "closure", "dH", "dP",
                 "traveling_error", "spatial_period", "spatial_error"});
  const std::size_t count = std::min<std::size_t>(branch.points.size(), io.points);
  for (std::size_t i = 0; i < count; ++i) {
    const BranchPoint& pt = branch.points[i];
    const PointVerification v = verify_point(cfg.lattice, cfg.potential, sw, pt, io.dt, io.periods);
    csv.cell(static_cast<int>(i)).cell(pt.nu).cell(pt.amplitude).cell(v.period).cell(v.steps);
    csv.cell(v.closure).cell(v.dH).cell(v.dP).cell(v.traveling_error).cell(v.spatial_period);
    csv.cell(v.spatial_error);
    csv.end_row();
  }
  if (count < static_cast<std::size_t>(io.points)) {
    ctx.log << "branch stopped after " << count << " points: " << to_string(branch.termination)
            << '\n';
  }
}

void run_simulate(const Context& ctx) {
  const RunConfig& cfg = ctx.cfg;
  const IntegrationOptions& io = cfg.integration;
  const double a = require_amplitude(cfg, "simulate");
  const StandingWave sw = make_standing_wave(cfg.lattice, cfg.potential, a);
  std::mt19937_64 rng(io.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  LatticeState u0 = sw.equilibrium;
  for (Eigen::Index i = 0; i < u0.size(); ++i) u0(i) += io.perturbation * unit(rng);

  const Trajectory traj = integrate(cfg.lattice, cfg.potential, sw.omega, u0, io.dt, io.T);
  std::vector<std::string> header{"t", "H", "P"};
  for (int j = 0; j < cfg.lattice.n(); ++j) {
    header.push_back("re_" + std::to_string(j));
    header.push_back("im_" + std::to_string(j));
  }
  CsvWriter csv(file(ctx, "trajectory.csv"), header);
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const bool last = i + 1 == traj.states.size();
    if (i % static_cast<std::size_t>(io.stride) != 0 && !last) continue;
    const LatticeState& u = traj.states[i];
    csv.cell(traj.times[i]).cell(hamiltonian(cfg.lattice, cfg.potential, sw.omega, u));
    csv.cell(power(u));
    for (Eigen::Index c = 0; c < u.size(); ++c) csv.cell(u(c));
    csv.end_row();
  }
}

double self_test_amplitude(const RunConfig& cfg) {
  if (cfg.amplitude) return *cfg.amplitude;
  if (cfg.sweep) return cfg.sweep->a_max;
  return 0.5;
}

}  // namespace

Command command_from_string(const std::string& name) {
  static const std::map<std::string, Command> table{
      {"spectrum", Command::spectrum},         {"stability", Command::stability},
      {"thresholds", Command::thresholds},     {"bifurcations", Command::bifurcations},
      {"continue", Command::continue_branch}, {"verify", Command::verify},
      {"simulate", Command::simulate}};
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown command '" + name + "'");
  return it->second;
}

int dispatch(const std::string& command, const RunConfig& cfg, const Overrides& overrides,
             std::ostream& log, std::ostream& err) {
  try {
    const Command cmd = command_from_string(command);
    Context ctx{cfg, fs::path(overrides.out.value_or(cfg.output_dir)), 0, cfg.sign, log};
    if (overrides.sign) ctx.sign = *overrides.sign;
    const std::optional<int> k = overrides.k ? overrides.k : cfg.k;
    if (k) {
      if (*k < 1 || *k >= cfg.lattice.n()) throw ConfigError("k must lie in [1, n-1]");
      ctx.k = (cfg.reverse != overrides.reverse) ? cfg.lattice.n() - *k : *k;
    }
    std::error_code ec;
    fs::create_directories(ctx.out, ec);
    if (ec) throw ConfigError("cannot create output directory " + ctx.out.string());

    assert_sign_convention(cfg.lattice, cfg.potential, self_test_amplitude(cfg));

    switch (cmd) {
      case Command::spectrum:
        run_spectrum(ctx);
        break;
      case Command::stability:
        run_stability(ctx);
        break;
      case Command::thresholds:
        run_thresholds(ctx);
        break;
      case Command::bifurcations:
        run_bifurcations(ctx);
        break;
      case Command::continue_branch:
        run_continue(ctx);
        break;
      case Command::verify:
        run_verify(ctx);
        break;
      case Command::simulate:
        run_simulate(ctx);
        break;
    }
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    err << "error [" << e.stage() << "]: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  }
}

int run(const std::string& command, const std::string& config_path, const Overrides& overrides,
        std::ostream& log, std::ostream& err) {
  RunConfig cfg;
  try {
    command_from_string(command);
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return dispatch(command, cfg, overrides, log, err);
}

}  // namespace dnls::io
