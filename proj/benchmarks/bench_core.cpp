#include <benchmark/benchmark.h>

#include "dnls/continuation.hpp"
#include "dnls/spectral.hpp"
#include "dnls/verification.hpp"

namespace {

const dnls::LatticeConfig kCfg(6, 1);
const dnls::Potential kPot = dnls::Potential::cubic(1.0);

void BM_HessianAtEquilibrium(benchmark::State& state) {
  const dnls::LatticeConfig cfg(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(dnls::hessian_at_equilibrium(cfg, kPot, 0.2));
}
BENCHMARK(BM_HessianAtEquilibrium)->Arg(6)->Arg(32)->Arg(128);

void BM_FullSpectrum(benchmark::State& state) {
  const dnls::LatticeConfig cfg(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(dnls::full_spectrum(cfg, kPot, 0.2));
}
BENCHMARK(BM_FullSpectrum)->Arg(6)->Arg(16)->Arg(32);

void BM_ClosedFormSpectrum(benchmark::State& state) {
  const dnls::LatticeConfig cfg(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(dnls::closed_form_spectrum(cfg, kPot, 0.2));
}
BENCHMARK(BM_ClosedFormSpectrum)->Arg(6)->Arg(32);

void BM_GalerkinResidual(benchmark::State& state) {
  const int harmonics = static_cast<int>(state.range(0));
  const dnls::StandingWave sw = dnls::make_standing_wave(kCfg, kPot, 0.2);
  const dnls::GalerkinSystem sys(kCfg, kPot, sw, 3, harmonics);
  Eigen::VectorXd p = Eigen::VectorXd::Constant(sys.dim(), 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(sys.residual(p, 1.96));
}
BENCHMARK(BM_GalerkinResidual)->Arg(8)->Arg(32)->Arg(64);

void BM_GalerkinJacobian(benchmark::State& state) {
  const int harmonics = static_cast<int>(state.range(0));
  const dnls::StandingWave sw = dnls::make_standing_wave(kCfg, kPot, 0.2);
  const dnls::GalerkinSystem sys(kCfg, kPot, sw, 3, harmonics);
  Eigen::VectorXd p = Eigen::VectorXd::Constant(sys.dim(), 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(sys.jacobian(p, 1.96));
}
BENCHMARK(BM_GalerkinJacobian)->Arg(8)->Arg(32);

void BM_ImplicitMidpointPeriod(benchmark::State& state) {
  const dnls::StandingWave sw = dnls::make_standing_wave(kCfg, kPot, 0.2);
  dnls::LatticeState u0 = sw.equilibrium;
  u0(0) += 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(dnls::integrate(kCfg, kPot, sw.omega, u0, 1e-3, 3.2));
  }
}
BENCHMARK(BM_ImplicitMidpointPeriod)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
