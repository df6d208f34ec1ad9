/*
 * io.hpp: run configuration, CSV tables and command dispatch.
 *
 * Config document (JSON):
 *   {
 *     "lattice":      {"n": 6, "m": 1},
 *     "potential":    {"kind": "cubic", "c": 1.0}
 *                     | {"kind": "polynomial", "coefficients": [p0, p1, ...]},
 *     "amplitude":    0.2,
 *     "sweep":        {"a_min": 0.0, "a_max": 1.0, "steps": 101},
 *     "k": 3, "sign": "+", "reverse": false,
 *     "continuation": {"harmonics": 32, "newton_tol": 1e-10, ..., "snapshot_every": 10},
 *     "integration":  {"dt": 1e-3, "periods": 1, "points": 5, "T": 10,
 *                      "perturbation": 1e-3, "seed": 1, "stride": 10},
 *     "thresholds":   {"a_max": 10.0},
 *     "output":       "out"
 *   }
 * Unknown keys are rejected.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dnls/continuation.hpp"
#include "dnls/lattice.hpp"

namespace dnls::io {

struct Sweep {
  double a_min = 0.0;
  double a_max = 1.0;
  int steps = 101;

  std::vector<double> values() const;
};

struct IntegrationOptions {
  double dt = 1e-3;
  /// Periods integrated per branch point by `verify`.
  int periods = 1;
  /// Branch points verified by `verify`.
  int points = 5;
  /// Final time of `simulate`.
  double T = 10.0;
  /// Size of the seeded random perturbation of a_m used by `simulate`.
  double perturbation = 1e-3;
  std::uint64_t seed = 1;
  /// Every stride-th sample is written by `simulate`.
  int stride = 10;
};

struct RunConfig {
  LatticeConfig lattice{3, 0};
  Potential potential = Potential::cubic(1.0);
  std::optional<double> amplitude;
  std::optional<Sweep> sweep;
  std::optional<int> k;
  int sign = +1;
  bool reverse = false;
  ContinuationOptions continuation;
  int snapshot_every = 10;
  IntegrationOptions integration;
  double thresholds_a_max = 10.0;
  std::string output_dir = ".";
};

/// Throws ConfigError naming the offending key or violated invariant.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Fixed-precision (17 significant digits) number formatting.
std::string format_number(double v);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> header);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  CsvWriter& cell(double v);
  CsvWriter& cell(int v);
  CsvWriter& cell(const std::string& v);
  void end_row();

 private:
  struct Impl;
  Impl* impl_;
};

Table read_csv(const std::string& path);

enum class Command { spectrum, stability, thresholds, bifurcations, continue_branch, verify, simulate };
Command command_from_string(const std::string& name);

struct Overrides {
  std::optional<std::string> out;
  std::optional<int> k;
  std::optional<int> sign;
  bool reverse = false;
};

/// Runs one command and returns the exit code: 0 success, 2 invalid
/// configuration, 3 numerical failure. Messages go to `err`, a summary to `log`.
int dispatch(const std::string& command, const RunConfig& cfg, const Overrides& overrides,
             std::ostream& log, std::ostream& err);

/// Loads the config file, then dispatches.
int run(const std::string& command, const std::string& config_path, const Overrides& overrides,
        std::ostream& log, std::ostream& err);

}  // namespace dnls::io
