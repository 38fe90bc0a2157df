#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "swipt/channel.hpp"
#include "swipt/path_following.hpp"

namespace swipt {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON keys are the field names below; unknown keys are rejected.
struct ExperimentConfig {
  double carrier_freq = 470e6;
  double antenna_gain = 10.0;
  double ref_distance = 2.0;
  double pathloss_exponent = 2.6;
  double rician_K = 10.0;

  std::vector<int> M = {6};  // swept like P and gamma
  int N1 = 3;
  int N2 = 3;
  std::vector<double> distances = {7.0, 7.0, 7.0, 20.0, 20.0, 20.0};
  double sigma_a_sq_dBm = -90.0;
  double sigma_c_sq_dBm = -90.0;
  double zeta = 0.5;

  std::vector<double> P_dBm = {26.0};
  std::vector<double> gamma_dB = {12.0};
  int realizations = 200;
  std::uint64_t seed = 1;
  std::string algorithm = "sum-eh";  // sum-eh | max-min
  std::string baseline = "none";     // none | sdp-fixed-alpha | bisection | bb

  double tol_converge = 1e-4;
  int max_outer_iters = 50;
  double tol_solve = 1e-8;

  std::string output;
  bool record_timing = false;
  int workers = 1;  // 0 picks the hardware concurrency

  void validate() const;  // throws ConfigError
  AlgoConfig algo() const;
  ChannelConfig channel(int M) const;
  /// Normalized instance for one sweep cell and realization.
  NetworkInstance instance(int M, double P_dBm, double gamma_dB, std::uint64_t realization) const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

struct RunRecord {
  int realization = 0;
  int M = 0;
  int N1 = 0;
  int N2 = 0;
  double P_dBm = 0.0;
  double gamma_dB = 0.0;
  std::string algorithm;
  std::string status;  // RunStatus name, or "error"
  double objective_dBm = 0.0;     // NaN when no feasible point
  std::vector<double> eh_dBm;     // per EH-ID UE
  int outer_iterations = 0;
  int solver_iterations = 0;
  std::optional<double> wall_ms;
  std::optional<double> baseline_value_dBm;
  std::optional<double> baseline_gap;  // (baseline - objective) / baseline, linear
  std::optional<int> baseline_work;     // SDP solves or BB nodes
  std::optional<bool> baseline_rank_one;

  bool degraded() const;
  bool has_objective() const;
};

/// Every (M, P, gamma, realization) record in sweep order.
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg);

void write_csv(std::ostream& os, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_csv(std::istream& is);

struct AggregateRow {
  int M = 0;
  double P_dBm = 0.0;
  double gamma_dB = 0.0;
  std::string algorithm;
  int count = 0;          // records with an objective
  double mean_w = 0.0;    // mean in watts
  double stderr_w = 0.0;  // standard error of the mean, watts
  double mean_dBm = 0.0;
  double mean_outer_iterations = 0.0;
  double degraded_fraction = 0.0;
  double infeasible_fraction = 0.0;
};

/// One row per (M, P, gamma, algorithm) cell in first-appearance order.
std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records);
void write_aggregate_csv(std::ostream& os, const std::vector<AggregateRow>& rows);

/// RFC 4180 field quoting.
std::string csv_field(const std::string& s);
std::string format_double(double v);

}  // namespace swipt
