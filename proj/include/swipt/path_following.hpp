#pragma once

#include <string>
#include <vector>

#include "swipt/conic/solver.hpp"
#include "swipt/surrogate.hpp"
#include "swipt/system_model.hpp"

namespace swipt {

struct AlgoConfig {
  double tol_converge = 1e-4;  // relative objective change
  int max_outer_iters = 50;
  double alpha_min = kAlphaMin;
  double alpha_max = kAlphaMax;
  double tol_solve = 1e-8;
  int solver_max_iters = 200;
  double feas_tol = 1e-6;  // relative to P and gamma_n

  void validate() const;
};

enum class RunStatus { Converged, MaxOuterIters, Degraded, Infeasible, NumericalFailure };
std::string to_string(RunStatus s);

struct IterateRecord {
  double objective = 0.0;               // true objective at the candidate
  double surrogate = 0.0;               // surrogate at the candidate (program optimum)
  double surrogate_at_expansion = 0.0;  // surrogate at the expansion point
  double step_norm = 0.0;
  int solver_iterations = 0;
  conic::SolverStatus solver_status = conic::SolverStatus::Optimal;
  double wall_ms = 0.0;
  bool accepted = false;  // candidate became the next iterate
};

struct IterateTrace {
  double initial_objective = 0.0;
  std::vector<IterateRecord> records;
};

struct InitResult {
  RunStatus status = RunStatus::NumericalFailure;  // Converged means feasible
  DesignPoint point;
  double min_power = 0.0;
  int solver_iterations = 0;
};

/// Minimum-power feasible point. Infeasible when the SINR set is empty or
/// its minimum power exceeds P.
InitResult initialize(const NetworkInstance& inst, const AlgoConfig& cfg);

struct RunResult {
  RunStatus status = RunStatus::NumericalFailure;
  DesignPoint point;
  double objective = 0.0;
  IterateTrace trace;
  int outer_iterations = 0;  // surrogate programs solved
  int solver_iterations = 0;
};

/// Successive convex approximation of the sum (resp. minimum) harvested
/// energy. A candidate is accepted only if it is feasible and does not
/// decrease the objective; otherwise the run stops at the current iterate.
/// `start`, when given, replaces the minimum-power initialization.
RunResult maximize_sum_eh(const NetworkInstance& inst, const AlgoConfig& cfg, const DesignPoint* start = nullptr);
RunResult maximize_min_eh(const NetworkInstance& inst, const AlgoConfig& cfg, const DesignPoint* start = nullptr);

}  // namespace swipt
