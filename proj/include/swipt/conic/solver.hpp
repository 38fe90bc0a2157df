#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swipt/conic/program.hpp"

namespace swipt::conic {

enum class SolverStatus { Optimal, Infeasible, Unbounded, MaxIters, NumericalFailure };

std::string to_string(SolverStatus status);

struct SolverSettings {
  double tol = 1e-8;
  int max_iters = 200;
  bool equilibrate = true;
};

/// Outcome of a solve. On Optimal, x is the primal point and duals[i] the
/// multiplier of constraint i (in the dual cone, with c + sum A_i^T z_i = 0).
/// On Infeasible, duals hold a Farkas certificate normalized to sum b_i.z_i = -1.
/// On Unbounded, x holds an improving ray.
struct SolverResult {
  SolverStatus status = SolverStatus::NumericalFailure;
  Eigen::VectorXd x;
  std::vector<Eigen::VectorXd> duals;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

/// Primal-dual interior-point method on the homogeneous self-dual embedding
/// with Nesterov-Todd scaling and Mehrotra correction. Dense linear algebra.
SolverResult solve(const ConicProgram& prog, const SolverSettings& settings = {});

/// Independent recomputation of optimality conditions from the program data.
struct CertificateReport {
  double primal_cone_violation = 0.0;  // worst distance of A_i x + b_i outside K_i
  double dual_cone_violation = 0.0;    // worst violation of z_i in K_i*
  double stationarity = 0.0;           // ||c + sum A_i^T z_i|| / max(1, ||c||)
  double gap = 0.0;                    // |sum b_i.z_i - c.x| / max(1, |c.x|)
  std::vector<bool> violated;          // per constraint, primal violation > tol
};

CertificateReport certify(const ConicProgram& prog, const SolverResult& result, double tol = 1e-7);

}  // namespace swipt::conic
