#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "swipt/conic/solver.hpp"
#include "swipt/path_following.hpp"
#include "swipt/system_model.hpp"

namespace swipt {

/// Raised when the conic core was built without PSD cone support.
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool psd_available();

/// Complex upper-triangle entries of the N outer products, N M (M + 1) / 2.
long outer_product_dimension(int M, int N);
/// Real parameters of one Hermitian M x M matrix (M^2).
int hermitian_real_params(int M);

// Hermitian matrices enter the conic programs through the real embedding
// [[Re W, -Im W], [Im W, Re W]], which is PSD iff W is.
namespace herm {
/// Row r with r . theta = h^H W(theta) h.
Eigen::RowVectorXd quad_form(const Eigen::VectorXcd& h);
Eigen::RowVectorXd trace(int M);
/// svec of the real embedding as a linear map of theta.
Eigen::MatrixXd embedding(int M);
Eigen::MatrixXcd to_matrix(const Eigen::VectorXd& theta, int M);
Eigen::VectorXd to_params(const Eigen::MatrixXcd& W);
}  // namespace herm

struct OuterProductSolution {
  conic::SolverStatus status = conic::SolverStatus::NumericalFailure;
  std::vector<Eigen::MatrixXcd> W;  // N matrices, watts
  Eigen::VectorXd alpha;            // N1
  std::vector<double> eigen_ratios;  // lambda_2 / lambda_1 per matrix
  double value = 0.0;               // objective in instance units
  int solver_iterations = 0;

  bool rank_one(double tol_rank) const;
};

/// Relaxed sum-EH problem at fixed splitting ratios.
OuterProductSolution solve_relaxation_fixed_alpha(const NetworkInstance& inst, const Eigen::VectorXd& alpha,
                                                  const conic::SolverSettings& st = {});

/// Upper bound of the sum-EH optimum over alpha in the box [p, q]: the
/// objective uses (1 - p^2) and the SINR constraints sigma_c^2 / q^2.
OuterProductSolution box_upper_bound(const NetworkInstance& inst, const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                                     const conic::SolverSettings& st = {});

/// Feasibility of zeta p~_n(W) (1 - alpha_n^2) >= lambda for all EH-ID UEs
/// under the relaxed constraints, alpha free in [alpha_min, alpha_max].
/// Solver outcomes other than Optimal/Infeasible count as feasible.
bool max_min_feasible(const NetworkInstance& inst, double lambda, const conic::SolverSettings& st = {},
                      OuterProductSolution* out = nullptr, double alpha_min = kAlphaMin, double alpha_max = kAlphaMax);

struct BisectionResult {
  double upper_bound = 0.0;  // bracket top, instance units
  double lower_bound = 0.0;  // last feasible level
  int sdp_solves = 0;        // including the bracket-initializing bound
  OuterProductSolution solution;  // at the last feasible level
};

/// Bisection on lambda in [0, lambda_hi] until (hi - lo) <= tol_lambda * hi,
/// with lambda_hi the root box bound divided by N1.
BisectionResult bisection_max_min(const NetworkInstance& inst, double tol_lambda = 1e-3,
                                  const conic::SolverSettings& st = {});

/// The relaxed max-min problem as one program (maximize z, lambda = z^2).
OuterProductSolution solve_max_min_relaxation(const NetworkInstance& inst, const conic::SolverSettings& st = {});

struct BBResult {
  double upper_bound = 0.0;
  double incumbent = 0.0;
  DesignPoint incumbent_point;
  int nodes_expanded = 0;
  bool budget_exhausted = false;
  bool bound_monotone = true;  // every child bound <= its parent bound
};

/// Best-first branch and bound over the splitting ratios for the sum-EH
/// problem, splitting the longest box edge at its midpoint.
BBResult bb_sum_eh(const NetworkInstance& inst, double gap_tol = 1e-2, int node_budget = 500,
                   const AlgoConfig& cfg = {});

struct Extraction {
  bool rank_one = false;
  DesignPoint point;  // valid when rank_one
  std::vector<double> ratios;
};

/// Principal-eigenvector beams when every lambda_2 / lambda_1 <= tol_rank.
Extraction rank_one_extract(const OuterProductSolution& sol, double tol_rank = 1e-4);

}  // namespace swipt
