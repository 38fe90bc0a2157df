#include <cmath>
#include <random>

#include "doctest.h"
#include "support/random_instance.hpp"
#include "swipt/path_following.hpp"
#include "swipt/sdp_baselines.hpp"

using namespace swipt;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

MatrixXcd random_hermitian(std::mt19937_64& rng, int M) {
  MatrixXcd A(M, M);
  for (int j = 0; j < M; ++j) A.col(j) = testing::random_cvec(rng, M);
  return A + A.adjoint();
}

// Feasible instance drawn from the test generator (rejecting infeasible draws).
NetworkInstance feasible_instance(std::mt19937_64& rng, int M, int N1, int N2, double gain) {
  for (;;) {
    NetworkInstance inst = testing::random_instance(rng, M, N1, N2, 2.0, 1.0, gain);
    if (initialize(inst, AlgoConfig{}).status == RunStatus::Converged) return inst;
  }
}

}  // namespace

TEST_CASE("Hermitian parameter maps") {
  std::mt19937_64 rng(1);
  for (int M : {1, 2, 3, 5}) {
    const MatrixXcd W = random_hermitian(rng, M);
    const VectorXd theta = herm::to_params(W);
    REQUIRE(theta.size() == hermitian_real_params(M));
    CHECK((herm::to_matrix(theta, M) - W).norm() < 1e-12);
    const VectorXcd h = testing::random_cvec(rng, M);
    CHECK(herm::quad_form(h).dot(theta) == doctest::Approx((h.adjoint() * W * h)(0, 0).real()).epsilon(1e-12));
    CHECK(herm::trace(M).dot(theta) == doctest::Approx(W.trace().real()).epsilon(1e-12));
    // The embedding has the spectrum of W with every eigenvalue doubled.
    const Eigen::MatrixXd R = conic::smat(herm::embedding(M) * theta, 2 * M);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> er(R);
    Eigen::SelfAdjointEigenSolver<MatrixXcd> ew(W);
    for (int k = 0; k < M; ++k) {
      CHECK(er.eigenvalues()[2 * k] == doctest::Approx(ew.eigenvalues()[k]).epsilon(1e-10));
      CHECK(er.eigenvalues()[2 * k + 1] == doctest::Approx(ew.eigenvalues()[k]).epsilon(1e-10));
    }
  }
}

TEST_CASE("outer-product dimension bookkeeping") {
  CHECK(outer_product_dimension(6, 6) == 126);
  CHECK(outer_product_dimension(7, 6) == 168);
  CHECK(outer_product_dimension(8, 6) == 216);
  CHECK(psd_available());
}

TEST_CASE("rank-one extraction") {
  std::mt19937_64 rng(2);
  const VectorXcd h = testing::random_cvec(rng, 4);
  OuterProductSolution sol;
  sol.W = {h * h.adjoint()};
  sol.eigen_ratios = {0.0};
  sol.alpha = VectorXd::Constant(1, 0.5);
  Extraction ex = rank_one_extract(sol);
  REQUIRE(ex.rank_one);
  const VectorXcd& w = ex.point.w[0];
  CHECK((sol.W[0] - w * w.adjoint()).norm() <= 1e-12 * sol.W[0].norm());
  CHECK(ex.point.t[0] == doctest::Approx(2.0));

  sol.W = {MatrixXcd::Identity(3, 3)};
  sol.eigen_ratios = {1.0};
  ex = rank_one_extract(sol);
  CHECK_FALSE(ex.rank_one);
  REQUIRE(ex.ratios.size() == 1);
  CHECK(ex.ratios[0] == doctest::Approx(1.0));
}

TEST_CASE("single user: the relaxation is tight with the MRT outer product") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const testing::SingleUser s = testing::single_user(rng, 0.3 + 0.05 * trial);
    const NetworkInstance& inst = s.inst;
    const VectorXd alpha = VectorXd::Constant(1, std::sqrt(s.alpha_sq));
    const OuterProductSolution sol = solve_relaxation_fixed_alpha(inst, alpha);
    REQUIRE(sol.status == conic::SolverStatus::Optimal);
    const VectorXcd& h = inst.h[0];
    const MatrixXcd mrt = inst.P * h * h.adjoint() / h.squaredNorm();
    CHECK((sol.W[0] - mrt).norm() <= 1e-6 * mrt.norm());
    CHECK(sol.eigen_ratios[0] <= 1e-6);
    CHECK(sol.value == doctest::Approx(s.energy).epsilon(1e-6));
  }
}

TEST_CASE("relaxation solutions respect the power budget and stay PSD") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const NetworkInstance inst = feasible_instance(rng, 3 + trial % 3, 1 + trial % 2, 1, 100.0);
    const OuterProductSolution sol = solve_relaxation_fixed_alpha(inst, VectorXd::Constant(inst.N1, 0.5));
    REQUIRE(sol.status == conic::SolverStatus::Optimal);
    double tr = 0.0;
    for (const auto& W : sol.W) {
      tr += W.trace().real();
      Eigen::SelfAdjointEigenSolver<MatrixXcd> es(W);
      CHECK(es.eigenvalues().minCoeff() >= -1e-8 * std::max(1.0, es.eigenvalues().maxCoeff()));
    }
    CHECK(tr <= inst.P * (1.0 + 1e-6));
  }
}

TEST_CASE("relaxation dominates the path-following value at its splitting ratios") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const NetworkInstance inst = feasible_instance(rng, 3 + trial % 2, 1 + trial % 2, trial % 2, 100.0);
    const RunResult alg = maximize_sum_eh(inst, AlgoConfig{});
    REQUIRE(alg.status == RunStatus::Converged);
    const OuterProductSolution sol = solve_relaxation_fixed_alpha(inst, alg.point.alpha);
    REQUIRE(sol.status == conic::SolverStatus::Optimal);
    CHECK(sol.value >= alg.objective * (1.0 - 1e-7));
  }
}

TEST_CASE("extracted rank-one points are feasible") {
  std::mt19937_64 rng(6);
  int extracted = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const NetworkInstance inst = feasible_instance(rng, 4, 2, 1, 100.0);
    const OuterProductSolution sol = solve_relaxation_fixed_alpha(inst, VectorXd::Constant(inst.N1, 0.4));
    if (sol.status != conic::SolverStatus::Optimal) continue;
    const Extraction ex = rank_one_extract(sol);
    if (!ex.rank_one) continue;
    ++extracted;
    CHECK(constraint_residuals(inst, ex.point).worst_relative_violation(inst) <= 1e-5);
    CHECK(sum_eh(inst, ex.point) == doctest::Approx(sol.value).epsilon(1e-5));
  }
  CHECK(extracted >= 10);
}

TEST_CASE("bisection: single-user closed form") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const testing::SingleUser s = testing::single_user(rng, 0.2 + 0.15 * trial);
    const BisectionResult b = bisection_max_min(s.inst, 1e-3);
    CHECK(b.upper_bound >= s.energy * (1.0 - 1e-6));
    CHECK(b.upper_bound <= s.energy * (1.0 + 1e-3));
    CHECK(b.lower_bound <= s.energy * (1.0 + 1e-6));
  }
}

TEST_CASE("bisection bounds the path-following max-min value and agrees with the direct program") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 6; ++trial) {
    const NetworkInstance inst = feasible_instance(rng, 4, 2, 1, 50.0);
    const RunResult alg = maximize_min_eh(inst, AlgoConfig{});
    REQUIRE(alg.status == RunStatus::Converged);
    const BisectionResult b = bisection_max_min(inst, 1e-3);
    CHECK(b.upper_bound >= alg.objective * (1.0 - 1e-6));
    CHECK(b.sdp_solves >= 2);
    CHECK((b.upper_bound - b.lower_bound) <= 1e-3 * b.upper_bound);
    const OuterProductSolution direct = solve_max_min_relaxation(inst);
    REQUIRE(direct.status == conic::SolverStatus::Optimal);
    CHECK(direct.value <= b.upper_bound * (1.0 + 1e-5));
    CHECK(direct.value >= b.lower_bound * (1.0 - 1e-5));
    // Feasibility is monotone in the level.
    for (int k = 1; k <= 5; ++k) CHECK(max_min_feasible(inst, b.lower_bound * k / 6.0));
    CHECK_FALSE(max_min_feasible(inst, 1.05 * b.upper_bound));
  }
}

TEST_CASE("branch and bound sandwiches the path-following value") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 8; ++trial) {
    const NetworkInstance inst = feasible_instance(rng, 3, 1, 1, 10.0);
    const RunResult alg = maximize_sum_eh(inst, AlgoConfig{});
    REQUIRE(alg.status == RunStatus::Converged);
    const BBResult bb = bb_sum_eh(inst, 1e-2, 500);
    CHECK_FALSE(bb.budget_exhausted);
    CHECK(bb.bound_monotone);
    CHECK(bb.incumbent <= bb.upper_bound * (1.0 + 1e-9));
    CHECK(bb.incumbent >= alg.objective * (1.0 - 1e-9));
    CHECK(alg.objective >= (1.0 - 1e-2) * bb.upper_bound);
    CHECK(sum_eh(inst, bb.incumbent_point) == doctest::Approx(bb.incumbent).epsilon(1e-12));
  }
}

TEST_CASE("box bounds shrink with the box") {
  std::mt19937_64 rng(10);
  const NetworkInstance inst = feasible_instance(rng, 3, 2, 0, 20.0);
  const OuterProductSolution wide = box_upper_bound(inst, VectorXd::Constant(2, 0.1), VectorXd::Constant(2, 0.9));
  const OuterProductSolution narrow = box_upper_bound(inst, VectorXd::Constant(2, 0.3), VectorXd::Constant(2, 0.6));
  REQUIRE(wide.status == conic::SolverStatus::Optimal);
  REQUIRE(narrow.status == conic::SolverStatus::Optimal);
  CHECK(narrow.value <= wide.value * (1.0 + 1e-7));
  // A degenerate box is the fixed-alpha relaxation.
  const OuterProductSolution point = box_upper_bound(inst, VectorXd::Constant(2, 0.4), VectorXd::Constant(2, 0.4));
  const OuterProductSolution fixed = solve_relaxation_fixed_alpha(inst, VectorXd::Constant(2, 0.4));
  CHECK(point.value == doctest::Approx(fixed.value).epsilon(1e-7));
}

TEST_CASE("argument validation") {
  std::mt19937_64 rng(11);
  const NetworkInstance inst = testing::random_instance(rng, 3, 2, 1);
  CHECK_THROWS_AS(solve_relaxation_fixed_alpha(inst, VectorXd::Constant(1, 0.5)), std::invalid_argument);
  CHECK_THROWS_AS(box_upper_bound(inst, VectorXd::Constant(2, 0.5), VectorXd::Constant(3, 0.5)),
                  std::invalid_argument);
}
