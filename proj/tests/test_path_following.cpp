#include <cmath>
#include <random>

#include "doctest.h"
#include "support/random_instance.hpp"
#include "swipt/path_following.hpp"

using namespace swipt;

namespace {

// Raw ascent, surrogate sandwich and feasibility along one trace.
void check_trace(const NetworkInstance& inst, const RunResult& r, bool sum) {
  double F = r.trace.initial_objective;
  for (const IterateRecord& rec : r.trace.records) {
    if (rec.solver_status != conic::SolverStatus::Optimal) continue;
    CHECK(rec.surrogate_at_expansion == doctest::Approx(F).epsilon(1e-10));
    CHECK(rec.objective >= rec.surrogate - 1e-9 * std::abs(rec.surrogate));
    CHECK(rec.objective >= F - 1e-7 * std::abs(F));
    if (rec.accepted) F = rec.objective;
  }
  CHECK(r.objective == F);
  CHECK(constraint_residuals(inst, r.point).worst_relative_violation(inst) <= 1e-6);
  CHECK(r.objective == doctest::Approx(sum ? sum_eh(inst, r.point) : min_eh(inst, r.point)).epsilon(1e-12));
}

}  // namespace

TEST_CASE("initialization: slack problem") {
  std::mt19937_64 rng(30);
  const NetworkInstance inst = testing::random_instance(rng, 4, 2, 2, 0.01, 10.0);
  const InitResult init = initialize(inst, AlgoConfig{});
  REQUIRE(init.status == RunStatus::Converged);
  CHECK(init.point.total_power() < 1e-2 * inst.P);
  CHECK(constraint_residuals(inst, init.point).worst_relative_violation(inst) <= 1e-6);
}

TEST_CASE("initialization: single-user power threshold") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    NetworkInstance inst = testing::random_instance(rng, 3, 1, 0, 5.0, 1.0);
    inst.sigma_c_sq = 1e-9;
    const double pmin = inst.gamma_min[0] * inst.sigma_a_sq / inst.h[0].squaredNorm();
    inst.P = 1.01 * pmin;
    InitResult init = initialize(inst, AlgoConfig{});
    REQUIRE(init.status == RunStatus::Converged);
    CHECK(init.min_power == doctest::Approx(pmin).epsilon(1e-5));
    inst.P = 0.99 * pmin;
    init = initialize(inst, AlgoConfig{});
    CHECK(init.status == RunStatus::Infeasible);
    CHECK(maximize_sum_eh(inst, AlgoConfig{}).status == RunStatus::Infeasible);
  }
}

TEST_CASE("single EH-ID user matches the closed form") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (int trial = 0; trial < 20; ++trial) {
    const testing::SingleUser s = testing::single_user(rng, u(rng));
    const RunResult r = maximize_sum_eh(s.inst, AlgoConfig{});
    REQUIRE(r.status == RunStatus::Converged);
    CHECK(r.point.alpha[0] * r.point.alpha[0] == doctest::Approx(s.alpha_sq).epsilon(1e-4));
    CHECK(r.objective == doctest::Approx(s.energy).epsilon(1e-4));
    const Eigen::VectorXcd mrt = std::sqrt(s.inst.P) * s.inst.h[0] / s.inst.h[0].norm();
    CHECK(std::abs(s.inst.h[0].dot(r.point.w[0])) == doctest::Approx(std::abs(s.inst.h[0].dot(mrt))).epsilon(1e-4));
  }
}

TEST_CASE("sum-EH traces ascend and stay feasible") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 15; ++trial) {
    const NetworkInstance inst = testing::random_instance(rng, 3 + trial % 4, 1 + trial % 3, trial % 2, 2.0);
    const RunResult r = maximize_sum_eh(inst, AlgoConfig{});
    REQUIRE(r.status == RunStatus::Converged);
    CHECK(r.objective >= r.trace.initial_objective);
    check_trace(inst, r, true);
  }
}

TEST_CASE("max-min traces ascend and stay feasible") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 15; ++trial) {
    const NetworkInstance inst = testing::random_instance(rng, 3 + trial % 4, 1 + trial % 3, trial % 2, 2.0);
    const RunResult r = maximize_min_eh(inst, AlgoConfig{});
    REQUIRE(r.status == RunStatus::Converged);
    check_trace(inst, r, false);
  }
}

TEST_CASE("restarting from a converged point is a fixed point") {
  std::mt19937_64 rng(35);
  const AlgoConfig cfg;
  for (int trial = 0; trial < 5; ++trial) {
    const NetworkInstance inst = testing::random_instance(rng, 4, 2, 2);
    const RunResult r = maximize_sum_eh(inst, cfg);
    REQUIRE(r.status == RunStatus::Converged);
    AlgoConfig one = cfg;
    one.max_outer_iters = 1;
    const RunResult again = maximize_sum_eh(inst, one, &r.point);
    CHECK(again.objective - r.objective <= cfg.tol_converge * r.objective);
    CHECK(again.objective >= r.objective);
  }
}

TEST_CASE("max-min with one EH-ID UE equals sum-EH") {
  std::mt19937_64 rng(36);
  for (int trial = 0; trial < 8; ++trial) {
    const NetworkInstance inst = testing::random_instance(rng, 3, 1, 2);
    const RunResult a = maximize_sum_eh(inst, AlgoConfig{});
    const RunResult b = maximize_min_eh(inst, AlgoConfig{});
    REQUIRE(a.status == RunStatus::Converged);
    REQUIRE(b.status == RunStatus::Converged);
    CHECK(b.objective == doctest::Approx(a.objective).epsilon(1e-4));
  }
}

TEST_CASE("min EH is at most the mean of the sum-EH optimum") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 8; ++trial) {
    const NetworkInstance inst = testing::random_instance(rng, 4, 3, 1);
    const RunResult a = maximize_sum_eh(inst, AlgoConfig{});
    const RunResult b = maximize_min_eh(inst, AlgoConfig{});
    CHECK(b.objective <= a.objective / inst.N1 * (1.0 + 1e-6));
  }
}

TEST_CASE("runs are deterministic") {
  std::mt19937_64 rng(38);
  const NetworkInstance inst = testing::random_instance(rng, 4, 2, 2);
  const RunResult a = maximize_sum_eh(inst, AlgoConfig{});
  const RunResult b = maximize_sum_eh(inst, AlgoConfig{});
  REQUIRE(a.trace.records.size() == b.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    CHECK(a.trace.records[i].objective == b.trace.records[i].objective);
    CHECK(a.trace.records[i].solver_iterations == b.trace.records[i].solver_iterations);
  }
}

TEST_CASE("config validation") {
  AlgoConfig c;
  c.tol_converge = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = AlgoConfig{};
  c.max_outer_iters = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  std::mt19937_64 rng(39);
  const NetworkInstance id_only = testing::random_instance(rng, 2, 0, 2);
  CHECK_THROWS_AS(maximize_sum_eh(id_only, AlgoConfig{}), std::invalid_argument);
}
