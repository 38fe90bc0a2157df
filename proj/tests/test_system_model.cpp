#include <cmath>
#include <random>

#include "doctest.h"
#include "support/random_instance.hpp"
#include "swipt/system_model.hpp"

using namespace swipt;
using Eigen::VectorXcd;

namespace {

NetworkInstance tiny(int N1, int N2, int M) {
  NetworkInstance inst;
  inst.M = M;
  inst.N1 = N1;
  inst.N2 = N2;
  inst.h.assign(N1 + N2, VectorXcd::Zero(M));
  inst.zeta.assign(N1, 0.5);
  inst.gamma_min.assign(N1 + N2, 1.0);
  return inst;
}

VectorXcd cv(std::initializer_list<std::complex<double>> v) {
  VectorXcd r(v.size());
  int i = 0;
  for (auto x : v) r[i++] = x;
  return r;
}

}  // namespace

TEST_CASE("sinr: single user without interference or circuit noise") {
  NetworkInstance inst = tiny(0, 1, 2);
  inst.h[0] = cv({1.0, 0.0});
  inst.sigma_a_sq = 1.0;
  inst.sigma_c_sq = 0.0;
  DesignPoint pt;
  pt.w = {cv({2.0, 0.0})};
  CHECK(sinr(inst, pt, 0) == doctest::Approx(4.0));
}

TEST_CASE("sinr: EH-ID user divides circuit noise by alpha^2") {
  NetworkInstance inst = tiny(1, 0, 1);
  inst.h[0] = cv({1.0});
  inst.sigma_a_sq = 1.0;
  inst.sigma_c_sq = 1.0;
  DesignPoint pt;
  pt.w = {cv({std::sqrt(6.0)})};
  pt.alpha = Eigen::VectorXd::Constant(1, std::sqrt(0.5));
  CHECK(sinr(inst, pt, 0) == doctest::Approx(2.0));
  pt.alpha[0] = 0.0;
  CHECK_THROWS_AS(sinr(inst, pt, 0), std::domain_error);
}

TEST_CASE("sinr: interference from the other beam") {
  NetworkInstance inst = tiny(0, 2, 1);
  inst.h[0] = cv({1.0});
  inst.h[1] = cv({1.0});
  inst.sigma_a_sq = 1.0;
  inst.sigma_c_sq = 0.0;
  DesignPoint pt;
  pt.w = {cv({3.0}), cv({std::sqrt(3.0)})};
  CHECK(sinr(inst, pt, 0) == doctest::Approx(2.25));
}

TEST_CASE("harvested energy examples") {
  NetworkInstance inst = tiny(1, 0, 1);
  inst.h[0] = cv({1.0});
  inst.sigma_a_sq = 1.0;
  DesignPoint pt;
  pt.w = {cv({1.0})};  // p = 1 + 1 = 2
  pt.alpha = Eigen::VectorXd::Constant(1, std::sqrt(0.5));
  CHECK(harvested_energy(inst, pt, 0) == doctest::Approx(0.5));
  pt.alpha[0] = 1.0;
  CHECK(harvested_energy(inst, pt, 0) == 0.0);
  pt.w = {cv({0.0})};
  pt.alpha[0] = 0.0;
  inst.sigma_a_sq = 1e-12;
  CHECK(harvested_energy(inst, pt, 0) == doctest::Approx(5e-13).epsilon(1e-12));
  CHECK_THROWS_AS(harvested_energy(inst, pt, 1), std::out_of_range);
}

TEST_CASE("sum and min harvested energy") {
  std::mt19937_64 rng(1);
  const NetworkInstance inst = testing::random_instance(rng, 4, 3, 2);
  const DesignPoint pt = testing::random_point(rng, inst, 0.7);
  double s = 0.0, m = 1e300;
  for (int k = 0; k < 3; ++k) {
    s += harvested_energy(inst, pt, k);
    m = std::min(m, harvested_energy(inst, pt, k));
  }
  CHECK(sum_eh(inst, pt) == doctest::Approx(s));
  CHECK(min_eh(inst, pt) == doctest::Approx(m));
}

TEST_CASE("constraint residuals: power boundary and zero beams") {
  std::mt19937_64 rng(2);
  const NetworkInstance inst = testing::random_instance(rng, 3, 2, 2, 1.5, 2.0);
  DesignPoint pt = testing::random_point(rng, inst, inst.P);
  ResidualReport r = constraint_residuals(inst, pt);
  CHECK(std::abs(r.power) <= 1e-12);
  for (auto& w : pt.w) w.setZero();
  r = constraint_residuals(inst, pt);
  for (int n = 0; n < inst.N(); ++n) CHECK(r.sinr[n] == doctest::Approx(-inst.gamma_min[n]));
  CHECK_FALSE(r.feasible(inst, 1e-6));
  CHECK(r.worst_relative_violation(inst) == doctest::Approx(1.0));
}

TEST_CASE("energies scale linearly with received powers") {
  std::mt19937_64 rng(3);
  NetworkInstance inst = testing::random_instance(rng, 4, 3, 1);
  const DesignPoint pt = testing::random_point(rng, inst, 1.0);
  const double s0 = sum_eh(inst, pt), m0 = min_eh(inst, pt);
  const double k = 7.5;
  for (auto& h : inst.h) h *= std::sqrt(k);
  inst.sigma_a_sq *= k;
  CHECK(sum_eh(inst, pt) == doctest::Approx(k * s0).epsilon(1e-12));
  CHECK(min_eh(inst, pt) == doctest::Approx(k * m0).epsilon(1e-12));
}

TEST_CASE("sinr is invariant to a phase rotation of any beam") {
  std::mt19937_64 rng(4);
  const NetworkInstance inst = testing::random_instance(rng, 4, 2, 2);
  DesignPoint pt = testing::random_point(rng, inst, 1.0);
  std::vector<double> before;
  for (int n = 0; n < inst.N(); ++n) before.push_back(sinr(inst, pt, n));
  std::uniform_real_distribution<double> ph(0.0, 6.28);
  for (auto& w : pt.w) w *= std::polar(1.0, ph(rng));
  for (int n = 0; n < inst.N(); ++n) CHECK(sinr(inst, pt, n) == doctest::Approx(before[n]).epsilon(1e-12));
}

TEST_CASE("normalization preserves SINR and maps energies by scale") {
  std::mt19937_64 rng(5);
  NetworkInstance raw = testing::random_instance(rng, 3, 2, 1);
  for (auto& h : raw.h) h *= 1e-6;
  raw.sigma_a_sq = 1e-12;
  raw.sigma_c_sq = 3e-12;
  const NetworkInstance inst = normalize(raw);
  const DesignPoint pt = testing::random_point(rng, raw, 0.5);
  CHECK(inst.sigma_a_sq == 1.0);
  CHECK(inst.scale == doctest::Approx(1e-12));
  for (int n = 0; n < raw.N(); ++n) CHECK(sinr(inst, pt, n) == doctest::Approx(sinr(raw, pt, n)).epsilon(1e-12));
  CHECK(sum_eh(inst, pt) * inst.scale == doctest::Approx(sum_eh(raw, pt)).epsilon(1e-12));
}

TEST_CASE("instance validation") {
  std::mt19937_64 rng(6);
  NetworkInstance inst = testing::random_instance(rng, 3, 1, 1);
  CHECK_NOTHROW(inst.validate());
  NetworkInstance bad = inst;
  bad.zeta[0] = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = inst;
  bad.gamma_min[1] = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = inst;
  bad.h.pop_back();
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
