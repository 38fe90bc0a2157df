#pragma once

// Random conic programs with a primal-dual optimal pair planted by
// construction: pick x*, complementary s* and z* in the cone, then set
// b = s* - A x* and c = -A^T z*. The optimal value is c.x* = b.z*.

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "swipt/conic/program.hpp"

namespace swipt::testing {

struct PlantedProgram {
  conic::ConicProgram prog;
  double optimum;
};

inline PlantedProgram random_socp(std::mt19937_64& rng, int n, int num_soc, int num_nonneg, int num_eq) {
  std::normal_distribution<double> N01;
  std::uniform_int_distribution<int> dim_dist(2, 6);
  std::uniform_real_distribution<double> U(0.2, 2.0);
  std::bernoulli_distribution coin(0.5);

  conic::ConicProgram prog(n);
  Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(n, [&] { return N01(rng); });
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);

  auto add = [&](conic::Cone cone, const Eigen::VectorXd& s, const Eigen::VectorXd& z) {
    const int rows = cone.rows();
    Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(rows, n, [&] { return N01(rng); });
    Eigen::VectorXd b = s - A * x;
    c -= A.transpose() * z;
    prog.add(std::move(A), std::move(b), cone);
  };

  for (int k = 0; k < num_soc; ++k) {
    const int d = dim_dist(rng);
    Eigen::VectorXd u = Eigen::VectorXd::NullaryExpr(d - 1, [&] { return N01(rng); });
    u.normalize();
    Eigen::VectorXd s(d), z(d);
    const int mode = std::uniform_int_distribution<int>(0, 2)(rng);
    if (mode == 0) {  // both on the boundary, opposite rays
      s << 1.0, u;
      z << 1.0, -u;
      s *= U(rng);
      z *= U(rng);
    } else if (mode == 1) {  // inactive cone
      s << 1.5, u;
      s *= U(rng);
      z.setZero();
    } else {  // dual slack zero
      s.setZero();
      z << 1.5, u;
      z *= U(rng);
    }
    add(conic::Cone::soc(d), s, z);
  }
  if (num_nonneg > 0) {
    Eigen::VectorXd s(num_nonneg), z(num_nonneg);
    for (int i = 0; i < num_nonneg; ++i) {
      if (coin(rng)) {
        s[i] = U(rng);
        z[i] = 0.0;
      } else {
        s[i] = 0.0;
        z[i] = U(rng);
      }
    }
    add(conic::Cone::nonneg(num_nonneg), s, z);
  }
  if (num_eq > 0) {
    Eigen::VectorXd z = Eigen::VectorXd::NullaryExpr(num_eq, [&] { return N01(rng); });
    add(conic::Cone::zero(num_eq), Eigen::VectorXd::Zero(num_eq), z);
  }
  prog.set_objective(c);
  return {std::move(prog), c.dot(x)};
}

// Infeasible by construction: a dual point y interior to K* with A^T y = 0
// and b.y = -1 is a Farkas certificate for {x : A x + b in K}.
inline conic::ConicProgram random_infeasible_socp(std::mt19937_64& rng, int n, int num_soc, int num_nonneg) {
  std::normal_distribution<double> N01;
  std::uniform_int_distribution<int> dim_dist(2, 6);
  std::uniform_real_distribution<double> U(0.2, 2.0);
  std::vector<conic::Cone> cones;
  std::vector<Eigen::VectorXd> ys;
  for (int k = 0; k < num_soc; ++k) {
    const int d = dim_dist(rng);
    Eigen::VectorXd u = Eigen::VectorXd::NullaryExpr(d - 1, [&] { return N01(rng); });
    Eigen::VectorXd y(d);
    y << 1.5, u.normalized();
    cones.push_back(conic::Cone::soc(d));
    ys.push_back(U(rng) * y);
  }
  if (num_nonneg > 0) {
    cones.push_back(conic::Cone::nonneg(num_nonneg));
    ys.push_back(Eigen::VectorXd::NullaryExpr(num_nonneg, [&] { return U(rng); }));
  }
  int m = 0;
  for (const auto& y : ys) m += static_cast<int>(y.size());
  Eigen::VectorXd y(m);
  for (int i = 0, off = 0; i < static_cast<int>(ys.size()); off += static_cast<int>(ys[i].size()), ++i)
    y.segment(off, ys[i].size()) = ys[i];
  Eigen::MatrixXd A = Eigen::MatrixXd::NullaryExpr(m, n, [&] { return N01(rng); });
  Eigen::VectorXd b = Eigen::VectorXd::NullaryExpr(m, [&] { return N01(rng); });
  A -= y * (y.transpose() * A) / y.squaredNorm();
  b -= y * (y.dot(b) + 1.0) / y.squaredNorm();
  conic::ConicProgram prog(n);
  for (int i = 0, off = 0; i < static_cast<int>(cones.size()); ++i) {
    const int r = cones[i].rows();
    prog.add(A.middleRows(off, r), b.segment(off, r), cones[i]);
    off += r;
  }
  // c = -A^T z with z interior to K* keeps the dual feasible, so the only
  // certificate is the primal one.
  Eigen::VectorXd z(m);
  for (int i = 0, off = 0; i < static_cast<int>(cones.size()); ++i) {
    const int r = cones[i].rows();
    z.segment(off, r) = Eigen::VectorXd::NullaryExpr(r, [&] { return U(rng); });
    if (cones[i].kind == conic::ConeKind::SecondOrder) z[off] = 1.0 + z.segment(off + 1, r - 1).norm();
    off += r;
  }
  prog.set_objective(-A.transpose() * z);
  return prog;
}

}  // namespace swipt::testing
