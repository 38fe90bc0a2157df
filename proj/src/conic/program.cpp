#include "swipt/conic/program.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace swipt::conic {

std::string to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::Zero: return "zero";
    case ConeKind::Nonneg: return "nonneg";
    case ConeKind::SecondOrder: return "soc";
    case ConeKind::RotatedSecondOrder: return "rsoc";
    case ConeKind::Psd: return "psd";
  }
  return "unknown";
}

ConicProgram::ConicProgram(int num_vars) : num_vars_(num_vars), objective_(Eigen::VectorXd::Zero(num_vars)) {
  if (num_vars < 1) throw std::invalid_argument("ConicProgram: num_vars must be >= 1");
}

void ConicProgram::set_objective(Eigen::VectorXd c) {
  if (c.size() != num_vars_) throw std::invalid_argument("ConicProgram: objective size mismatch");
  if (!c.allFinite()) throw std::invalid_argument("ConicProgram: non-finite objective");
  objective_ = std::move(c);
}

void ConicProgram::add(Eigen::MatrixXd A, Eigen::VectorXd b, Cone cone) {
  int min_dim = 1;
  if (cone.kind == ConeKind::RotatedSecondOrder) min_dim = 2;
  if (cone.dim < min_dim) {
    throw std::invalid_argument("ConicProgram: " + to_string(cone.kind) + " cone of dimension " +
                                std::to_string(cone.dim));
  }
  if (A.rows() != cone.rows() || b.size() != cone.rows()) {
    throw std::invalid_argument("ConicProgram: " + to_string(cone.kind) + " cone expects " +
                                std::to_string(cone.rows()) + " rows, got " + std::to_string(A.rows()));
  }
  if (A.cols() != num_vars_) throw std::invalid_argument("ConicProgram: column count mismatch");
  if (!A.allFinite() || !b.allFinite()) throw std::invalid_argument("ConicProgram: non-finite constraint data");
  constraints_.push_back({std::move(A), std::move(b), cone});
}

void ConicProgram::write(std::ostream& os) const {
  os << std::setprecision(17);
  os << "# maximize c.x subject to A_i x + b_i in K_i\n";
  os << "vars " << num_vars_ << "\n";
  os << "objective";
  for (int j = 0; j < num_vars_; ++j) os << ' ' << objective_[j];
  os << "\n";
  os << "constraints " << constraints_.size() << "\n";
  for (const auto& con : constraints_) {
    os << "cone " << to_string(con.cone.kind) << ' ' << con.cone.dim << ' ' << con.A.rows() << "\n";
    for (int i = 0; i < con.A.rows(); ++i) {
      // sparse row: b then (col:value) pairs
      os << con.b[i];
      for (int j = 0; j < num_vars_; ++j) {
        if (con.A(i, j) != 0.0) os << ' ' << j << ':' << con.A(i, j);
      }
      os << "\n";
    }
  }
}

int svec_size(int side) { return side * (side + 1) / 2; }

int svec_index(int row, int col, int side) {
  // column-major lower triangle
  return col * side - col * (col - 1) / 2 + (row - col);
}

Eigen::VectorXd svec(const Eigen::MatrixXd& X) {
  const int k = static_cast<int>(X.rows());
  Eigen::VectorXd v(svec_size(k));
  int idx = 0;
  for (int j = 0; j < k; ++j) {
    v[idx++] = X(j, j);
    for (int i = j + 1; i < k; ++i) v[idx++] = std::sqrt(2.0) * 0.5 * (X(i, j) + X(j, i));
  }
  return v;
}

Eigen::MatrixXd smat(const Eigen::VectorXd& v, int side) {
  Eigen::MatrixXd X(side, side);
  int idx = 0;
  for (int j = 0; j < side; ++j) {
    X(j, j) = v[idx++];
    for (int i = j + 1; i < side; ++i) {
      X(i, j) = X(j, i) = v[idx++] / std::sqrt(2.0);
    }
  }
  return X;
}

}  // namespace swipt::conic
