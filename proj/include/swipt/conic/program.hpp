#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace swipt::conic {

enum class ConeKind { Zero, Nonneg, SecondOrder, RotatedSecondOrder, Psd };

/// Cone membership tag for one block of rows.
///
/// Row conventions:
///  - SecondOrder(d):        (u0, u1..u_{d-1}) with u0 >= ||u1..||.
///  - RotatedSecondOrder(d): (u, v, z...) with 2*u*v >= ||z||^2, u, v >= 0.
///  - Psd(k):                svec of a symmetric k x k matrix; lower triangle in
///                           column-major order, off-diagonal entries scaled by
///                           sqrt(2) so that svec(X).svec(Y) = trace(XY).
struct Cone {
  ConeKind kind = ConeKind::Nonneg;
  int dim = 0;  // row count, or matrix side for Psd

  static Cone zero(int rows) { return {ConeKind::Zero, rows}; }
  static Cone nonneg(int rows) { return {ConeKind::Nonneg, rows}; }
  static Cone soc(int rows) { return {ConeKind::SecondOrder, rows}; }
  static Cone rotated_soc(int rows) { return {ConeKind::RotatedSecondOrder, rows}; }
  static Cone psd(int side) { return {ConeKind::Psd, side}; }

  int rows() const { return kind == ConeKind::Psd ? dim * (dim + 1) / 2 : dim; }
};

std::string to_string(ConeKind kind);

/// Membership constraint  A x + b in K.
struct Constraint {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Cone cone;
};

/// maximize c.x subject to an ordered list of cone memberships.
class ConicProgram {
 public:
  explicit ConicProgram(int num_vars);

  int num_vars() const { return num_vars_; }

  const Eigen::VectorXd& objective() const { return objective_; }
  void set_objective(Eigen::VectorXd c);

  /// Appends a constraint; throws std::invalid_argument on dimension mismatch
  /// or non-finite data.
  void add(Eigen::MatrixXd A, Eigen::VectorXd b, Cone cone);

  const std::vector<Constraint>& constraints() const { return constraints_; }

  /// Plain-text dump for cross-checking against external solvers.
  void write(std::ostream& os) const;

 private:
  int num_vars_;
  Eigen::VectorXd objective_;
  std::vector<Constraint> constraints_;
};

// svec / smat for Psd blocks.
int svec_size(int side);
int svec_index(int row, int col, int side);  // row >= col
Eigen::VectorXd svec(const Eigen::MatrixXd& X);
Eigen::MatrixXd smat(const Eigen::VectorXd& v, int side);

}  // namespace swipt::conic
