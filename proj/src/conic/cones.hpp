#pragma once

// Internal product-cone algebra used by the interior-point solver.
// Vectors are laid out as [nonneg | soc_1 | ... | soc_k | psd_1 | ... ].

#include <vector>

#include <Eigen/Dense>

namespace swipt::conic::detail {

struct ConeLayout {
  int nonneg = 0;
  std::vector<int> soc;  // dims
  std::vector<int> psd;  // sides
  std::vector<int> soc_offset;
  std::vector<int> psd_offset;
  int total = 0;

  void finalize();
  int degree() const;
};

Eigen::VectorXd identity(const ConeLayout& K);

/// Smallest Jordan eigenvalue of x.
double min_eigenvalue(const ConeLayout& K, const Eigen::VectorXd& x);

/// Largest alpha >= 0 with x + alpha d in K (infinity when unrestricted).
/// x must be interior.
double max_step(const ConeLayout& K, const Eigen::VectorXd& x, const Eigen::VectorXd& d);

Eigen::VectorXd jordan_product(const ConeLayout& K, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Nesterov-Todd scaling W with W z = W^{-T} s = lambda.
class NtScaling {
 public:
  NtScaling(const ConeLayout& K, const Eigen::VectorXd& s, const Eigen::VectorXd& z);

  bool ok() const { return ok_; }
  const Eigen::VectorXd& lambda() const { return lambda_; }

  Eigen::VectorXd W(const Eigen::VectorXd& v) const;
  Eigen::VectorXd WT(const Eigen::VectorXd& v) const;
  Eigen::VectorXd Winv(const Eigen::VectorXd& v) const;
  Eigen::VectorXd WinvT(const Eigen::VectorXd& v) const;

  /// W^{-T} applied column-wise to the rows of one block.
  /// kind: 0 nonneg (rows are a contiguous range starting at `row0`),
  /// 1 soc index, 2 psd index.
  void WinvT_nonneg_rows(int row0, Eigen::MatrixXd& M) const;
  void WinvT_soc(int index, Eigen::MatrixXd& M) const;
  void WinvT_psd(int index, Eigen::MatrixXd& M) const;

  /// Solves lambda o u = v.
  Eigen::VectorXd lambda_divide(const Eigen::VectorXd& v) const;

 private:
  struct Soc {
    double beta = 1.0;
    Eigen::VectorXd w;  // hyperbolic unit vector, w^T J w = 1
  };
  struct Psd {
    Eigen::MatrixXd R;
    Eigen::MatrixXd Rinv;
    Eigen::VectorXd eig;  // diagonal of the scaled point
  };

  void soc_apply(int i, const Eigen::VectorXd& in, Eigen::Ref<Eigen::VectorXd> out, bool inverse) const;

  const ConeLayout* K_;
  bool ok_ = true;
  Eigen::VectorXd d_;  // nonneg: sqrt(s/z)
  std::vector<Soc> soc_;
  std::vector<Psd> psd_;
  Eigen::VectorXd lambda_;
};

}  // namespace swipt::conic::detail
