#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "swipt/system_model.hpp"

namespace swipt {

inline constexpr double kAlphaMin = 1e-3;
inline constexpr double kAlphaMax = 1.0 - 1e-3;

/// Linearization of |z|^2 / y at (z_bar, y_bar):
///   2 Re{conj(z_bar) z} / y_bar - |z_bar|^2 y / y_bar^2,
/// a global underestimator. Throws std::domain_error unless y, y_bar > 0.
double perspective_bound(std::complex<double> z, std::complex<double> z_bar, double y, double y_bar);

// Expansion point of the concave minorant of (1 - alpha^2) p(w). Splitting
// ratios are clamped into [alpha_min, alpha_max] on construction.
class ExpansionPoint {
 public:
  ExpansionPoint(const NetworkInstance& inst, const DesignPoint& pt, double alpha_min = kAlphaMin,
                 double alpha_max = kAlphaMax);

  const std::vector<Eigen::VectorXcd>& w() const { return w_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  std::complex<double> a(int n1, int eta) const { return a_[n1][eta]; }  // h_n1^H w_eta
  double p(int n1) const { return p_[n1]; }

 private:
  std::vector<Eigen::VectorXcd> w_;
  Eigen::VectorXd alpha_;
  std::vector<std::vector<std::complex<double>>> a_;
  std::vector<double> p_;
};

/// 2c [sum_eta Re{a_eta^* h^H w_eta} + sigma_a^2] - c^2 p_k / (1 - alpha^2),
/// c = 1 - alpha_k^2, for EH-ID UE n1. Throws std::domain_error unless
/// alpha[n1] lies in [0, 1).
double minorant_value(const ExpansionPoint& exp, const NetworkInstance& inst, const std::vector<Eigen::VectorXcd>& w,
                      const Eigen::VectorXd& alpha, int n1);

// minorant = sum_eta Re{g_eta^H w_eta} + constant - inv_coeff / (1 - alpha^2)
struct MinorantCoefficients {
  std::vector<Eigen::VectorXcd> g;
  double constant = 0.0;
  double inv_coeff = 0.0;

  double evaluate(const std::vector<Eigen::VectorXcd>& w, double alpha) const;
};

MinorantCoefficients minorant_coefficients(const ExpansionPoint& exp, const NetworkInstance& inst, int n1);

}  // namespace swipt
