#include "swipt/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace swipt {

double perspective_bound(std::complex<double> z, std::complex<double> z_bar, double y, double y_bar) {
  if (!(y > 0.0) || !(y_bar > 0.0)) throw std::domain_error("perspective bound needs positive y and y_bar");
  return 2.0 * std::real(std::conj(z_bar) * z) / y_bar - std::norm(z_bar) * y / (y_bar * y_bar);
}

ExpansionPoint::ExpansionPoint(const NetworkInstance& inst, const DesignPoint& pt, double alpha_min, double alpha_max)
    : w_(pt.w), alpha_(pt.alpha) {
  for (int n = 0; n < alpha_.size(); ++n) alpha_[n] = std::clamp(alpha_[n], alpha_min, alpha_max);
  a_.assign(inst.N1, std::vector<std::complex<double>>(inst.N()));
  p_.assign(inst.N1, inst.sigma_a_sq);
  for (int n = 0; n < inst.N1; ++n) {
    for (int e = 0; e < inst.N(); ++e) {
      a_[n][e] = inst.h[n].dot(w_[e]);
      p_[n] += std::norm(a_[n][e]);
    }
  }
}

double minorant_value(const ExpansionPoint& exp, const NetworkInstance& inst, const std::vector<Eigen::VectorXcd>& w,
                      const Eigen::VectorXd& alpha, int n1) {
  const double al = alpha[n1];
  if (!(al >= 0.0 && al < 1.0)) throw std::domain_error("splitting ratio outside [0, 1)");
  const double c = 1.0 - exp.alpha()[n1] * exp.alpha()[n1];
  double lin = inst.sigma_a_sq;
  for (int e = 0; e < inst.N(); ++e) lin += std::real(std::conj(exp.a(n1, e)) * inst.h[n1].dot(w[e]));
  return 2.0 * c * lin - c * c * exp.p(n1) / (1.0 - al * al);
}

MinorantCoefficients minorant_coefficients(const ExpansionPoint& exp, const NetworkInstance& inst, int n1) {
  const double c = 1.0 - exp.alpha()[n1] * exp.alpha()[n1];
  MinorantCoefficients mc;
  // Re{conj(a) h^H w} = Re{(a h)^H w}
  for (int e = 0; e < inst.N(); ++e) mc.g.push_back(2.0 * c * exp.a(n1, e) * inst.h[n1]);
  mc.constant = 2.0 * c * inst.sigma_a_sq;
  mc.inv_coeff = c * c * exp.p(n1);
  return mc;
}

double MinorantCoefficients::evaluate(const std::vector<Eigen::VectorXcd>& w, double alpha) const {
  double v = constant;
  for (std::size_t e = 0; e < g.size(); ++e) v += std::real(g[e].dot(w[e]));
  return v - inv_coeff / (1.0 - alpha * alpha);
}

}  // namespace swipt
