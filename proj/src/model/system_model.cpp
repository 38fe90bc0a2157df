#include "swipt/system_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace swipt {

void NetworkInstance::validate() const {
  if (M < 1 || N1 < 0 || N2 < 0 || N() < 1) throw std::invalid_argument("bad instance dimensions");
  if (static_cast<int>(h.size()) != N()) throw std::invalid_argument("need one channel per UE");
  for (const auto& hn : h) {
    if (hn.size() != M || !hn.allFinite()) throw std::invalid_argument("channel size or value mismatch");
  }
  if (!(sigma_a_sq > 0.0) || !(sigma_c_sq > 0.0)) throw std::invalid_argument("noise powers must be positive");
  if (static_cast<int>(zeta.size()) != N1) throw std::invalid_argument("need one efficiency per EH-ID UE");
  for (double z : zeta) {
    if (!(z > 0.0 && z < 1.0)) throw std::invalid_argument("efficiency must lie in (0, 1)");
  }
  if (static_cast<int>(gamma_min.size()) != N()) throw std::invalid_argument("need one SINR threshold per UE");
  for (double g : gamma_min) {
    if (!(g > 0.0)) throw std::invalid_argument("SINR thresholds must be positive");
  }
  if (!(P > 0.0) || !(scale > 0.0)) throw std::invalid_argument("power budget and scale must be positive");
}

NetworkInstance normalize(const NetworkInstance& raw) {
  raw.validate();
  NetworkInstance out = raw;
  const double s = raw.sigma_a_sq;
  for (auto& hn : out.h) hn /= std::sqrt(s);
  out.sigma_a_sq = 1.0;
  out.sigma_c_sq = raw.sigma_c_sq / s;
  out.scale = raw.scale * s;
  return out;
}

double DesignPoint::total_power() const {
  double p = 0.0;
  for (const auto& wn : w) p += wn.squaredNorm();
  return p;
}

double received_power(const NetworkInstance& inst, const std::vector<Eigen::VectorXcd>& w, int n) {
  double p = inst.sigma_a_sq;
  for (const auto& we : w) p += std::norm(inst.h[n].dot(we));
  return p;
}

double sinr(const NetworkInstance& inst, const DesignPoint& pt, int n) {
  double phi = inst.sigma_a_sq;
  for (int e = 0; e < inst.N(); ++e) {
    if (e != n) phi += std::norm(inst.h[n].dot(pt.w[e]));
  }
  double alpha = 1.0;
  if (n < inst.N1) {
    alpha = pt.alpha[n];
    if (alpha == 0.0) throw std::domain_error("splitting ratio is zero");
  }
  phi += inst.sigma_c_sq / (alpha * alpha);
  return std::norm(inst.h[n].dot(pt.w[n])) / phi;
}

double harvested_energy(const NetworkInstance& inst, const DesignPoint& pt, int n1) {
  if (n1 < 0 || n1 >= inst.N1) throw std::out_of_range("not an EH-ID UE");
  const double a = pt.alpha[n1];
  return inst.zeta[n1] * (1.0 - a * a) * received_power(inst, pt.w, n1);
}

double sum_eh(const NetworkInstance& inst, const DesignPoint& pt) {
  double s = 0.0;
  for (int n = 0; n < inst.N1; ++n) s += harvested_energy(inst, pt, n);
  return s;
}

double min_eh(const NetworkInstance& inst, const DesignPoint& pt) {
  double m = std::numeric_limits<double>::infinity();
  for (int n = 0; n < inst.N1; ++n) m = std::min(m, harvested_energy(inst, pt, n));
  return m;
}

ResidualReport constraint_residuals(const NetworkInstance& inst, const DesignPoint& pt) {
  ResidualReport r;
  r.power = inst.P - pt.total_power();
  r.sinr.resize(inst.N());
  for (int n = 0; n < inst.N(); ++n) r.sinr[n] = sinr(inst, pt, n) - inst.gamma_min[n];
  return r;
}

bool ResidualReport::feasible(const NetworkInstance& inst, double tol) const {
  return worst_relative_violation(inst) <= tol;
}

double ResidualReport::worst_relative_violation(const NetworkInstance& inst) const {
  double v = std::max(0.0, -power / inst.P);
  for (int n = 0; n < sinr.size(); ++n) v = std::max(v, -sinr[n] / inst.gamma_min[n]);
  return v;
}

}  // namespace swipt
