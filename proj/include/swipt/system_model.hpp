#pragma once

#include <vector>

#include <Eigen/Dense>

namespace swipt {

// Problem datum. UEs 0..N1-1 harvest and decode, N1..N-1 only decode.
// Powers are in units of `scale` watts; see normalize().
struct NetworkInstance {
  int M = 0;
  int N1 = 0;
  int N2 = 0;
  std::vector<Eigen::VectorXcd> h;
  double sigma_a_sq = 1.0;
  double sigma_c_sq = 1.0;
  std::vector<double> zeta;       // per EH-ID UE
  std::vector<double> gamma_min;  // per UE, linear
  double P = 1.0;                 // W, total transmit budget
  double scale = 1.0;

  int N() const { return N1 + N2; }
  void validate() const;  // throws std::invalid_argument
};

/// Divides all received powers by sigma_a_sq: channels become h / sigma_a,
/// antenna noise becomes 1 and `scale` records the factor back to watts.
/// Transmit-side quantities (w, P) are unchanged.
NetworkInstance normalize(const NetworkInstance& raw);

struct DesignPoint {
  std::vector<Eigen::VectorXcd> w;  // N beamformers
  Eigen::VectorXd alpha;            // N1 splitting ratios in (0, 1)
  Eigen::VectorXd t;                // N1 auxiliaries, t * alpha >= 1

  double total_power() const;
};

/// Sum over eta of |h_n^H w_eta|^2 plus antenna noise.
double received_power(const NetworkInstance& inst, const std::vector<Eigen::VectorXcd>& w, int n);

/// Throws std::domain_error when an EH-ID UE has alpha = 0.
double sinr(const NetworkInstance& inst, const DesignPoint& pt, int n);

double harvested_energy(const NetworkInstance& inst, const DesignPoint& pt, int n1);
double sum_eh(const NetworkInstance& inst, const DesignPoint& pt);
double min_eh(const NetworkInstance& inst, const DesignPoint& pt);

struct ResidualReport {
  double power = 0.0;    // P - sum ||w_n||^2
  Eigen::VectorXd sinr;  // sinr_n - gamma_n

  /// All residuals >= -tol relative to P and gamma_n respectively.
  bool feasible(const NetworkInstance& inst, double tol) const;
  /// Worst violation relative to P or gamma_n (0 when feasible).
  double worst_relative_violation(const NetworkInstance& inst) const;
};

ResidualReport constraint_residuals(const NetworkInstance& inst, const DesignPoint& pt);

}  // namespace swipt
