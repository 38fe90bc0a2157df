#pragma once

#include <vector>

#include <Eigen/Dense>

#include "swipt/conic/program.hpp"
#include "swipt/surrogate.hpp"
#include "swipt/system_model.hpp"

namespace swipt {

enum class ProgramKind { Init, SumEh, MaxMin };

// Flat real variable vector:
//   [w_0 | ... | w_{N-1} | alpha | t | beta | s | lambda or tau]
// Each w_n takes 2M reals (Re, Im interleaved) holding w_n / w_scale, with
// w_scale a power of two near sqrt(P) so packing is exact.
struct VariableLayout {
  int M = 0;
  int N = 0;
  int N1 = 0;
  ProgramKind kind = ProgramKind::SumEh;
  double w_scale = 1.0;
  int num_vars = 0;

  static VariableLayout make(const NetworkInstance& inst, ProgramKind kind);

  int w(int n) const { return 2 * M * n; }
  int alpha(int n1) const { return 2 * M * N + n1; }
  int t(int n1) const { return 2 * M * N + N1 + n1; }
  bool has_epigraph() const { return kind != ProgramKind::Init; }
  int beta(int n1) const { return 2 * M * N + 2 * N1 + n1; }
  int s(int n1) const { return 2 * M * N + 3 * N1 + n1; }
  int scalar() const { return num_vars - 1; }  // tau (Init) or lambda (MaxMin)
  bool has_scalar() const { return kind != ProgramKind::SumEh; }

  /// Writes w, alpha, t; epigraph variables are set tight at alpha.
  Eigen::VectorXd pack(const DesignPoint& pt) const;
  DesignPoint unpack(const Eigen::VectorXd& x) const;
};

/// SINR cone of UE n with head Re{h_n^H w_n}, and for an EH-ID UE the cone
/// ||(2, t - alpha)|| <= t + alpha that enforces t alpha >= 1.
std::vector<conic::Constraint> build_sinr_soc(const NetworkInstance& inst, const VariableLayout& layout, int n);

struct BuiltProgram {
  conic::ConicProgram program;
  VariableLayout layout;
  double objective_offset = 0.0;  // true objective = c.x + offset
};

/// Minimum transmit power subject to the SINR constraints; the optimal
/// power is (w_scale * tau)^2.
BuiltProgram build_init_program(const NetworkInstance& inst, double alpha_min = kAlphaMin,
                                double alpha_max = kAlphaMax);

/// Maximizes sum_n1 zeta * minorant over the constraint set.
BuiltProgram build_sum_eh_program(const ExpansionPoint& exp, const NetworkInstance& inst,
                                  double alpha_min = kAlphaMin, double alpha_max = kAlphaMax);

/// Maximizes lambda with zeta_n1 * minorant_n1 >= lambda for every EH-ID UE.
BuiltProgram build_max_min_program(const ExpansionPoint& exp, const NetworkInstance& inst,
                                   double alpha_min = kAlphaMin, double alpha_max = kAlphaMax);

}  // namespace swipt
