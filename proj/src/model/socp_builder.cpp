#include "swipt/socp_builder.hpp"

#include <cmath>
#include <stdexcept>

namespace swipt {

using conic::Cone;
using conic::Constraint;
using Eigen::MatrixXd;
using Eigen::VectorXd;

VariableLayout VariableLayout::make(const NetworkInstance& inst, ProgramKind kind) {
  VariableLayout l;
  l.M = inst.M;
  l.N = inst.N();
  l.N1 = inst.N1;
  l.kind = kind;
  l.w_scale = std::exp2(std::round(0.5 * std::log2(inst.P)));
  l.num_vars = 2 * l.M * l.N + 2 * l.N1;
  if (l.has_epigraph()) l.num_vars += 2 * l.N1;
  if (l.has_scalar()) l.num_vars += 1;
  return l;
}

VectorXd VariableLayout::pack(const DesignPoint& pt) const {
  VectorXd x = VectorXd::Zero(num_vars);
  for (int n = 0; n < N; ++n) {
    for (int m = 0; m < M; ++m) {
      x[w(n) + 2 * m] = pt.w[n][m].real() / w_scale;
      x[w(n) + 2 * m + 1] = pt.w[n][m].imag() / w_scale;
    }
  }
  for (int k = 0; k < N1; ++k) {
    x[alpha(k)] = pt.alpha[k];
    x[t(k)] = pt.t.size() == N1 ? pt.t[k] : 1.0 / pt.alpha[k];
    if (has_epigraph()) {
      x[beta(k)] = 1.0 - pt.alpha[k] * pt.alpha[k];
      x[s(k)] = 1.0 / x[beta(k)];
    }
  }
  return x;
}

DesignPoint VariableLayout::unpack(const VectorXd& x) const {
  if (x.size() != num_vars) throw std::invalid_argument("variable vector has the wrong length");
  DesignPoint pt;
  for (int n = 0; n < N; ++n) {
    Eigen::VectorXcd wn(M);
    for (int m = 0; m < M; ++m) wn[m] = w_scale * std::complex<double>(x[w(n) + 2 * m], x[w(n) + 2 * m + 1]);
    pt.w.push_back(wn);
  }
  pt.alpha.resize(N1);
  pt.t.resize(N1);
  for (int k = 0; k < N1; ++k) {
    pt.alpha[k] = x[alpha(k)];
    pt.t[k] = x[t(k)];
  }
  return pt;
}

namespace {

// Writes f * Re{h^H w_eta} into row `re` and f * Im{h^H w_eta} into row `im`.
void put_inner(MatrixXd& A, int re, int im, const VariableLayout& l, const Eigen::VectorXcd& h, int eta, double f) {
  const double s = f * l.w_scale;
  for (int m = 0; m < l.M; ++m) {
    const double hr = h[m].real(), hi = h[m].imag();
    const int c = l.w(eta) + 2 * m;
    A(re, c) += s * hr;
    A(re, c + 1) += s * hi;
    if (im >= 0) {
      A(im, c) -= s * hi;
      A(im, c + 1) += s * hr;
    }
  }
}

// Objective-style row: Re{sum_eta g_eta^H w_eta}.
template <typename Row>
void put_linear(Row&& row, const VariableLayout& l, const std::vector<Eigen::VectorXcd>& g,
                double f) {
  for (int e = 0; e < l.N; ++e) {
    for (int m = 0; m < l.M; ++m) {
      row[l.w(e) + 2 * m] += f * l.w_scale * g[e][m].real();
      row[l.w(e) + 2 * m + 1] += f * l.w_scale * g[e][m].imag();
    }
  }
}

void add_common(conic::ConicProgram& prog, const NetworkInstance& inst, const VariableLayout& l, double alpha_min,
                double alpha_max) {
  for (int n = 0; n < inst.N(); ++n) {
    for (auto& c : build_sinr_soc(inst, l, n)) prog.add(std::move(c.A), std::move(c.b), c.cone);
  }
  if (inst.N1 > 0) {
    MatrixXd A = MatrixXd::Zero(2 * inst.N1, l.num_vars);
    VectorXd b(2 * inst.N1);
    for (int k = 0; k < inst.N1; ++k) {
      A(2 * k, l.alpha(k)) = 1.0;
      b[2 * k] = -alpha_min;
      A(2 * k + 1, l.alpha(k)) = -1.0;
      b[2 * k + 1] = alpha_max;
    }
    prog.add(A, b, Cone::nonneg(2 * inst.N1));
  }
}

void add_epigraph(conic::ConicProgram& prog, const VariableLayout& l) {
  for (int k = 0; k < l.N1; ++k) {
    // beta <= 1 - alpha^2  as  ||(2 alpha, -beta)|| <= 2 - beta
    MatrixXd A = MatrixXd::Zero(3, l.num_vars);
    A(0, l.beta(k)) = -1.0;
    A(1, l.alpha(k)) = 2.0;
    A(2, l.beta(k)) = -1.0;
    prog.add(A, Eigen::Vector3d(2.0, 0.0, 0.0), Cone::soc(3));
    // s beta >= 1  as  ||(2, s - beta)|| <= s + beta
    A.setZero();
    A(0, l.s(k)) = 1.0;
    A(0, l.beta(k)) = 1.0;
    A(2, l.s(k)) = 1.0;
    A(2, l.beta(k)) = -1.0;
    prog.add(A, Eigen::Vector3d(0.0, 2.0, 0.0), Cone::soc(3));
  }
}

void add_power(conic::ConicProgram& prog, const NetworkInstance& inst, const VariableLayout& l) {
  const int nw = 2 * l.M * l.N;
  MatrixXd A = MatrixXd::Zero(nw + 1, l.num_vars);
  A.block(1, 0, nw, nw).setIdentity();
  VectorXd b = VectorXd::Zero(nw + 1);
  b[0] = std::sqrt(inst.P) / l.w_scale;
  prog.add(A, b, Cone::soc(nw + 1));
}

std::vector<MinorantCoefficients> coefficients(const ExpansionPoint& exp, const NetworkInstance& inst) {
  std::vector<MinorantCoefficients> mc;
  for (int k = 0; k < inst.N1; ++k) mc.push_back(minorant_coefficients(exp, inst, k));
  return mc;
}

}  // namespace

std::vector<Constraint> build_sinr_soc(const NetworkInstance& inst, const VariableLayout& l, int n) {
  const int N = inst.N();
  const int dim = 2 * (N - 1) + 3;
  const double sg = std::sqrt(inst.gamma_min[n]);
  const double sc = std::sqrt(inst.sigma_c_sq);
  MatrixXd A = MatrixXd::Zero(dim, l.num_vars);
  VectorXd b = VectorXd::Zero(dim);
  put_inner(A, 0, -1, l, inst.h[n], n, 1.0);
  b[1] = sg * std::sqrt(inst.sigma_a_sq);
  if (n < inst.N1) A(2, l.t(n)) = sg * sc;
  else b[2] = sg * sc;
  int row = 3;
  for (int e = 0; e < N; ++e) {
    if (e == n) continue;
    put_inner(A, row, row + 1, l, inst.h[n], e, sg);
    row += 2;
  }
  std::vector<Constraint> out;
  out.push_back({std::move(A), std::move(b), Cone::soc(dim)});
  if (n < inst.N1) {
    MatrixXd R = MatrixXd::Zero(3, l.num_vars);
    R(0, l.t(n)) = 1.0;
    R(0, l.alpha(n)) = 1.0;
    R(2, l.t(n)) = 1.0;
    R(2, l.alpha(n)) = -1.0;
    out.push_back({std::move(R), Eigen::Vector3d(0.0, 2.0, 0.0), Cone::soc(3)});
  }
  return out;
}

BuiltProgram build_init_program(const NetworkInstance& inst, double alpha_min, double alpha_max) {
  const VariableLayout l = VariableLayout::make(inst, ProgramKind::Init);
  BuiltProgram bp{conic::ConicProgram(l.num_vars), l, 0.0};
  add_common(bp.program, inst, l, alpha_min, alpha_max);
  const int nw = 2 * l.M * l.N;
  MatrixXd A = MatrixXd::Zero(nw + 1, l.num_vars);
  A(0, l.scalar()) = 1.0;
  A.block(1, 0, nw, nw).setIdentity();
  bp.program.add(A, VectorXd::Zero(nw + 1), Cone::soc(nw + 1));
  VectorXd c = VectorXd::Zero(l.num_vars);
  c[l.scalar()] = -1.0;
  bp.program.set_objective(c);
  return bp;
}

BuiltProgram build_sum_eh_program(const ExpansionPoint& exp, const NetworkInstance& inst, double alpha_min,
                                  double alpha_max) {
  const VariableLayout l = VariableLayout::make(inst, ProgramKind::SumEh);
  BuiltProgram bp{conic::ConicProgram(l.num_vars), l, 0.0};
  add_common(bp.program, inst, l, alpha_min, alpha_max);
  add_epigraph(bp.program, l);
  add_power(bp.program, inst, l);
  Eigen::RowVectorXd c = Eigen::RowVectorXd::Zero(l.num_vars);
  const auto mc = coefficients(exp, inst);
  for (int k = 0; k < inst.N1; ++k) {
    put_linear(c, l, mc[k].g, inst.zeta[k]);
    c[l.s(k)] = -inst.zeta[k] * mc[k].inv_coeff;
    bp.objective_offset += inst.zeta[k] * mc[k].constant;
  }
  bp.program.set_objective(c.transpose());
  return bp;
}

BuiltProgram build_max_min_program(const ExpansionPoint& exp, const NetworkInstance& inst, double alpha_min,
                                   double alpha_max) {
  const VariableLayout l = VariableLayout::make(inst, ProgramKind::MaxMin);
  BuiltProgram bp{conic::ConicProgram(l.num_vars), l, 0.0};
  add_common(bp.program, inst, l, alpha_min, alpha_max);
  add_epigraph(bp.program, l);
  add_power(bp.program, inst, l);
  const auto mc = coefficients(exp, inst);
  MatrixXd A = MatrixXd::Zero(inst.N1, l.num_vars);
  VectorXd b(inst.N1);
  for (int k = 0; k < inst.N1; ++k) {
    put_linear(A.row(k), l, mc[k].g, inst.zeta[k]);
    A(k, l.s(k)) = -inst.zeta[k] * mc[k].inv_coeff;
    A(k, l.scalar()) = -1.0;
    b[k] = inst.zeta[k] * mc[k].constant;
  }
  bp.program.add(A, b, Cone::nonneg(inst.N1));
  VectorXd c = VectorXd::Zero(l.num_vars);
  c[l.scalar()] = 1.0;
  bp.program.set_objective(c);
  return bp;
}

}  // namespace swipt
