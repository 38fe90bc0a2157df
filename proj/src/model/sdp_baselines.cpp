#include "swipt/sdp_baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "swipt/conic/program.hpp"

namespace swipt {

using conic::Cone;
using conic::ConicProgram;
using conic::SolverStatus;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;
using Eigen::VectorXd;

bool psd_available() {
#ifdef SWIPT_NO_PSD
  return false;
#else
  return true;
#endif
}

long outer_product_dimension(int M, int N) { return static_cast<long>(N) * M * (M + 1) / 2; }
int hermitian_real_params(int M) { return M * M; }

namespace herm {

namespace {
// theta = [X(i, j) for j, i <= j | Y(i, j) for j, i < j]
int x_index(int i, int j) { return j * (j + 1) / 2 + i; }
int y_index(int i, int j, int M) { return M * (M + 1) / 2 + j * (j - 1) / 2 + i; }
}  // namespace

RowVectorXd quad_form(const Eigen::VectorXcd& h) {
  const int M = static_cast<int>(h.size());
  RowVectorXd r = RowVectorXd::Zero(M * M);
  for (int j = 0; j < M; ++j) {
    r[x_index(j, j)] = std::norm(h[j]);
    for (int i = 0; i < j; ++i) {
      const std::complex<double> g = std::conj(h[i]) * h[j];
      r[x_index(i, j)] = 2.0 * g.real();
      r[y_index(i, j, M)] = -2.0 * g.imag();
    }
  }
  return r;
}

RowVectorXd trace(int M) {
  RowVectorXd r = RowVectorXd::Zero(M * M);
  for (int j = 0; j < M; ++j) r[x_index(j, j)] = 1.0;
  return r;
}

Eigen::MatrixXcd to_matrix(const VectorXd& theta, int M) {
  Eigen::MatrixXcd W(M, M);
  for (int j = 0; j < M; ++j) {
    W(j, j) = theta[x_index(j, j)];
    for (int i = 0; i < j; ++i) {
      W(i, j) = {theta[x_index(i, j)], theta[y_index(i, j, M)]};
      W(j, i) = std::conj(W(i, j));
    }
  }
  return W;
}

VectorXd to_params(const Eigen::MatrixXcd& W) {
  const int M = static_cast<int>(W.rows());
  VectorXd theta(M * M);
  for (int j = 0; j < M; ++j) {
    theta[x_index(j, j)] = W(j, j).real();
    for (int i = 0; i < j; ++i) {
      theta[x_index(i, j)] = W(i, j).real();
      theta[y_index(i, j, M)] = W(i, j).imag();
    }
  }
  return theta;
}

MatrixXd embedding(int M) {
  MatrixXd E(conic::svec_size(2 * M), M * M);
  for (int k = 0; k < M * M; ++k) {
    VectorXd e = VectorXd::Zero(M * M);
    e[k] = 1.0;
    const Eigen::MatrixXcd W = to_matrix(e, M);
    MatrixXd R(2 * M, 2 * M);
    R << W.real(), -W.imag(), W.imag(), W.real();
    E.col(k) = conic::svec(R);
  }
  return E;
}

}  // namespace herm

namespace {

void require_psd() {
  if (!psd_available()) throw CapabilityError("PSD backend unavailable");
}

// Variables: [theta_0 | ... | theta_{N-1} | alpha | t | u | beta | z], the
// alpha block and beyond present only when the splitting ratios are free.
// W_n = P * W(theta_n).
struct SdpLayout {
  int M, N, N1;
  bool free_alpha;
  bool has_z;
  int num = 0;
  SdpLayout(const NetworkInstance& inst, bool free_alpha_, bool has_z_)
      : M(inst.M), N(inst.N()), N1(inst.N1), free_alpha(free_alpha_), has_z(has_z_) {
    num = N * M * M + (free_alpha ? 4 * N1 : 0) + (has_z ? 1 : 0);
  }
  int theta(int n) const { return n * M * M; }
  int alpha(int k) const { return N * M * M + k; }
  int t(int k) const { return N * M * M + N1 + k; }
  int u(int k) const { return N * M * M + 2 * N1 + k; }
  int beta(int k) const { return N * M * M + 3 * N1 + k; }
  int z() const { return num - 1; }
};

void add_psd_and_power(ConicProgram& prog, const SdpLayout& l) {
  const MatrixXd E = herm::embedding(l.M);
  for (int n = 0; n < l.N; ++n) {
    MatrixXd A = MatrixXd::Zero(E.rows(), l.num);
    A.middleCols(l.theta(n), l.M * l.M) = E;
    prog.add(A, VectorXd::Zero(E.rows()), Cone::psd(2 * l.M));
  }
  MatrixXd A = MatrixXd::Zero(1, l.num);
  const RowVectorXd tr = herm::trace(l.M);
  for (int n = 0; n < l.N; ++n) A.block(0, l.theta(n), 1, l.M * l.M) = -tr;
  prog.add(A, VectorXd::Ones(1), Cone::nonneg(1));
}

// SINR rows: P q_n.theta_n - gamma P sum_{eta != n} q_n.theta_eta
//            - gamma (sigma_a^2 + sigma_c^2 * noise_n) >= 0,
// with noise_n a constant, or the variable u_n when `free_alpha`.
void add_sinr(ConicProgram& prog, const NetworkInstance& inst, const SdpLayout& l, const VectorXd& noise) {
  MatrixXd A = MatrixXd::Zero(l.N, l.num);
  VectorXd b(l.N);
  for (int n = 0; n < l.N; ++n) {
    const RowVectorXd q = inst.P * herm::quad_form(inst.h[n]);
    const double g = inst.gamma_min[n];
    for (int e = 0; e < l.N; ++e) A.block(n, l.theta(e), 1, l.M * l.M) = (e == n ? 1.0 : -g) * q;
    b[n] = -g * inst.sigma_a_sq;
    if (n < l.N1 && l.free_alpha) A(n, l.u(n)) = -g * inst.sigma_c_sq;
    else b[n] -= g * inst.sigma_c_sq * noise[n];
    const double m = std::max(A.row(n).cwiseAbs().maxCoeff(), std::abs(b[n]));
    A.row(n) /= m;
    b[n] /= m;
  }
  prog.add(A, b, Cone::nonneg(l.N));
}

OuterProductSolution finish(const NetworkInstance& inst, const SdpLayout& l, const conic::SolverResult& r) {
  OuterProductSolution sol;
  sol.status = r.status;
  sol.solver_iterations = r.iterations;
  if (r.x.size() != l.num) return sol;
  for (int n = 0; n < l.N; ++n) {
    sol.W.push_back(inst.P * herm::to_matrix(r.x.segment(l.theta(n), l.M * l.M), l.M));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sol.W.back(), Eigen::EigenvaluesOnly);
    const VectorXd ev = es.eigenvalues().cwiseMax(0.0);
    const double top = ev[l.M - 1];
    sol.eigen_ratios.push_back(l.M > 1 && top > 0.0 ? ev[l.M - 2] / top : 0.0);
  }
  if (l.free_alpha) {
    sol.alpha.resize(l.N1);
    for (int k = 0; k < l.N1; ++k) sol.alpha[k] = r.x[l.alpha(k)];
  }
  return sol;
}

// Relaxed sum-EH with constant objective weights (1 - a_obj^2) and SINR
// circuit noise sigma_c^2 / a_sinr^2.
OuterProductSolution fixed_weights(const NetworkInstance& inst, const VectorXd& a_obj, const VectorXd& a_sinr,
                                   const conic::SolverSettings& st) {
  require_psd();
  inst.validate();
  const SdpLayout l(inst, false, false);
  ConicProgram prog(l.num);
  add_psd_and_power(prog, l);
  VectorXd noise = VectorXd::Ones(l.N);
  for (int k = 0; k < l.N1; ++k) noise[k] = 1.0 / (a_sinr[k] * a_sinr[k]);
  add_sinr(prog, inst, l, noise);
  VectorXd c = VectorXd::Zero(l.num);
  double offset = 0.0;
  for (int k = 0; k < l.N1; ++k) {
    const double wgt = inst.zeta[k] * (1.0 - a_obj[k] * a_obj[k]);
    const RowVectorXd q = inst.P * herm::quad_form(inst.h[k]);
    for (int e = 0; e < l.N; ++e) c.segment(l.theta(e), l.M * l.M) += wgt * q.transpose();
    offset += wgt * inst.sigma_a_sq;
  }
  prog.set_objective(c);
  const conic::SolverResult r = conic::solve(prog, st);
  OuterProductSolution sol = finish(inst, l, r);
  sol.alpha = a_obj;
  sol.value = r.status == SolverStatus::Optimal ? r.objective + offset : std::numeric_limits<double>::quiet_NaN();
  return sol;
}

// Relaxed max-min with free splitting ratios. With `lambda` >= 0 the program
// is a feasibility test of level lambda; otherwise z is maximized and the
// level is L z^2. EH rows are scaled by 1 / L.
conic::SolverResult max_min_program(const NetworkInstance& inst, double lambda, double L, const SdpLayout& l,
                                    const conic::SolverSettings& st, double alpha_min, double alpha_max) {
  ConicProgram prog(l.num);
  add_psd_and_power(prog, l);
  add_sinr(prog, inst, l, VectorXd::Ones(l.N));
  MatrixXd box = MatrixXd::Zero(2 * l.N1, l.num);
  VectorXd bb(2 * l.N1);
  for (int k = 0; k < l.N1; ++k) {
    box(2 * k, l.alpha(k)) = 1.0;
    bb[2 * k] = -alpha_min;
    box(2 * k + 1, l.alpha(k)) = -1.0;
    bb[2 * k + 1] = alpha_max;
    MatrixXd A = MatrixXd::Zero(3, l.num);
    // t alpha >= 1
    A(0, l.t(k)) = 1.0;
    A(0, l.alpha(k)) = 1.0;
    A(2, l.t(k)) = 1.0;
    A(2, l.alpha(k)) = -1.0;
    prog.add(A, Eigen::Vector3d(0.0, 2.0, 0.0), Cone::soc(3));
    // u >= t^2  as  ||(2t, u - 1)|| <= u + 1
    A.setZero();
    A(0, l.u(k)) = 1.0;
    A(1, l.t(k)) = 2.0;
    A(2, l.u(k)) = 1.0;
    prog.add(A, Eigen::Vector3d(1.0, 0.0, -1.0), Cone::soc(3));
    // beta <= 1 - alpha^2
    A.setZero();
    A(0, l.beta(k)) = -1.0;
    A(1, l.alpha(k)) = 2.0;
    A(2, l.beta(k)) = -1.0;
    prog.add(A, Eigen::Vector3d(2.0, 0.0, 0.0), Cone::soc(3));
    // e beta >= level with e = zeta p~ / L:  ||(2 sqrt(level), e - beta)|| <= e + beta
    const RowVectorXd q = inst.zeta[k] * inst.P * herm::quad_form(inst.h[k]) / L;
    const double e0 = inst.zeta[k] * inst.sigma_a_sq / L;
    A.setZero();
    VectorXd b = VectorXd::Zero(3);
    for (int e = 0; e < l.N; ++e) {
      A.block(0, l.theta(e), 1, l.M * l.M) = q;
      A.block(2, l.theta(e), 1, l.M * l.M) = q;
    }
    A(0, l.beta(k)) = 1.0;
    A(2, l.beta(k)) = -1.0;
    b[0] = e0;
    b[2] = e0;
    if (l.has_z) A(1, l.z()) = 2.0;
    else b[1] = 2.0 * std::sqrt(lambda / L);
    prog.add(A, b, Cone::soc(3));
  }
  prog.add(box, bb, Cone::nonneg(2 * l.N1));
  VectorXd c = VectorXd::Zero(l.num);
  if (l.has_z) c[l.z()] = 1.0;
  prog.set_objective(c);
  return conic::solve(prog, st);
}

}  // namespace

bool OuterProductSolution::rank_one(double tol_rank) const {
  return std::all_of(eigen_ratios.begin(), eigen_ratios.end(), [&](double r) { return r <= tol_rank; });
}

OuterProductSolution solve_relaxation_fixed_alpha(const NetworkInstance& inst, const VectorXd& alpha,
                                                  const conic::SolverSettings& st) {
  if (alpha.size() != inst.N1) throw std::invalid_argument("need one splitting ratio per EH-ID UE");
  return fixed_weights(inst, alpha, alpha, st);
}

OuterProductSolution box_upper_bound(const NetworkInstance& inst, const VectorXd& p, const VectorXd& q,
                                     const conic::SolverSettings& st) {
  if (p.size() != inst.N1 || q.size() != inst.N1) throw std::invalid_argument("box dimension mismatch");
  return fixed_weights(inst, p, q, st);
}

bool max_min_feasible(const NetworkInstance& inst, double lambda, const conic::SolverSettings& st,
                      OuterProductSolution* out, double alpha_min, double alpha_max) {
  require_psd();
  inst.validate();
  const SdpLayout l(inst, true, false);
  const double L = std::max(lambda, std::numeric_limits<double>::min());
  const conic::SolverResult r = max_min_program(inst, lambda, L, l, st, alpha_min, alpha_max);
  if (out) {
    *out = finish(inst, l, r);
    out->value = lambda;
  }
  return r.status != SolverStatus::Infeasible;
}

BisectionResult bisection_max_min(const NetworkInstance& inst, double tol_lambda, const conic::SolverSettings& st) {
  require_psd();
  BisectionResult res;
  const OuterProductSolution root = box_upper_bound(inst, VectorXd::Constant(inst.N1, kAlphaMin),
                                                    VectorXd::Constant(inst.N1, kAlphaMax), st);
  res.sdp_solves = 1;
  if (root.status != SolverStatus::Optimal) {
    res.solution = root;
    return res;
  }
  double lo = 0.0, hi = root.value / inst.N1;
  while (hi - lo > tol_lambda * hi) {
    const double mid = 0.5 * (lo + hi);
    OuterProductSolution sol;
    ++res.sdp_solves;
    if (max_min_feasible(inst, mid, st, &sol)) {
      lo = mid;
      res.solution = std::move(sol);
    } else {
      hi = mid;
    }
  }
  res.lower_bound = lo;
  res.upper_bound = hi;
  return res;
}

OuterProductSolution solve_max_min_relaxation(const NetworkInstance& inst, const conic::SolverSettings& st) {
  require_psd();
  inst.validate();
  const OuterProductSolution root = box_upper_bound(inst, VectorXd::Constant(inst.N1, kAlphaMin),
                                                    VectorXd::Constant(inst.N1, kAlphaMax), st);
  if (root.status != SolverStatus::Optimal) return root;
  const double L = root.value / inst.N1;
  const SdpLayout l(inst, true, true);
  const conic::SolverResult r = max_min_program(inst, 0.0, L, l, st, kAlphaMin, kAlphaMax);
  OuterProductSolution sol = finish(inst, l, r);
  const double z = r.x.size() == l.num ? r.x[l.z()] : 0.0;
  sol.value = r.status == SolverStatus::Optimal ? L * z * z : std::numeric_limits<double>::quiet_NaN();
  return sol;
}

Extraction rank_one_extract(const OuterProductSolution& sol, double tol_rank) {
  Extraction ex;
  ex.ratios = sol.eigen_ratios;
  ex.rank_one = !sol.W.empty() && sol.rank_one(tol_rank);
  if (!ex.rank_one) return ex;
  for (const auto& W : sol.W) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(W);
    const int M = static_cast<int>(W.rows());
    const double top = std::max(es.eigenvalues()[M - 1], 0.0);
    ex.point.w.push_back(std::sqrt(top) * es.eigenvectors().col(M - 1));
  }
  ex.point.alpha = sol.alpha;
  ex.point.t = sol.alpha.cwiseInverse();
  return ex;
}

BBResult bb_sum_eh(const NetworkInstance& inst, double gap_tol, int node_budget, const AlgoConfig& cfg) {
  require_psd();
  inst.validate();
  struct Node {
    VectorXd p, q;
    double ub;
    int depth;
    bool operator<(const Node& o) const { return ub < o.ub; }
  };
  BBResult res;
  res.incumbent = -std::numeric_limits<double>::infinity();
  auto offer = [&](const DesignPoint& pt) {
    if (constraint_residuals(inst, pt).worst_relative_violation(inst) > cfg.feas_tol) return;
    const double v = sum_eh(inst, pt);
    if (v > res.incumbent) {
      res.incumbent = v;
      res.incumbent_point = pt;
    }
  };
  {
    const RunResult alg = maximize_sum_eh(inst, cfg);
    if (alg.status == RunStatus::Converged || alg.status == RunStatus::MaxOuterIters) offer(alg.point);
  }
  // Incumbent update at a box midpoint: relaxation at fixed alpha, rank-one
  // extraction, then the path-following loop from the extracted point.
  auto improve = [&](const VectorXd& mid) {
    const OuterProductSolution sol = solve_relaxation_fixed_alpha(inst, mid);
    if (sol.status != SolverStatus::Optimal) return;
    const Extraction ex = rank_one_extract(sol);
    if (!ex.rank_one) return;
    offer(ex.point);
    const RunResult alg = maximize_sum_eh(inst, cfg, &ex.point);
    if (alg.trace.records.size() > 0) offer(alg.point);
  };
  auto bound = [&](const VectorXd& p, const VectorXd& q) {
    const OuterProductSolution s = box_upper_bound(inst, p, q);
    if (s.status == SolverStatus::Infeasible) return -std::numeric_limits<double>::infinity();
    if (s.status != SolverStatus::Optimal) return std::numeric_limits<double>::infinity();
    return s.value;
  };

  std::priority_queue<Node> open;
  const VectorXd p0 = VectorXd::Constant(inst.N1, cfg.alpha_min);
  const VectorXd q0 = VectorXd::Constant(inst.N1, cfg.alpha_max);
  open.push({p0, q0, bound(p0, q0), 0});
  res.upper_bound = open.top().ub;
  while (!open.empty()) {
    const Node node = open.top();
    res.upper_bound = std::max(node.ub, res.incumbent);
    if (node.ub <= res.incumbent) break;
    if (std::isfinite(res.upper_bound) && res.upper_bound - res.incumbent <= gap_tol * std::abs(res.upper_bound)) break;
    if (res.nodes_expanded >= node_budget) {
      res.budget_exhausted = true;
      break;
    }
    open.pop();
    ++res.nodes_expanded;
    improve(0.5 * (node.p + node.q));
    int edge = 0;
    (node.q - node.p).maxCoeff(&edge);
    const double cut = 0.5 * (node.p[edge] + node.q[edge]);
    for (int side = 0; side < 2; ++side) {
      Node child{node.p, node.q, 0.0, node.depth + 1};
      if (side == 0) child.q[edge] = cut;
      else child.p[edge] = cut;
      child.ub = bound(child.p, child.q);
      if (std::isfinite(child.ub) && std::isfinite(node.ub) && child.ub > node.ub * (1.0 + 1e-6) + 1e-12)
        res.bound_monotone = false;
      if (child.ub > res.incumbent) open.push(child);
    }
  }
  if (open.empty()) res.upper_bound = res.incumbent;
  return res;
}

}  // namespace swipt
