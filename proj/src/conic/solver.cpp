#include "swipt/conic/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "cones.hpp"

namespace swipt::conic {

std::string to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::Optimal: return "optimal";
    case SolverStatus::Infeasible: return "infeasible";
    case SolverStatus::Unbounded: return "unbounded";
    case SolverStatus::MaxIters: return "max_iters";
    case SolverStatus::NumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using detail::ConeLayout;
using detail::NtScaling;

constexpr double kStepFraction = 0.99;
constexpr double kRegularization = 1e-11;
constexpr double kReducedAccuracy = 100.0;  // accepted when progress stalls
constexpr int kStallIters = 6;

// Maps a rotated cone (u, v, z) to a standard one; the map is its own inverse.
void rotate_rows(MatrixXd& A, VectorXd& b) {
  const double r = std::sqrt(0.5);
  const Eigen::RowVectorXd a0 = A.row(0), a1 = A.row(1);
  A.row(0) = r * (a0 + a1);
  A.row(1) = r * (a0 - a1);
  const double b0 = b[0], b1 = b[1];
  b[0] = r * (b0 + b1);
  b[1] = r * (b0 - b1);
}

VectorXd rotate_vec(VectorXd v) {
  const double r = std::sqrt(0.5);
  const double v0 = v[0], v1 = v[1];
  v[0] = r * (v0 + v1);
  v[1] = r * (v0 - v1);
  return v;
}

enum class BlockKind { Nonneg, Soc, Psd };

// Rows of G belonging to one cone block, restricted to their nonzero columns.
struct Block {
  BlockKind kind;
  int index = 0;  // soc/psd index in the layout
  int row0 = 0;   // first row in the cone vector
  int rows = 0;
  std::vector<int> support;
  MatrixXd G;  // rows x support.size()
};

struct Placement {
  ConeKind kind;
  int offset;  // row offset into eq rows or cone vector
  int rows;
};

// min q.x  s.t.  A x = b,  G x + s = h,  s in K
struct StandardForm {
  int n = 0;
  VectorXd q;
  MatrixXd A;
  VectorXd b;
  MatrixXd G;
  VectorXd h;
  ConeLayout K;
  std::vector<Placement> placement;
  // equilibration: x = D xs, rows scaled by E, objective scaled by obj_scale
  VectorXd D;
  VectorXd E_eq;
  VectorXd E;
  double obj_scale = 1.0;
};

StandardForm to_standard_form(const ConicProgram& prog) {
  StandardForm sf;
  sf.n = prog.num_vars();
  sf.q = -prog.objective();

  int p = 0;
  for (const auto& c : prog.constraints()) {
    switch (c.cone.kind) {
      case ConeKind::Zero: p += c.cone.rows(); break;
      case ConeKind::Nonneg: sf.K.nonneg += c.cone.rows(); break;
      case ConeKind::SecondOrder:
      case ConeKind::RotatedSecondOrder: sf.K.soc.push_back(c.cone.rows()); break;
      case ConeKind::Psd: sf.K.psd.push_back(c.cone.dim); break;
    }
  }
  sf.K.finalize();
  sf.A = MatrixXd::Zero(p, sf.n);
  sf.b = VectorXd::Zero(p);
  sf.G = MatrixXd::Zero(sf.K.total, sf.n);
  sf.h = VectorXd::Zero(sf.K.total);

  int eq = 0, nn = 0, soc = 0, psd = 0;
  for (const auto& c : prog.constraints()) {
    const int rows = c.cone.rows();
    switch (c.cone.kind) {
      case ConeKind::Zero:
        sf.A.middleRows(eq, rows) = c.A;
        sf.b.segment(eq, rows) = -c.b;
        sf.placement.push_back({c.cone.kind, eq, rows});
        eq += rows;
        break;
      case ConeKind::Nonneg:
        sf.G.middleRows(nn, rows) = -c.A;
        sf.h.segment(nn, rows) = c.b;
        sf.placement.push_back({c.cone.kind, nn, rows});
        nn += rows;
        break;
      case ConeKind::SecondOrder:
      case ConeKind::RotatedSecondOrder: {
        MatrixXd A = c.A;
        VectorXd b = c.b;
        if (c.cone.kind == ConeKind::RotatedSecondOrder) rotate_rows(A, b);
        const int off = sf.K.soc_offset[soc++];
        sf.G.middleRows(off, rows) = -A;
        sf.h.segment(off, rows) = b;
        sf.placement.push_back({c.cone.kind, off, rows});
        break;
      }
      case ConeKind::Psd: {
        const int off = sf.K.psd_offset[psd++];
        sf.G.middleRows(off, rows) = -c.A;
        sf.h.segment(off, rows) = c.b;
        sf.placement.push_back({c.cone.kind, off, rows});
        break;
      }
    }
  }
  sf.D = VectorXd::Ones(sf.n);
  sf.E_eq = VectorXd::Ones(p);
  sf.E = VectorXd::Ones(sf.K.total);
  return sf;
}

// Ruiz-style equilibration; cone blocks are scaled by a single factor so that
// membership is preserved.
void equilibrate(StandardForm& sf) {
  const int n = sf.n;
  const int p = static_cast<int>(sf.A.rows());
  auto block_rows = [&](auto&& fn) {
    for (int i = 0; i < sf.K.nonneg; ++i) fn(i, 1);
    for (std::size_t i = 0; i < sf.K.soc.size(); ++i) fn(sf.K.soc_offset[i], sf.K.soc[i]);
    for (std::size_t i = 0; i < sf.K.psd.size(); ++i) fn(sf.K.psd_offset[i], svec_size(sf.K.psd[i]));
  };
  auto clamp = [](double v) { return std::clamp(v, 1e-4, 1e4); };
  for (int pass = 0; pass < 15; ++pass) {
    VectorXd col(n);
    for (int j = 0; j < n; ++j) {
      double m = 0.0;
      if (p > 0) m = sf.A.col(j).cwiseAbs().maxCoeff();
      if (sf.G.rows() > 0) m = std::max(m, sf.G.col(j).cwiseAbs().maxCoeff());
      col[j] = m > 0.0 ? 1.0 / std::sqrt(m) : 1.0;
    }
    for (int j = 0; j < n; ++j) {
      const double f = clamp(col[j] * sf.D[j]) / sf.D[j];
      sf.D[j] *= f;
      if (p > 0) sf.A.col(j) *= f;
      sf.G.col(j) *= f;
    }
    for (int i = 0; i < p; ++i) {
      const double m = sf.A.row(i).cwiseAbs().maxCoeff();
      if (m <= 0.0) continue;
      const double f = clamp(sf.E_eq[i] / std::sqrt(m)) / sf.E_eq[i];
      sf.E_eq[i] *= f;
      sf.A.row(i) *= f;
      sf.b[i] *= f;
    }
    block_rows([&](int off, int rows) {
      const double m = sf.G.middleRows(off, rows).cwiseAbs().maxCoeff();
      if (m <= 0.0) return;
      const double f = clamp(sf.E[off] / std::sqrt(m)) / sf.E[off];
      sf.E.segment(off, rows) *= f;
      sf.G.middleRows(off, rows) *= f;
      sf.h.segment(off, rows) *= f;
    });
  }
  sf.q = sf.q.cwiseProduct(sf.D);
  const double qmax = sf.q.size() > 0 ? sf.q.cwiseAbs().maxCoeff() : 0.0;
  if (qmax > 0.0) {
    sf.obj_scale = 1.0 / qmax;
    sf.q *= sf.obj_scale;
  }
}

std::vector<Block> make_blocks(const StandardForm& sf) {
  std::vector<Block> blocks;
  auto add = [&](BlockKind kind, int index, int row0, int rows) {
    Block blk{kind, index, row0, rows, {}, {}};
    for (int j = 0; j < sf.n; ++j) {
      if (sf.G.block(row0, j, rows, 1).cwiseAbs().maxCoeff() > 0.0) blk.support.push_back(j);
    }
    blk.G.resize(rows, static_cast<int>(blk.support.size()));
    for (std::size_t c = 0; c < blk.support.size(); ++c) blk.G.col(c) = sf.G.block(row0, blk.support[c], rows, 1);
    blocks.push_back(std::move(blk));
  };
  if (sf.K.nonneg > 0) add(BlockKind::Nonneg, 0, 0, sf.K.nonneg);
  for (std::size_t i = 0; i < sf.K.soc.size(); ++i) add(BlockKind::Soc, static_cast<int>(i), sf.K.soc_offset[i], sf.K.soc[i]);
  for (std::size_t i = 0; i < sf.K.psd.size(); ++i) {
    add(BlockKind::Psd, static_cast<int>(i), sf.K.psd_offset[i], svec_size(sf.K.psd[i]));
  }
  return blocks;
}

// Reduced KKT system
//   [ H  A^T ] [x]   [r1 + Gs^T W^{-T} r3]
//   [ A   0  ] [y] = [r2                 ],   H = Gs^T Gs,  Gs = W^{-T} G
// with v = W z = Gs x - W^{-T} r3.
class KktSolver {
 public:
  KktSolver(const StandardForm& sf, const std::vector<Block>& blocks) : sf_(sf), blocks_(blocks) {}

  bool factor(const NtScaling& W) {
    W_ = &W;
    const int n = sf_.n;
    const int p = static_cast<int>(sf_.A.rows());
    H_.setZero(n, n);
    scaled_.resize(blocks_.size());
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const Block& blk = blocks_[bi];
      MatrixXd Gs = blk.G;
      switch (blk.kind) {
        case BlockKind::Nonneg: W.WinvT_nonneg_rows(blk.row0, Gs); break;
        case BlockKind::Soc: W.WinvT_soc(blk.index, Gs); break;
        case BlockKind::Psd: W.WinvT_psd(blk.index, Gs); break;
      }
      const MatrixXd local = Gs.transpose() * Gs;
      const int k = static_cast<int>(blk.support.size());
      for (int a = 0; a < k; ++a) {
        for (int c = 0; c < k; ++c) H_(blk.support[a], blk.support[c]) += local(a, c);
      }
      scaled_[bi] = std::move(Gs);
    }
    if (!H_.allFinite()) return false;
    const double hmax = n > 0 ? H_.diagonal().cwiseAbs().maxCoeff() : 0.0;
    // Static regularization, escalated when a pivot vanishes; iterative
    // refinement in solve() recovers the unregularized solution.
    for (double rel : {0.0, 1e-13, 1e-11, 1e-9}) {
      const double delta = kRegularization + rel * hmax;
      K_.setZero(n + p, n + p);
      K_.topLeftCorner(n, n) = H_;
      K_.topLeftCorner(n, n).diagonal().array() += delta;
      if (p > 0) {
        K_.topRightCorner(n, p) = sf_.A.transpose();
        K_.bottomLeftCorner(p, n) = sf_.A;
        K_.bottomRightCorner(p, p).diagonal().setConstant(-delta);
      }
      ldlt_.compute(K_);
      if (ldlt_.info() == Eigen::Success) return true;
    }
    return false;
  }

  // Solves the full system
  //   [0 A^T G^T   ] [x]   [r1]
  //   [A 0   0     ] [y] = [r2]
  //   [G 0  -W^T W ] [z]   [r3]
  // and returns x, y, v = W z and z. Refinement runs on the unreduced residual.
  bool solve(const VectorXd& r1, const VectorXd& r2, const VectorXd& r3, VectorXd& x, VectorXd& y, VectorXd& v,
             VectorXd& z) const {
    if (!solve_reduced(r1, r2, r3, x, y, v, z)) return false;
    const double scale = 1.0 + std::max({r1.norm(), r2.norm(), r3.norm()});
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 4; ++it) {
      VectorXd e1 = r1 - sf_.G.transpose() * z;
      if (sf_.A.rows() > 0) e1 -= sf_.A.transpose() * y;
      const VectorXd e2 = r2 - sf_.A * x;
      const VectorXd e3 = r3 - sf_.G * x + W_->WT(v);
      const double err = std::max({e1.norm(), e2.norm(), e3.norm()});
      if (err <= 1e-15 * scale || err >= 0.5 * last) break;
      last = err;
      VectorXd dx, dy, dv, dz;
      if (!solve_reduced(e1, e2, e3, dx, dy, dv, dz)) break;
      x += dx;
      y += dy;
      v += dv;
      z += dz;
    }
    return x.allFinite() && z.allFinite();
  }

 private:
  bool solve_reduced(const VectorXd& r1, const VectorXd& r2, const VectorXd& r3, VectorXd& x, VectorXd& y,
                     VectorXd& v, VectorXd& z) const {
    const int n = sf_.n;
    const int p = static_cast<int>(sf_.A.rows());
    const VectorXd r3s = W_->WinvT(r3);
    VectorXd rhs(n + p);
    rhs.head(n) = r1 + gs_transpose_times(r3s);
    rhs.tail(p) = r2;
    VectorXd sol = ldlt_.solve(rhs);
    for (int it = 0; it < 2; ++it) {
      VectorXd res = rhs;
      res.head(n) -= H_ * sol.head(n);
      if (p > 0) {
        res.head(n) -= sf_.A.transpose() * sol.tail(p);
        res.tail(p) -= sf_.A * sol.head(n);
      }
      if (res.norm() <= 1e-15 * (1.0 + rhs.norm())) break;
      sol += ldlt_.solve(res);
    }
    if (!sol.allFinite()) return false;
    x = sol.head(n);
    y = sol.tail(p);
    v = gs_times(x) - r3s;
    z = W_->Winv(v);
    return true;
  }

  VectorXd gs_transpose_times(const VectorXd& u) const {
    VectorXd r = VectorXd::Zero(sf_.n);
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const Block& blk = blocks_[bi];
      const VectorXd loc = scaled_[bi].transpose() * u.segment(blk.row0, blk.rows);
      for (std::size_t c = 0; c < blk.support.size(); ++c) r[blk.support[c]] += loc[c];
    }
    return r;
  }

  VectorXd gs_times(const VectorXd& x) const {
    VectorXd r = VectorXd::Zero(sf_.K.total);
    for (std::size_t bi = 0; bi < blocks_.size(); ++bi) {
      const Block& blk = blocks_[bi];
      VectorXd xs(blk.support.size());
      for (std::size_t c = 0; c < blk.support.size(); ++c) xs[c] = x[blk.support[c]];
      r.segment(blk.row0, blk.rows) = scaled_[bi] * xs;
    }
    return r;
  }

  const StandardForm& sf_;
  const std::vector<Block>& blocks_;
  const NtScaling* W_ = nullptr;
  std::vector<MatrixXd> scaled_;
  MatrixXd H_;
  MatrixXd K_;
  Eigen::LDLT<MatrixXd> ldlt_;
};

struct Iterate {
  VectorXd x, y, z, s;
  double tau = 1.0;
  double kappa = 1.0;
};

SolverResult map_back(const ConicProgram& prog, const StandardForm& sf, SolverStatus status, const VectorXd& xs,
                      const VectorXd& ys, const VectorXd& zs) {
  SolverResult res;
  res.status = status;
  res.x = sf.D.cwiseProduct(xs);
  const VectorXd y = sf.E_eq.cwiseProduct(ys) / sf.obj_scale;
  const VectorXd z = sf.E.cwiseProduct(zs) / sf.obj_scale;
  const auto& cons = prog.constraints();
  res.duals.resize(cons.size());
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const Placement& pl = sf.placement[i];
    switch (pl.kind) {
      case ConeKind::Zero: res.duals[i] = -y.segment(pl.offset, pl.rows); break;
      case ConeKind::RotatedSecondOrder: res.duals[i] = rotate_vec(z.segment(pl.offset, pl.rows)); break;
      default: res.duals[i] = z.segment(pl.offset, pl.rows); break;
    }
  }
  res.objective = prog.objective().dot(res.x);
  return res;
}

}  // namespace

SolverResult solve(const ConicProgram& prog, const SolverSettings& settings) {
  StandardForm sf = to_standard_form(prog);
  if (settings.equilibrate) equilibrate(sf);
  const std::vector<Block> blocks = make_blocks(sf);
  const ConeLayout& K = sf.K;
  const int n = sf.n;
  const int p = static_cast<int>(sf.A.rows());
  const int m = K.total;
  const double degree = K.degree() + 1.0;
  const double tol = settings.tol;
  const VectorXd e = detail::identity(K);

  const double resx0 = std::max(1.0, sf.q.norm());
  const double resy0 = std::max(1.0, sf.b.norm());
  const double resz0 = std::max(1.0, sf.h.norm());

  KktSolver kkt(sf, blocks);
  Iterate it;

  // Starting point: least-norm primal and dual solutions with unit scaling.
  {
    const VectorXd ones = VectorXd::Ones(m);
    NtScaling Wid(K, e, e);
    if (!kkt.factor(Wid)) return map_back(prog, sf, SolverStatus::NumericalFailure, VectorXd::Zero(n), VectorXd::Zero(p), VectorXd::Zero(m));
    VectorXd x, y, v, z;
    kkt.solve(VectorXd::Zero(n), sf.b, sf.h, x, y, v, z);
    it.x = x;
    it.s = sf.h - sf.G * x;
    kkt.solve(-sf.q, VectorXd::Zero(p), VectorXd::Zero(m), x, y, v, z);
    it.y = y;
    it.z = z;
    auto shift = [&](VectorXd& u) {
      if (m == 0) return;
      const double t = -detail::min_eigenvalue(K, u);
      if (t >= -1e-8 * std::max(1.0, u.norm())) u += (1.0 + t) * e;
    };
    shift(it.s);
    shift(it.z);
  }

  // Best iterate so far by the worst of the three residual measures; used
  // when progress stalls before reaching the requested accuracy.
  SolverResult best;
  best.status = SolverStatus::NumericalFailure;
  double best_merit = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  double best_cert = std::numeric_limits<double>::infinity();
  double progress_mu = std::numeric_limits<double>::infinity();
  int stalls = 0;
  for (int iter = 0; iter <= settings.max_iters; ++iter) {
    const VectorXd hrx = -(sf.A.transpose() * it.y + sf.G.transpose() * it.z);
    const VectorXd hry = sf.A * it.x;
    const VectorXd hrz = it.s + sf.G * it.x;
    const VectorXd rx = -hrx + sf.q * it.tau;
    const VectorXd ry = hry - sf.b * it.tau;
    const VectorXd rz = hrz - sf.h * it.tau;
    const double cx = sf.q.dot(it.x);
    const double by = sf.b.dot(it.y);
    const double hz = sf.h.dot(it.z);
    const double rt = it.kappa + cx + by + hz;
    const double sz = it.s.dot(it.z);
    const double mu = (sz + it.tau * it.kappa) / degree;

    const double pres = std::max(ry.norm() / resy0, rz.norm() / resz0) / it.tau;
    const double dres = rx.norm() / resx0 / it.tau;
    const double pcost = cx / it.tau;
    const double dcost = -(by + hz) / it.tau;
    const double gap = sz / (it.tau * it.tau);
    double relgap = std::numeric_limits<double>::infinity();
    if (pcost < 0.0) relgap = gap / -pcost;
    else if (dcost > 0.0) relgap = gap / dcost;
    const double gap_measure = std::min(gap, relgap);

    if (pres <= tol && dres <= tol && gap_measure <= tol) {
      SolverResult res = map_back(prog, sf, SolverStatus::Optimal, it.x / it.tau, it.y / it.tau, it.z / it.tau);
      res.primal_residual = pres;
      res.dual_residual = dres;
      res.gap = gap_measure;
      res.iterations = iter;
      return res;
    }
    double cert = std::numeric_limits<double>::infinity();
    if (hz + by < 0.0) {
      const double pinf = hrx.norm() / resx0 / -(hz + by);
      cert = pinf;
      if (pinf <= tol) {
        const double f = -(hz + by);
        SolverResult res = map_back(prog, sf, SolverStatus::Infeasible, VectorXd::Zero(n), it.y / f, it.z / f);
        double bz = 0.0;
        for (std::size_t i = 0; i < res.duals.size(); ++i) bz += prog.constraints()[i].b.dot(res.duals[i]);
        if (bz < 0.0)
          for (auto& d : res.duals) d /= -bz;
        res.primal_residual = pinf;
        res.iterations = iter;
        return res;
      }
    }
    if (cx < 0.0) {
      const double dinf = std::max(hry.norm() / resy0, hrz.norm() / resz0) / -cx;
      cert = std::min(cert, dinf);
      if (dinf <= tol) {
        SolverResult res = map_back(prog, sf, SolverStatus::Unbounded, it.x / -cx, VectorXd::Zero(p), VectorXd::Zero(m));
        res.dual_residual = dinf;
        res.iterations = iter;
        return res;
      }
    }
    const double merit = std::max({pres, dres, gap_measure});
    if (merit < best_merit) {
      best = map_back(prog, sf, SolverStatus::NumericalFailure, it.x / it.tau, it.y / it.tau, it.z / it.tau);
      best.primal_residual = pres;
      best.dual_residual = dres;
      best.gap = gap_measure;
      best_iter = iter;
      best_merit = merit;
    }
    // Progress toward an infeasibility or unboundedness certificate also
    // counts, as does a falling mu while no acceptable iterate exists yet.
    if (cert < 0.5 * best_cert) {
      best_cert = cert;
      best_iter = iter;
    }
    if (mu < 0.1 * progress_mu) {
      progress_mu = mu;
      if (best_merit > kReducedAccuracy * tol) best_iter = iter;
    }
    auto fallback = [&](SolverStatus st) {
      SolverResult res = best;
      res.iterations = iter;
      res.status = best_merit <= kReducedAccuracy * tol ? SolverStatus::Optimal : st;
      return res;
    };
    if (iter == settings.max_iters) return fallback(SolverStatus::MaxIters);
    if (iter - best_iter >= kStallIters) return fallback(SolverStatus::NumericalFailure);
    if (std::getenv("SWIPT_IPM_TRACE")) {
      std::fprintf(stderr, "%3d pcost %+.6e dcost %+.6e gap %.2e pres %.2e dres %.2e tau %.2e kappa %.2e\n", iter,
                   pcost, dcost, gap_measure, pres, dres, it.tau, it.kappa);
    }

    NtScaling W(K, it.s, it.z);
    if (!W.ok() || !kkt.factor(W)) return fallback(SolverStatus::NumericalFailure);
    const VectorXd& lambda = W.lambda();
    const VectorXd lsq = detail::jordan_product(K, lambda, lambda);

    VectorXd x1, y1, v1, z1;
    if (!kkt.solve(-sf.q, sf.b, sf.h, x1, y1, v1, z1)) return fallback(SolverStatus::NumericalFailure);
    const double denom = -it.kappa / it.tau + sf.q.dot(x1) + sf.b.dot(y1) + sf.h.dot(z1);

    struct Direction {
      VectorXd x, y, z, s, v;
      double tau = 0.0, kappa = 0.0;
    };
    auto direction = [&](double sigma, const VectorXd& ds, double dk, Direction& d) {
      const double f = 1.0 - sigma;
      const VectorXd dst = W.lambda_divide(ds);
      VectorXd x2, y2, v2, z2;
      if (!kkt.solve(-f * rx, -f * ry, -f * rz - W.WT(dst), x2, y2, v2, z2)) return false;
      d.tau = (-f * rt - dk / it.tau - sf.q.dot(x2) - sf.b.dot(y2) - sf.h.dot(z2)) / denom;
      d.x = x2 + d.tau * x1;
      d.y = y2 + d.tau * y1;
      d.v = v2 + d.tau * v1;
      d.z = z2 + d.tau * z1;
      d.s = W.WT(dst - d.v);
      d.kappa = (dk - it.kappa * d.tau) / it.tau;
      return d.x.allFinite() && d.s.allFinite() && std::isfinite(d.tau);
    };
    auto step_to_boundary = [&](const Direction& d) {
      double a = std::min(detail::max_step(K, it.s, d.s), detail::max_step(K, it.z, d.z));
      if (d.tau < 0.0) a = std::min(a, -it.tau / d.tau);
      if (d.kappa < 0.0) a = std::min(a, -it.kappa / d.kappa);
      return a;
    };

    Direction aff;
    if (!direction(0.0, -lsq, -it.tau * it.kappa, aff)) return fallback(SolverStatus::NumericalFailure);
    const double a_aff = std::min(1.0, step_to_boundary(aff));
    const double mu_aff = ((it.s + a_aff * aff.s).dot(it.z + a_aff * aff.z) +
                           (it.tau + a_aff * aff.tau) * (it.kappa + a_aff * aff.kappa)) /
                          degree;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    const VectorXd ws = -lambda - aff.v;  // W^{-T} ds_aff
    const VectorXd ds = -lsq - detail::jordan_product(K, ws, aff.v) + sigma * mu * e;
    const double dk = -it.tau * it.kappa - aff.tau * aff.kappa + sigma * mu;
    Direction d;
    if (!direction(sigma, ds, dk, d)) return fallback(SolverStatus::NumericalFailure);
    const double a = std::min(1.0, kStepFraction * step_to_boundary(d));
    if (!(a > 1e-12)) {
      if (++stalls > 3) return fallback(SolverStatus::NumericalFailure);
    }
    it.x += a * d.x;
    it.y += a * d.y;
    it.z += a * d.z;
    it.s += a * d.s;
    it.tau += a * d.tau;
    it.kappa += a * d.kappa;
    if (!(it.tau > 0.0) || !(it.kappa > 0.0)) return fallback(SolverStatus::NumericalFailure);
  }
  return best;
}

CertificateReport certify(const ConicProgram& prog, const SolverResult& result, double tol) {
  CertificateReport rep;
  const auto& cons = prog.constraints();
  const Eigen::VectorXd& c = prog.objective();
  Eigen::VectorXd station = c;
  double dual_obj = 0.0;
  auto cone_violation = [](const Cone& cone, const Eigen::VectorXd& u) -> double {
    switch (cone.kind) {
      case ConeKind::Zero: return u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
      case ConeKind::Nonneg: return std::max(0.0, -u.minCoeff());
      case ConeKind::SecondOrder: return std::max(0.0, u.tail(u.size() - 1).norm() - u[0]);
      case ConeKind::RotatedSecondOrder: {
        const Eigen::VectorXd r = rotate_vec(u);
        return std::max(0.0, r.tail(r.size() - 1).norm() - r[0]);
      }
      case ConeKind::Psd: {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(smat(u, cone.dim), Eigen::EigenvaluesOnly);
        return std::max(0.0, -es.eigenvalues()[0]);
      }
    }
    return 0.0;
  };
  rep.violated.resize(cons.size(), false);
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const Constraint& con = cons[i];
    const Eigen::VectorXd s = con.A * result.x + con.b;
    const double pv = cone_violation(con.cone, s);
    rep.primal_cone_violation = std::max(rep.primal_cone_violation, pv);
    rep.violated[i] = pv > tol;
    if (i < result.duals.size() && result.duals[i].size() == s.size()) {
      const Eigen::VectorXd& z = result.duals[i];
      if (con.cone.kind != ConeKind::Zero) {
        rep.dual_cone_violation = std::max(rep.dual_cone_violation, cone_violation(con.cone, z));
      }
      station += con.A.transpose() * z;
      dual_obj += con.b.dot(z);
    }
  }
  const double primal_obj = c.dot(result.x);
  rep.stationarity = station.norm() / std::max(1.0, c.norm());
  rep.gap = std::abs(dual_obj - primal_obj) / std::max(1.0, std::abs(primal_obj));
  return rep;
}

}  // namespace swipt::conic
