#include "cones.hpp"

#include <cmath>
#include <limits>

#include "swipt/conic/program.hpp"

namespace swipt::conic::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd block_smat(const Eigen::VectorXd& v, int off, int side) {
  return smat(v.segment(off, svec_size(side)), side);
}

}  // namespace

void ConeLayout::finalize() {
  soc_offset.clear();
  psd_offset.clear();
  int off = nonneg;
  for (int d : soc) {
    soc_offset.push_back(off);
    off += d;
  }
  for (int k : psd) {
    psd_offset.push_back(off);
    off += svec_size(k);
  }
  total = off;
}

int ConeLayout::degree() const {
  int deg = nonneg + static_cast<int>(soc.size());
  for (int k : psd) deg += k;
  return deg;
}

Eigen::VectorXd identity(const ConeLayout& K) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(K.total);
  e.head(K.nonneg).setOnes();
  for (int off : K.soc_offset) e[off] = 1.0;
  for (std::size_t i = 0; i < K.psd.size(); ++i) {
    const int k = K.psd[i];
    for (int j = 0; j < k; ++j) e[K.psd_offset[i] + svec_index(j, j, k)] = 1.0;
  }
  return e;
}

double min_eigenvalue(const ConeLayout& K, const Eigen::VectorXd& x) {
  double m = kInf;
  if (K.nonneg > 0) m = x.head(K.nonneg).minCoeff();
  for (std::size_t i = 0; i < K.soc.size(); ++i) {
    const int off = K.soc_offset[i];
    const int d = K.soc[i];
    m = std::min(m, x[off] - x.segment(off + 1, d - 1).norm());
  }
  for (std::size_t i = 0; i < K.psd.size(); ++i) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block_smat(x, K.psd_offset[i], K.psd[i]),
                                                      Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues()[0]);
  }
  return m;
}

double max_step(const ConeLayout& K, const Eigen::VectorXd& x, const Eigen::VectorXd& d) {
  double step = kInf;
  for (int i = 0; i < K.nonneg; ++i) {
    if (d[i] < 0.0) step = std::min(step, -x[i] / d[i]);
  }
  for (std::size_t i = 0; i < K.soc.size(); ++i) {
    const int off = K.soc_offset[i];
    const int dim = K.soc[i];
    const double x0 = x[off];
    const auto x1 = x.segment(off + 1, dim - 1);
    const double nrm2 = x0 * x0 - x1.squaredNorm();
    if (nrm2 <= 0.0 || x0 <= 0.0) return 0.0;
    const double nrm = std::sqrt(nrm2);
    // Lorentz boost that maps x to nrm * e, applied to d.
    const double xb0 = x0 / nrm;
    const Eigen::VectorXd xb1 = x1 / nrm;
    const double d0 = d[off];
    const auto d1 = d.segment(off + 1, dim - 1);
    const double xd1 = xb1.dot(d1);
    const double dt0 = (xb0 * d0 - xd1) / nrm;
    const Eigen::VectorXd dt1 = (d1 - xb1 * d0 + xb1 * (xd1 / (1.0 + xb0))) / nrm;
    const double t = dt1.norm() - dt0;
    if (t > 0.0) step = std::min(step, 1.0 / t);
  }
  for (std::size_t i = 0; i < K.psd.size(); ++i) {
    const int k = K.psd[i];
    Eigen::LLT<Eigen::MatrixXd> llt(block_smat(x, K.psd_offset[i], k));
    if (llt.info() != Eigen::Success) return 0.0;
    Eigen::MatrixXd D = block_smat(d, K.psd_offset[i], k);
    const Eigen::MatrixXd L = llt.matrixL();
    Eigen::MatrixXd T = L.triangularView<Eigen::Lower>().solve(D);
    T = L.triangularView<Eigen::Lower>().solve(T.transpose()).transpose();
    T = 0.5 * (T + T.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()[0];
    if (lmin < 0.0) step = std::min(step, -1.0 / lmin);
  }
  return step;
}

Eigen::VectorXd jordan_product(const ConeLayout& K, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  Eigen::VectorXd r(K.total);
  r.head(K.nonneg) = x.head(K.nonneg).cwiseProduct(y.head(K.nonneg));
  for (std::size_t i = 0; i < K.soc.size(); ++i) {
    const int off = K.soc_offset[i];
    const int dim = K.soc[i];
    r[off] = x.segment(off, dim).dot(y.segment(off, dim));
    r.segment(off + 1, dim - 1) = x[off] * y.segment(off + 1, dim - 1) + y[off] * x.segment(off + 1, dim - 1);
  }
  for (std::size_t i = 0; i < K.psd.size(); ++i) {
    const int k = K.psd[i];
    const Eigen::MatrixXd X = block_smat(x, K.psd_offset[i], k);
    const Eigen::MatrixXd Y = block_smat(y, K.psd_offset[i], k);
    r.segment(K.psd_offset[i], svec_size(k)) = svec(0.5 * (X * Y + Y * X));
  }
  return r;
}

NtScaling::NtScaling(const ConeLayout& K, const Eigen::VectorXd& s, const Eigen::VectorXd& z) : K_(&K) {
  lambda_.resize(K.total);
  d_.resize(K.nonneg);
  for (int i = 0; i < K.nonneg; ++i) {
    if (!(s[i] > 0.0) || !(z[i] > 0.0)) ok_ = false;
    d_[i] = std::sqrt(s[i] / z[i]);
    lambda_[i] = std::sqrt(s[i] * z[i]);
  }
  soc_.resize(K.soc.size());
  for (std::size_t i = 0; i < K.soc.size(); ++i) {
    const int off = K.soc_offset[i];
    const int dim = K.soc[i];
    const Eigen::VectorXd si = s.segment(off, dim);
    const Eigen::VectorXd zi = z.segment(off, dim);
    const double sJs = si[0] * si[0] - si.tail(dim - 1).squaredNorm();
    const double zJz = zi[0] * zi[0] - zi.tail(dim - 1).squaredNorm();
    if (!(sJs > 0.0) || !(zJz > 0.0) || si[0] <= 0.0 || zi[0] <= 0.0) {
      ok_ = false;
      soc_[i].w = Eigen::VectorXd::Unit(dim, 0);
      continue;
    }
    const Eigen::VectorXd sb = si / std::sqrt(sJs);
    Eigen::VectorXd zb = zi / std::sqrt(zJz);
    const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
    zb.tail(dim - 1) *= -1.0;
    soc_[i].w = (sb + zb) / (2.0 * gamma);
    soc_[i].beta = std::pow(sJs / zJz, 0.25);
    Eigen::VectorXd out(dim);
    soc_apply(static_cast<int>(i), zi, out, false);
    lambda_.segment(off, dim) = out;
  }
  psd_.resize(K.psd.size());
  for (std::size_t i = 0; i < K.psd.size(); ++i) {
    const int k = K.psd[i];
    const int off = K.psd_offset[i];
    Eigen::LLT<Eigen::MatrixXd> ls(block_smat(s, off, k));
    Eigen::LLT<Eigen::MatrixXd> lz(block_smat(z, off, k));
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) {
      ok_ = false;
      psd_[i].R = psd_[i].Rinv = Eigen::MatrixXd::Identity(k, k);
      psd_[i].eig = Eigen::VectorXd::Ones(k);
      continue;
    }
    const Eigen::MatrixXd Ls = ls.matrixL();
    const Eigen::MatrixXd Lz = lz.matrixL();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Lz.transpose() * Ls, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::VectorXd sv = svd.singularValues();
    if (!(sv.minCoeff() > 0.0)) ok_ = false;
    const Eigen::MatrixXd& V = svd.matrixV();
    const Eigen::VectorXd isq = sv.cwiseSqrt().cwiseInverse();
    psd_[i].R = Ls * V * isq.asDiagonal();
    const Eigen::MatrixXd LsInv = Ls.triangularView<Eigen::Lower>().solve(Eigen::MatrixXd::Identity(k, k));
    psd_[i].Rinv = sv.cwiseSqrt().asDiagonal() * V.transpose() * LsInv;
    psd_[i].eig = sv;
    lambda_.segment(off, svec_size(k)) = svec(Eigen::MatrixXd(sv.asDiagonal()));
  }
}

void NtScaling::soc_apply(int i, const Eigen::VectorXd& in, Eigen::Ref<Eigen::VectorXd> out, bool inverse) const {
  // W = beta [[w0, w1^T], [w1, I + w1 w1^T/(1+w0)]]; the inverse flips w1.
  const Soc& sc = soc_[i];
  const int dim = static_cast<int>(in.size());
  const double w0 = sc.w[0];
  const double sgn = inverse ? -1.0 : 1.0;
  const auto w1 = sc.w.tail(dim - 1);
  const auto v1 = in.tail(dim - 1);
  const double wv = sgn * w1.dot(v1);
  const double f = inverse ? 1.0 / sc.beta : sc.beta;
  out[0] = f * (w0 * in[0] + wv);
  out.tail(dim - 1) = f * (v1 + sgn * w1 * (in[0] + wv / (1.0 + w0)));
}

Eigen::VectorXd NtScaling::W(const Eigen::VectorXd& v) const {
  const ConeLayout& K = *K_;
  Eigen::VectorXd r(K.total);
  r.head(K.nonneg) = v.head(K.nonneg).cwiseProduct(d_);
  for (std::size_t i = 0; i < K.soc.size(); ++i) {
    soc_apply(static_cast<int>(i), v.segment(K.soc_offset[i], K.soc[i]), r.segment(K.soc_offset[i], K.soc[i]), false);
  }
  for (std::size_t i = 0; i < K.psd.size(); ++i) {
    const int k = K.psd[i];
    const Eigen::MatrixXd X = block_smat(v, K.psd_offset[i], k);
    r.segment(K.psd_offset[i], svec_size(k)) = svec(psd_[i].R.transpose() * X * psd_[i].R);
  }
  return r;
}

Eigen::VectorXd NtScaling::WT(const Eigen::VectorXd& v) const {
  const ConeLayout& K = *K_;
  Eigen::VectorXd r = W(v);  // symmetric on nonneg and soc blocks
  for (std::size_t i = 0; i < K.psd.size(); ++i) {
    const int k = K.psd[i];
    const Eigen::MatrixXd X = block_smat(v, K.psd_offset[i], k);
    r.segment(K.psd_offset[i], svec_size(k)) = svec(psd_[i].R * X * psd_[i].R.transpose());
  }
  return r;
}

Eigen::VectorXd NtScaling::Winv(const Eigen::VectorXd& v) const {
  const ConeLayout& K = *K_;
  Eigen::VectorXd r(K.total);
  r.head(K.nonneg) = v.head(K.nonneg).cwiseQuotient(d_);
  for (std::size_t i = 0; i < K.soc.size(); ++i) {
    soc_apply(static_cast<int>(i), v.segment(K.soc_offset[i], K.soc[i]), r.segment(K.soc_offset[i], K.soc[i]), true);
  }
  for (std::size_t i = 0; i < K.psd.size(); ++i) {
    const int k = K.psd[i];
    const Eigen::MatrixXd X = block_smat(v, K.psd_offset[i], k);
    r.segment(K.psd_offset[i], svec_size(k)) = svec(psd_[i].Rinv.transpose() * X * psd_[i].Rinv);
  }
  return r;
}

Eigen::VectorXd NtScaling::WinvT(const Eigen::VectorXd& v) const {
  const ConeLayout& K = *K_;
  Eigen::VectorXd r = Winv(v);
  for (std::size_t i = 0; i < K.psd.size(); ++i) {
    const int k = K.psd[i];
    const Eigen::MatrixXd X = block_smat(v, K.psd_offset[i], k);
    r.segment(K.psd_offset[i], svec_size(k)) = svec(psd_[i].Rinv * X * psd_[i].Rinv.transpose());
  }
  return r;
}

void NtScaling::WinvT_nonneg_rows(int row0, Eigen::MatrixXd& M) const {
  for (int r = 0; r < M.rows(); ++r) M.row(r) /= d_[row0 + r];
}

void NtScaling::WinvT_soc(int index, Eigen::MatrixXd& M) const {
  const Soc& sc = soc_[index];
  const int dim = static_cast<int>(M.rows());
  const double w0 = sc.w[0];
  const auto w1 = sc.w.tail(dim - 1);
  const Eigen::RowVectorXd r0 = M.row(0);
  const Eigen::RowVectorXd t = -(w1.transpose() * M.bottomRows(dim - 1));
  M.row(0) = (w0 * r0 + t) / sc.beta;
  M.bottomRows(dim - 1) += -w1 * (r0 + t / (1.0 + w0));
  M.bottomRows(dim - 1) /= sc.beta;
}

void NtScaling::WinvT_psd(int index, Eigen::MatrixXd& M) const {
  const Psd& p = psd_[index];
  const int k = static_cast<int>(p.R.rows());
  for (int c = 0; c < M.cols(); ++c) {
    const Eigen::MatrixXd X = smat(M.col(c), k);
    M.col(c) = svec(p.Rinv * X * p.Rinv.transpose());
  }
}

Eigen::VectorXd NtScaling::lambda_divide(const Eigen::VectorXd& v) const {
  const ConeLayout& K = *K_;
  Eigen::VectorXd u(K.total);
  u.head(K.nonneg) = v.head(K.nonneg).cwiseQuotient(lambda_.head(K.nonneg));
  for (std::size_t i = 0; i < K.soc.size(); ++i) {
    const int off = K.soc_offset[i];
    const int dim = K.soc[i];
    const double l0 = lambda_[off];
    const auto l1 = lambda_.segment(off + 1, dim - 1);
    const double v0 = v[off];
    const auto v1 = v.segment(off + 1, dim - 1);
    const double det = l0 * l0 - l1.squaredNorm();
    const double u0 = (l0 * v0 - l1.dot(v1)) / det;
    u[off] = u0;
    u.segment(off + 1, dim - 1) = (v1 - u0 * l1) / l0;
  }
  for (std::size_t i = 0; i < K.psd.size(); ++i) {
    const int k = K.psd[i];
    const int off = K.psd_offset[i];
    const Eigen::VectorXd& e = psd_[i].eig;
    for (int c = 0; c < k; ++c) {
      for (int r = c; r < k; ++r) {
        const int idx = off + svec_index(r, c, k);
        u[idx] = 2.0 * v[idx] / (e[r] + e[c]);
      }
    }
  }
  return u;
}

}  // namespace swipt::conic::detail
