#include "locckit/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace locckit::linalg {

Mat dagger(const Mat& a) { return a.adjoint(); }

Mat identity(Eigen::Index n) { return Mat::Identity(n, n); }

void check_finite(const Mat& a, const char* what) {
  if (!a.allFinite()) throw InvalidParams(std::string(what) + ": non-finite entries");
}

Mat tensor(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vec canonical_phase(const Vec& v) {
  double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return v;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-8 * vmax) {
      Scalar phase = std::conj(v(i)) / std::abs(v(i));
      return phase * v;
    }
  }
  return v;
}

namespace {

// Lexicographic comparison of phase-canonicalized vectors, used only to make
// degenerate eigenspaces deterministic.
bool vec_lex_less(const Vec& a, const Vec& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double dr = a(i).real() - b(i).real();
    if (std::abs(dr) > 1e-12) return dr < 0;
    double di = a(i).imag() - b(i).imag();
    if (std::abs(di) > 1e-12) return di < 0;
  }
  return false;
}

}  // namespace

HermitianEig eig_hermitian(const Mat& a, const Tolerance& tol) {
  if (a.rows() != a.cols()) throw NotHermitian("eig_hermitian: matrix not square");
  if (!tol.matrix_zero(a - a.adjoint(), a.norm()))
    throw NotHermitian("eig_hermitian: matrix not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Mat> solver((a + a.adjoint()) / 2.0);
  if (solver.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver failed");

  const Eigen::Index n = a.rows();
  std::vector<std::pair<double, Vec>> pairs;
  pairs.reserve(n);
  for (Eigen::Index i = 0; i < n; ++i)
    pairs.emplace_back(solver.eigenvalues()(i), canonical_phase(solver.eigenvectors().col(i)));
  std::sort(pairs.begin(), pairs.end(), [&](const auto& p, const auto& q) {
    if (!tol.scalar_close(p.first, q.first)) return p.first > q.first;
    return vec_lex_less(p.second, q.second);
  });

  HermitianEig out;
  out.eigenvectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.eigenvalues.push_back(pairs[i].first);
    out.eigenvectors.col(i) = pairs[i].second;
  }
  return out;
}

Svd svd(const Mat& a) {
  Eigen::JacobiSVD<Mat> solver(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Svd out;
  out.u = solver.matrixU();
  out.v = solver.matrixV();
  const auto& sv = solver.singularValues();
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  return out;
}

Mat null_space(const Mat& l, const Tolerance& tol) {
  if (l.size() == 0) return Mat::Identity(l.cols(), l.cols());
  Eigen::JacobiSVD<Mat> solver(l, Eigen::ComputeFullV);
  const auto& sv = solver.singularValues();
  double cutoff = tol.singular_cutoff(sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++keep;
  Eigen::Index dim = l.cols() - keep;
  Mat out(l.cols(), dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    out.col(i) = solver.matrixV().col(keep + i);
  return out;
}

Eigen::Index rank(const Mat& a, const Tolerance& tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<Mat> solver(a);
  const auto& sv = solver.singularValues();
  double cutoff = tol.singular_cutoff(sv.size() > 0 ? sv(0) : 0.0);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff) ++r;
  return r;
}

std::vector<Vec> gram_schmidt(const std::vector<Vec>& vectors, const Tolerance& tol) {
  std::vector<Vec> basis;
  for (const Vec& v : vectors) {
    Vec w = v;
    double scale = v.norm();
    // Two projection passes for numerical orthogonality.
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : basis) w -= b.dot(w) * b;
    if (!tol.value_zero(w.norm(), std::max(scale, 1.0))) basis.push_back(w.normalized());
  }
  return basis;
}

namespace {

bool diagonalizes(const Mat& basis, const std::vector<Mat>& family, const Tolerance& tol) {
  for (const Mat& h : family) {
    Mat d = basis.adjoint() * h * basis;
    Mat off = d;
    off.diagonal().setZero();
    if (!tol.matrix_zero(off, std::max(h.norm(), 1.0))) return false;
  }
  return true;
}

// Refines the column blocks of `basis` until every family member is diagonal:
// within each degenerate eigenspace of one member, diagonalize the next.
Mat refine_sequentially(const std::vector<Mat>& family, const Tolerance& tol) {
  const Eigen::Index n = family.front().rows();
  Mat basis = Mat::Identity(n, n);
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks{{0, n}};  // [begin, end)
  for (const Mat& h : family) {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> next;
    for (auto [b, e] : blocks) {
      Mat sub = basis.middleCols(b, e - b);
      Mat hc = sub.adjoint() * h * sub;
      Eigen::SelfAdjointEigenSolver<Mat> solver((hc + hc.adjoint()) / 2.0);
      basis.middleCols(b, e - b) = sub * solver.eigenvectors();
      // Split the block at spectral gaps.
      double scale = std::max(h.norm(), 1.0);
      Eigen::Index start = b;
      for (Eigen::Index i = 1; i < e - b; ++i) {
        if (std::abs(solver.eigenvalues()(i) - solver.eigenvalues()(i - 1)) >
            tol.singular_cutoff(scale) * 10) {
          next.emplace_back(start, b + i);
          start = b + i;
        }
      }
      next.emplace_back(start, e);
    }
    blocks = std::move(next);
  }
  for (Eigen::Index c = 0; c < n; ++c) basis.col(c) = canonical_phase(basis.col(c));
  return basis;
}

}  // namespace

Mat joint_eigenbasis_hermitian(const std::vector<Mat>& family, const Tolerance& tol,
                               unsigned seed) {
  if (family.empty()) throw InvalidParams("joint_eigenbasis_hermitian: empty family");
  const Eigen::Index n = family.front().rows();
  if (family.size() == 1 || n == 1) {
    Eigen::SelfAdjointEigenSolver<Mat> solver((family[0] + family[0].adjoint()) / 2.0);
    Mat basis = solver.eigenvectors();
    for (Eigen::Index c = 0; c < n; ++c) basis.col(c) = canonical_phase(basis.col(c));
    return basis;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Mat h = Mat::Zero(n, n);
    for (const Mat& q : family) {
      double scale = std::max(q.norm(), 1e-30);
      h += (dist(rng) / scale) * q;
    }
    Eigen::SelfAdjointEigenSolver<Mat> solver((h + h.adjoint()) / 2.0);
    Mat basis = solver.eigenvectors();
    if (diagonalizes(basis, family, tol)) {
      for (Eigen::Index c = 0; c < n; ++c) basis.col(c) = canonical_phase(basis.col(c));
      return basis;
    }
  }
  Mat basis = refine_sequentially(family, tol);
  if (!diagonalizes(basis, family, tol))
    throw NoConvergence("joint_eigenbasis_hermitian: refinement failed to diagonalize family");
  return basis;
}

std::vector<Mat> commutant_basis(const std::vector<Mat>& ops, const Tolerance& tol) {
  if (ops.empty()) throw InvalidParams("commutant_basis: empty operator list");
  const Eigen::Index n = ops.front().rows();
  for (const Mat& a : ops)
    if (a.rows() != n || a.cols() != n)
      throw DimensionMismatch("commutant_basis: operators must be square and same size");

  // Stack the maps X -> XA - AX as n^2 x n^2 blocks over vec(X), row-major
  // vec: vec(X)[i*n+j] = X(i,j).  (XA - AX)(i,j) = sum_k X(i,k)A(k,j) - A(i,k)X(k,j).
  Mat stacked(static_cast<Eigen::Index>(ops.size()) * n * n, n * n);
  stacked.setZero();
  for (size_t t = 0; t < ops.size(); ++t) {
    const Mat& a = ops[t];
    Eigen::Index base = static_cast<Eigen::Index>(t) * n * n;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        Eigen::Index row = base + i * n + j;
        for (Eigen::Index k = 0; k < n; ++k) {
          stacked(row, i * n + k) += a(k, j);
          stacked(row, k * n + j) -= a(i, k);
        }
      }
  }
  Mat kernel = null_space(stacked, tol);
  std::vector<Mat> out;
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    Mat x(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) x(i, j) = kernel(i * n + j, c);
    out.push_back(x);
  }
  return out;
}

}  // namespace locckit::linalg
