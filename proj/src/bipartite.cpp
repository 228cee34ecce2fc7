#include "locckit/bipartite.hpp"

#include <cmath>

namespace locckit::bipartite {

using linalg::tensor;

BipartiteState max_entangled(Eigen::Index a) {
  if (a < 1) throw InvalidParams("max_entangled: dimension must be positive");
  BipartiteState s;
  s.dim_a = a;
  s.dim_b = a;
  s.op_form = Mat::Identity(a, a);
  s.vector = Vec::Zero(a * a);
  for (Eigen::Index i = 0; i < a; ++i) s.vector(i * a + i) = 1.0 / std::sqrt(double(a));
  return s;
}

BipartiteState from_operator(const Mat& b, Eigen::Index dim_a, Eigen::Index dim_b,
                             const Tolerance& tol) {
  if (b.rows() != dim_b || b.cols() != dim_a)
    throw DimensionMismatch("from_operator: operator must be dim_b x dim_a");
  linalg::check_finite(b, "from_operator");
  double norm2 = (b.adjoint() * b).trace().real();
  if (!tol.scalar_close(norm2, double(dim_a)))
    throw NotNormalized("from_operator: Tr(B^dag B) must equal dim_a");
  BipartiteState s;
  s.dim_a = dim_a;
  s.dim_b = dim_b;
  s.op_form = b;
  s.vector = Vec::Zero(dim_a * dim_b);
  double scale = 1.0 / std::sqrt(double(dim_a));
  for (Eigen::Index i = 0; i < dim_a; ++i)
    for (Eigen::Index j = 0; j < dim_b; ++j) s.vector(i * dim_b + j) = b(j, i) * scale;
  return s;
}

BipartiteState from_vector(const Vec& v, Eigen::Index dim_a, Eigen::Index dim_b,
                           const Tolerance& tol) {
  if (v.size() != dim_a * dim_b) throw DimensionMismatch("from_vector: wrong length");
  linalg::check_finite(v, "from_vector");
  if (!tol.scalar_close(v.norm(), 1.0)) throw NotNormalized("from_vector: vector must be unit");
  BipartiteState s;
  s.dim_a = dim_a;
  s.dim_b = dim_b;
  s.vector = v;
  s.op_form.resize(dim_b, dim_a);
  double scale = std::sqrt(double(dim_a));
  for (Eigen::Index i = 0; i < dim_a; ++i)
    for (Eigen::Index j = 0; j < dim_b; ++j) s.op_form(j, i) = v(i * dim_b + j) * scale;
  return s;
}

Mat to_operator(const BipartiteState& s) { return s.op_form; }

StateSet make_state_set(const std::vector<BipartiteState>& states, const Tolerance& tol) {
  if (states.empty()) throw InvalidParams("make_state_set: empty set");
  for (const auto& s : states)
    if (s.dim_a != states.front().dim_a || s.dim_b != states.front().dim_b)
      throw DimensionMismatch("make_state_set: states must share dimensions");
  StateSet out;
  out.states = states;
  out.orthonormal = true;
  for (size_t i = 0; i < states.size() && out.orthonormal; ++i)
    for (size_t k = 0; k < states.size(); ++k) {
      Scalar g = states[i].vector.dot(states[k].vector);
      double want = (i == k) ? 1.0 : 0.0;
      if (!tol.value_zero(std::abs(g - Scalar(want)), 1.0)) {
        out.orthonormal = false;
        break;
      }
    }
  return out;
}

StateSet state_set_from_operators(const std::vector<Mat>& ops, Eigen::Index dim_a,
                                  Eigen::Index dim_b, const Tolerance& tol) {
  std::vector<BipartiteState> states;
  states.reserve(ops.size());
  for (const Mat& b : ops) states.push_back(from_operator(b, dim_a, dim_b, tol));
  return make_state_set(states, tol);
}

bool is_maximally_entangled(const BipartiteState& s, const Tolerance& tol) {
  Mat g = s.op_form.adjoint() * s.op_form;
  return tol.close(g, Mat::Identity(s.dim_a, s.dim_a));
}

Schmidt schmidt(const BipartiteState& s) {
  // Coefficients are the singular values of op_form/sqrt(a); with
  // B/sqrt(a) = W diag(c) U^dag the A-side vectors are conj(U) columns.
  linalg::Svd dec = linalg::svd(s.op_form / std::sqrt(double(s.dim_a)));
  Schmidt out;
  Eigen::Index r = std::min(s.dim_a, s.dim_b);
  out.coefficients.assign(dec.singular_values.begin(), dec.singular_values.begin() + r);
  out.a_vectors = dec.v.conjugate().leftCols(r);
  out.b_vectors = dec.u.leftCols(r);
  return out;
}

Eigen::Index schmidt_rank(const BipartiteState& s, const Tolerance& tol) {
  Schmidt dec = schmidt(s);
  double top = dec.coefficients.empty() ? 0.0 : dec.coefficients.front();
  Eigen::Index r = 0;
  for (double c : dec.coefficients)
    if (c > tol.singular_cutoff(top)) ++r;
  return r;
}

Mat partial_trace(const Mat& rho, Eigen::Index dim_a, Eigen::Index dim_b, System traced_out) {
  if (rho.rows() != dim_a * dim_b || rho.cols() != dim_a * dim_b)
    throw DimensionMismatch("partial_trace: operator size must be (a*b) x (a*b)");
  if (traced_out == System::B) {
    Mat out = Mat::Zero(dim_a, dim_a);
    for (Eigen::Index i = 0; i < dim_a; ++i)
      for (Eigen::Index k = 0; k < dim_a; ++k)
        for (Eigen::Index j = 0; j < dim_b; ++j) out(i, k) += rho(i * dim_b + j, k * dim_b + j);
    return out;
  }
  Mat out = Mat::Zero(dim_b, dim_b);
  for (Eigen::Index j = 0; j < dim_b; ++j)
    for (Eigen::Index l = 0; l < dim_b; ++l)
      for (Eigen::Index i = 0; i < dim_a; ++i) out(j, l) += rho(i * dim_b + j, i * dim_b + l);
  return out;
}

Mat partial_transpose(const Mat& rho, Eigen::Index dim_a, Eigen::Index dim_b, System which) {
  if (rho.rows() != dim_a * dim_b || rho.cols() != dim_a * dim_b)
    throw DimensionMismatch("partial_transpose: operator size must be (a*b) x (a*b)");
  Mat out(rho.rows(), rho.cols());
  for (Eigen::Index i = 0; i < dim_a; ++i)
    for (Eigen::Index j = 0; j < dim_b; ++j)
      for (Eigen::Index k = 0; k < dim_a; ++k)
        for (Eigen::Index l = 0; l < dim_b; ++l) {
          if (which == System::B)
            out(i * dim_b + l, k * dim_b + j) = rho(i * dim_b + j, k * dim_b + l);
          else
            out(k * dim_b + j, i * dim_b + l) = rho(i * dim_b + j, k * dim_b + l);
        }
  return out;
}

std::optional<SimultaneousSchmidt> simultaneous_schmidt_test(const std::vector<Mat>& ops,
                                                             const Tolerance& tol) {
  if (ops.empty()) throw InvalidParams("simultaneous_schmidt_test: empty list");
  const Eigen::Index n = ops.front().rows();
  for (const Mat& b : ops)
    if (b.rows() != n || b.cols() != n)
      throw DimensionMismatch("simultaneous_schmidt_test: square operators of equal size only");

  // B_k = U D_k V forces {B_i^dag B_j} to be a commuting family diagonalized
  // by the columns of V^dag.  Build its generated *-algebra and bail out as
  // soon as commutativity fails.
  std::vector<Mat> products;
  for (const Mat& bi : ops)
    for (const Mat& bj : ops) products.push_back(bi.adjoint() * bj);
  double scale = 0.0;
  for (const Mat& p : products) scale = std::max(scale, p.norm());
  for (const Mat& p : products)
    for (const Mat& q : products)
      if (!tol.matrix_zero(p * q - q * p, std::max(1.0, scale * scale) * 100)) return std::nullopt;

  // Commuting normal family (closed under adjoints by construction): split
  // into Hermitian parts and take a common eigenbasis.
  std::vector<Mat> herm;
  for (const Mat& p : products) {
    herm.push_back((p + p.adjoint()) / 2.0);
    herm.push_back(Scalar(0, 1) * (p - p.adjoint()) / 2.0);
  }
  Mat vdag;
  try {
    vdag = linalg::joint_eigenbasis_hermitian(herm, tol);
  } catch (const NoConvergence&) {
    return std::nullopt;
  }

  // Recover U column by column from B_k V^dag; a column that is zero in every
  // D_k is filled in later to keep U unitary.
  SimultaneousSchmidt out;
  out.u = Mat::Zero(n, n);
  out.diagonals.assign(ops.size(), Vec::Zero(n));
  std::vector<bool> fixed(n, false);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index best_k = -1;
    double best = 0.0;
    for (size_t k = 0; k < ops.size(); ++k) {
      double nk = (ops[k] * vdag.col(c)).norm();
      if (nk > best) {
        best = nk;
        best_k = static_cast<Eigen::Index>(k);
      }
    }
    if (best_k >= 0 && !tol.value_zero(best, 1.0)) {
      out.u.col(c) = linalg::canonical_phase(Vec(ops[best_k] * vdag.col(c))).normalized();
      fixed[c] = true;
    }
  }
  // Extend with orthonormal completion for the all-zero columns.
  for (Eigen::Index c = 0; c < n; ++c) {
    if (fixed[c]) continue;
    for (Eigen::Index e = 0; e < n; ++e) {
      Vec cand = Vec::Unit(n, e);
      for (Eigen::Index d = 0; d < n; ++d)
        if (fixed[d] || d < c) cand -= out.u.col(d).dot(cand) * out.u.col(d);
      if (cand.norm() > 0.5 / std::sqrt(double(n))) {
        out.u.col(c) = cand.normalized();
        break;
      }
    }
  }
  out.v = vdag.adjoint();
  for (size_t k = 0; k < ops.size(); ++k)
    for (Eigen::Index c = 0; c < n; ++c)
      out.diagonals[k](c) = out.u.col(c).dot(ops[k] * vdag.col(c));

  // Verification contract: ||B_k - U D_k V|| within tolerance, U unitary.
  if (!tol.close(out.u * out.u.adjoint(), Mat::Identity(n, n))) return std::nullopt;
  for (size_t k = 0; k < ops.size(); ++k) {
    Mat rebuilt = out.u * out.diagonals[k].asDiagonal() * out.v;
    if (!tol.matrix_zero(rebuilt - ops[k], std::max(ops[k].norm(), 1.0))) return std::nullopt;
  }
  return out;
}

}  // namespace locckit::bipartite
