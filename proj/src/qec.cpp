#include "locckit/qec.hpp"

#include <cmath>

namespace locckit::qec {

CodeSpace make_code_space(const std::vector<Vec>& basis, const Tolerance& tol) {
  if (basis.empty()) throw InvalidParams("make_code_space: empty basis");
  const Eigen::Index n = basis.front().size();
  for (const Vec& v : basis) {
    if (v.size() != n) throw DimensionMismatch("make_code_space: vectors of unequal length");
    linalg::check_finite(v, "make_code_space");
  }
  for (size_t i = 0; i < basis.size(); ++i)
    for (size_t k = 0; k < basis.size(); ++k) {
      double want = (i == k) ? 1.0 : 0.0;
      if (!tol.value_zero(std::abs(basis[i].dot(basis[k]) - Scalar(want)), 1.0))
        throw InvalidParams("make_code_space: basis not orthonormal");
    }
  CodeSpace code;
  code.ambient_dim = n;
  code.basis = basis;
  code.projector = Mat::Zero(n, n);
  for (const Vec& v : basis) code.projector += v * v.adjoint();
  return code;
}

KlReport kl_check(const CodeSpace& code, const channels::KrausChannel& noise,
                  const Tolerance& tol) {
  if (noise.dim_in != code.ambient_dim)
    throw DimensionMismatch("kl_check: noise input dimension must match code ambient");
  const size_t nk = noise.kraus.size();
  const double trace_p = static_cast<double>(code.basis.size());
  const Mat& p = code.projector;

  KlReport report;
  report.lambda.resize(nk, nk);
  for (size_t i = 0; i < nk; ++i)
    for (size_t j = 0; j < nk; ++j) {
      Mat compressed = p * noise.kraus[i].adjoint() * noise.kraus[j] * p;
      Scalar lambda = compressed.trace() / trace_p;
      report.lambda(i, j) = lambda;
      report.residual = std::max(report.residual, (compressed - lambda * p).norm());
    }
  report.correctable = tol.value_zero(report.residual, 1.0);
  return report;
}

SetCheckReport correctable_set_check(const std::vector<Mat>& states,
                                     const channels::KrausChannel& noise, const Tolerance& tol) {
  SetCheckReport report;
  std::vector<Mat> outputs;
  outputs.reserve(states.size());
  for (const Mat& rho : states) outputs.push_back(channels::apply_channel(noise, rho));
  report.correctable = true;
  for (size_t k = 0; k < states.size(); ++k)
    for (size_t l = k + 1; l < states.size(); ++l) {
      double overlap = std::abs((outputs[k] * outputs[l]).trace());
      if (overlap > report.worst_overlap) {
        report.worst_overlap = overlap;
        report.worst_pair = {k, l};
      }
    }
  report.correctable = tol.value_zero(report.worst_overlap, 1.0);
  return report;
}

std::vector<Mat> compressions(const CodeSpace& code, const channels::KrausChannel& noise) {
  if (noise.dim_in != code.ambient_dim)
    throw DimensionMismatch("compressions: noise input dimension must match code ambient");
  const Eigen::Index d = static_cast<Eigen::Index>(code.basis.size());
  Mat basis(code.ambient_dim, d);
  for (Eigen::Index c = 0; c < d; ++c) basis.col(c) = code.basis[c];

  std::vector<Mat> out;
  for (const Mat& aj : noise.kraus)
    for (const Mat& ai : noise.kraus) out.push_back(basis.adjoint() * (aj.adjoint() * ai) * basis);
  return out;
}

CommuteReport commuting_family_check(const CodeSpace& code, const channels::KrausChannel& noise,
                                     const Tolerance& tol) {
  std::vector<Mat> family = compressions(code, noise);
  CommuteReport report;
  double scale = 0.0;
  for (const Mat& q : family) scale = std::max(scale, q.norm());
  for (size_t i = 0; i < family.size(); ++i)
    for (size_t j = i + 1; j < family.size(); ++j)
      report.worst_commutator =
          std::max(report.worst_commutator, (family[i] * family[j] - family[j] * family[i]).norm());
  report.commuting = tol.value_zero(report.worst_commutator, std::max(scale * scale, 1.0));
  return report;
}

Mat simultaneous_eigenbasis(const std::vector<Mat>& family, const Tolerance& tol, unsigned seed) {
  if (family.empty()) throw InvalidParams("simultaneous_eigenbasis: empty family");
  const Eigen::Index n = family.front().rows();
  double scale = 1.0;
  for (const Mat& q : family) {
    if (q.rows() != n || q.cols() != n)
      throw DimensionMismatch("simultaneous_eigenbasis: square matrices of equal size required");
    scale = std::max(scale, q.norm());
  }
  for (const Mat& q : family)
    if (!tol.matrix_zero(q * q.adjoint() - q.adjoint() * q, scale * scale))
      throw NotNormal("simultaneous_eigenbasis: family member is not normal");
  for (size_t i = 0; i < family.size(); ++i)
    for (size_t j = i + 1; j < family.size(); ++j)
      if (!tol.matrix_zero(family[i] * family[j] - family[j] * family[i], scale * scale))
        throw NotCommuting("simultaneous_eigenbasis: family members do not commute");

  // Commuting normal family: by Fuglede the Hermitian and anti-Hermitian
  // parts all commute with each other.
  std::vector<Mat> herm;
  for (const Mat& q : family) {
    herm.push_back((q + q.adjoint()) / 2.0);
    herm.push_back(Scalar(0, 1) * (q - q.adjoint()) / 2.0);
  }
  return linalg::joint_eigenbasis_hermitian(herm, tol, seed);
}

bool block_structure_check(const std::vector<CodeSpace>& decomposition,
                           const channels::KrausChannel& noise, const Tolerance& tol) {
  if (decomposition.empty()) throw InvalidParams("block_structure_check: empty decomposition");
  const Eigen::Index n = decomposition.front().ambient_dim;
  for (const CodeSpace& c : decomposition)
    if (c.ambient_dim != n)
      throw DimensionMismatch("block_structure_check: blocks must share the ambient space");
  if (noise.dim_in != n)
    throw DimensionMismatch("block_structure_check: noise input dimension mismatch");
  for (size_t i = 0; i < decomposition.size(); ++i)
    for (size_t j = i + 1; j < decomposition.size(); ++j)
      if (!tol.matrix_zero(decomposition[i].projector * decomposition[j].projector, 1.0))
        throw InvalidParams("block_structure_check: subspaces are not mutually orthogonal");

  for (const Mat& ak : noise.kraus)
    for (const Mat& al : noise.kraus) {
      Mat prod = ak.adjoint() * al;
      double scale = std::max(prod.norm(), 1.0);
      for (size_t i = 0; i < decomposition.size(); ++i)
        for (size_t j = 0; j < decomposition.size(); ++j) {
          if (i == j) continue;
          Mat cross = decomposition[i].projector * prod * decomposition[j].projector;
          if (!tol.matrix_zero(cross, scale)) return false;
        }
    }
  return true;
}

}  // namespace locckit::qec
