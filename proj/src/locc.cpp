#include "locckit/locc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <unsupported/Eigen/MatrixFunctions>

#include "locckit/random.hpp"

namespace locckit::locc {

double verify_protocol(const bipartite::StateSet& s, const std::vector<Vec>& alice_basis,
                       const std::vector<std::vector<Vec>>& bob_bases) {
  const Eigen::Index a = s.states.front().dim_a;
  for (const Vec& phi : alice_basis)
    if (phi.size() != a) throw DimensionMismatch("verify_protocol: alice vector of wrong length");
  if (!bob_bases.empty() && bob_bases.size() != alice_basis.size())
    throw DimensionMismatch("verify_protocol: one Bob basis per Alice outcome required");

  const size_t d = s.states.size();
  double worst = 0.0;
  for (size_t x = 0; x < alice_basis.size(); ++x) {
    Vec conj_phi = alice_basis[x].conjugate();
    std::vector<Vec> bob(d);
    for (size_t i = 0; i < d; ++i) bob[i] = s.states[i].op_form * conj_phi;
    if (bob_bases.empty()) {
      for (size_t i = 0; i < d; ++i)
        for (size_t k = i + 1; k < d; ++k) worst = std::max(worst, std::abs(bob[i].dot(bob[k])));
    } else {
      if (bob_bases[x].size() != d)
        throw DimensionMismatch("verify_protocol: Bob basis must carry one vector per state");
      for (size_t i = 0; i < d; ++i)
        for (size_t k = 0; k < d; ++k) {
          if (i == k) continue;
          worst = std::max(worst, std::abs(bob_bases[x][i].dot(bob[k])));
        }
    }
  }
  return worst;
}

double verify_protocol(const bipartite::StateSet& s, const Protocol& protocol) {
  return verify_protocol(s, protocol.alice_basis, protocol.bob_bases);
}

namespace {

// Bob's conditional bases for an Alice basis in the standard conjugation
// frame: beta_{x,i} = normalized B_i conj(phi_x).
std::vector<std::vector<Vec>> conditional_bob_bases(const bipartite::StateSet& s,
                                                    const std::vector<Vec>& alice_basis,
                                                    const Tolerance& tol) {
  std::vector<std::vector<Vec>> out;
  for (const Vec& phi : alice_basis) {
    std::vector<Vec> per_outcome;
    for (const auto& state : s.states) {
      Vec bob = state.op_form * phi.conjugate();
      per_outcome.push_back(tol.value_zero(bob.norm(), 1.0) ? Vec(Vec::Zero(state.dim_b))
                                                            : Vec(bob.normalized()));
    }
    out.push_back(std::move(per_outcome));
  }
  return out;
}

}  // namespace

Mat PsiMap::apply(const Mat& tau) const {
  if (tau.rows() != dim_alice || tau.cols() != dim_alice)
    throw DimensionMismatch("PsiMap::apply: input must be dim_alice square");
  Vec v(dim_alice * dim_alice);
  for (Eigen::Index p = 0; p < dim_alice; ++p)
    for (Eigen::Index q = 0; q < dim_alice; ++q) v(p * dim_alice + q) = tau(p, q);
  Vec w = matrix * v;
  Mat out(dim_code, dim_code);
  for (Eigen::Index i = 0; i < dim_code; ++i)
    for (Eigen::Index j = 0; j < dim_code; ++j) out(i, j) = w(i * dim_code + j);
  return out;
}

PsiMap build_psi_map(const std::vector<Mat>& ops, const Tolerance& tol) {
  if (ops.empty()) throw InvalidParams("build_psi_map: empty list");
  const Eigen::Index a = ops.front().cols();
  const Eigen::Index d = static_cast<Eigen::Index>(ops.size());
  for (const Mat& b : ops)
    if (b.cols() != a || b.rows() != ops.front().rows())
      throw DimensionMismatch("build_psi_map: operators must share shape");
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      Scalar g = (ops[i].adjoint() * ops[j]).trace();
      Scalar want = (i == j) ? Scalar(double(a), 0) : Scalar(0, 0);
      if (!tol.value_zero(std::abs(g - want), double(a)))
        throw InvalidParams("build_psi_map: states are not orthonormal (Tr B_i^dag B_j != a d_ij)");
    }

  PsiMap psi;
  psi.dim_code = d;
  psi.dim_alice = a;
  psi.matrix.resize(d * d, a * a);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      Mat k = ops[i].adjoint() * ops[j];
      for (Eigen::Index p = 0; p < a; ++p)
        for (Eigen::Index q = 0; q < a; ++q) psi.matrix(i * d + j, p * a + q) = k(p, q) / double(d);
    }
  psi.unital = tol.close(psi.apply(Mat::Identity(a, a)), Mat::Identity(d, d));
  return psi;
}

namespace {

struct KernelCandidate {
  Mat m;
  double gap;  // spectral gap above the most negative eigenvalue
};

// Hermitian kernel elements with both positive and negative eigenvalues,
// preferred by the size of the negative-eigenvalue gap.
std::vector<KernelCandidate> kernel_candidates(const std::vector<Mat>& kernel_basis,
                                               const Tolerance& tol, unsigned seed) {
  std::vector<Mat> hermitian;
  for (const Mat& m : kernel_basis) {
    hermitian.push_back((m + m.adjoint()) / 2.0);
    hermitian.push_back(Scalar(0, 1) * (m - m.adjoint()) / 2.0);
  }
  rnd::Rng rng(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int t = 0; t < 32; ++t) {
    Mat combo = Mat::Zero(kernel_basis.front().rows(), kernel_basis.front().cols());
    for (const Mat& h : hermitian) combo += dist(rng) * h;
    hermitian.push_back(combo);
  }
  std::vector<KernelCandidate> out;
  for (const Mat& h : hermitian) {
    double norm = h.norm();
    if (tol.value_zero(norm, 1.0)) continue;
    linalg::HermitianEig eig = linalg::eig_hermitian(h / norm, tol);
    double lo = eig.eigenvalues.back();
    double hi = eig.eigenvalues.front();
    double cut = tol.singular_cutoff(1.0) * 10;
    if (lo < -cut && hi > cut) {
      double gap = eig.eigenvalues[eig.eigenvalues.size() - 2] - lo;
      out.push_back({h / norm, gap});
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const KernelCandidate& x, const KernelCandidate& y) { return x.gap > y.gap; });
  return out;
}

}  // namespace

std::optional<Basis3d> find_distinguishable_basis_3d(const std::vector<Mat>& ops,
                                                     const Tolerance& tol, unsigned seed,
                                                     const std::optional<Mat>& preferred_kernel) {
  if (ops.size() != 3) throw InvalidParams("find_distinguishable_basis_3d: three states required");
  const Eigen::Index a = ops.front().cols();
  if (a != 3) throw InvalidParams("find_distinguishable_basis_3d: Alice side must be C^3");

  opalg::OperatorSpan x = opalg::x_subspace(ops, tol);
  if (static_cast<Eigen::Index>(x.basis.size()) == a * a)
    throw StrictSubspaceRequired(
        "find_distinguishable_basis_3d: span{B_i^dag B_j} is all of M_3");

  // Kernel of tau -> (Tr(tau^T B_i^dag B_j))_{ij}.
  Mat l(9, 9);
  Eigen::Index row = 0;
  for (const Mat& bi : ops)
    for (const Mat& bj : ops) {
      Mat k = bi.adjoint() * bj;
      for (Eigen::Index p = 0; p < 3; ++p)
        for (Eigen::Index q = 0; q < 3; ++q) l(row, p * 3 + q) = k(p, q);
      ++row;
    }
  Mat kernel = linalg::null_space(l, tol);
  std::vector<Mat> kernel_basis;
  for (Eigen::Index c = 0; c < kernel.cols(); ++c) {
    Mat m(3, 3);
    for (Eigen::Index p = 0; p < 3; ++p)
      for (Eigen::Index q = 0; q < 3; ++q) m(p, q) = kernel(p * 3 + q, c);
    kernel_basis.push_back(m);
  }
  if (kernel_basis.empty())
    throw StrictSubspaceRequired("find_distinguishable_basis_3d: kernel is empty");

  PsiMap psi = build_psi_map(ops, tol);
  bipartite::StateSet s = bipartite::state_set_from_operators(ops, 3, ops.front().rows(), tol);

  std::vector<KernelCandidate> candidates = kernel_candidates(kernel_basis, tol, seed);
  if (preferred_kernel) {
    Mat h = (*preferred_kernel + preferred_kernel->adjoint()) / 2.0;
    Vec vech(9);
    for (Eigen::Index p = 0; p < 3; ++p)
      for (Eigen::Index q = 0; q < 3; ++q) vech(p * 3 + q) = h(p, q);
    if (!tol.value_zero((l * vech).norm(), l.norm()))
      throw InvalidParams(
          "find_distinguishable_basis_3d: preferred kernel element is not in the kernel");
    candidates.insert(candidates.begin(), {h / h.norm(), std::numeric_limits<double>::max()});
  }

  bool commutation_failed = false;
  for (const KernelCandidate& cand : candidates) {
    linalg::HermitianEig eig = linalg::eig_hermitian(cand.m, tol);
    // Ascending: lambda_0 < 0 <= ... per the ordering convention.
    std::vector<Vec> phis{eig.eigenvectors.col(2), eig.eigenvectors.col(1),
                          eig.eigenvectors.col(0)};
    Mat q1 = psi.apply(phis[1] * phis[1].adjoint());
    Mat q2 = psi.apply(phis[2] * phis[2].adjoint());
    double scale = std::max({q1.norm() * q2.norm(), 1.0});
    if (!tol.matrix_zero(q1 * q2 - q2 * q1, scale * 100)) {
      commutation_failed = true;
      continue;
    }
    Mat common = linalg::joint_eigenbasis_hermitian({q1, q2}, tol, seed);

    Basis3d result;
    result.kernel_element = cand.m;
    result.alice_basis = phis;
    std::vector<Mat> rotated_ops;
    for (Eigen::Index k = 0; k < 3; ++k) {
      result.code_coefficients.push_back(common.col(k));
      Mat bk = Mat::Zero(ops.front().rows(), 3);
      for (Eigen::Index i = 0; i < 3; ++i) bk += common(i, k) * ops[i];
      rotated_ops.push_back(bk);
    }
    bipartite::StateSet rotated =
        bipartite::state_set_from_operators(rotated_ops, 3, ops.front().rows(), tol);
    result.protocol.alice_basis = phis;
    result.protocol.bob_bases = conditional_bob_bases(rotated, phis, tol);
    result.overlap = verify_protocol(rotated, result.protocol);
    if (tol.value_zero(result.overlap, 1.0)) return result;
    commutation_failed = true;
  }
  if (commutation_failed)
    throw CommutationFailure(
        "find_distinguishable_basis_3d: compressions failed to commute or protocol did not "
        "verify for any kernel candidate");
  return std::nullopt;
}

Verdict schmidt_rank_obstruction(const bipartite::BipartiteState& phi, const Tolerance& tol) {
  Eigen::Index r = bipartite::schmidt_rank(phi, tol);
  Verdict v;
  v.schmidt_rank_certificate = r;
  if (r > 2) {
    v.status = Status::NotDistinguishable;
    std::ostringstream msg;
    msg << "Schmidt rank " << r
        << " > 2: no basis of the orthogonal complement is one-way distinguishable";
    v.diagnostics = msg.str();
  } else {
    v.status = Status::Inconclusive;
    std::ostringstream msg;
    msg << "Schmidt rank " << r << " <= 2: obstruction does not apply";
    v.diagnostics = msg.str();
  }
  return v;
}

double sym_antisym_obstruction(Eigen::Index d, const std::vector<Mat>& sigma_list,
                               const Tolerance& tol) {
  if (d < 2) throw InvalidParams("sym_antisym_obstruction: d >= 2 required");
  Mat swap = Mat::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) swap(i * d + j, j * d + i) = 1.0;
  Mat sym = (Mat::Identity(d * d, d * d) + swap) / 2.0;
  Mat anti = (Mat::Identity(d * d, d * d) - swap) / 2.0;

  double min_norm = std::numeric_limits<double>::infinity();
  for (const Mat& sigma : sigma_list) {
    if (sigma.rows() != d || sigma.cols() != d)
      throw DimensionMismatch("sym_antisym_obstruction: sigma must be d x d");
    if (linalg::rank(sigma, tol) != 1)
      throw RankOneRequired("sym_antisym_obstruction: sigma must be rank one");
    Mat ext = linalg::tensor(sigma, Mat::Identity(d, d));
    Mat cross = sym * ext * anti;
    min_norm = std::min(min_norm, (cross + cross.adjoint()).norm());
  }
  return min_norm;
}

namespace {

std::vector<Mat> alice_compressions(const qec::CodeSpace& code, const std::vector<Vec>& alice_basis,
                                    Eigen::Index dim_b) {
  const Eigen::Index d = static_cast<Eigen::Index>(code.basis.size());
  Mat basis(code.ambient_dim, d);
  for (Eigen::Index c = 0; c < d; ++c) basis.col(c) = code.basis[c];
  std::vector<Mat> out;
  for (const Vec& phi : alice_basis) {
    Mat op = linalg::tensor(phi * phi.adjoint(), Mat::Identity(dim_b, dim_b));
    out.push_back(basis.adjoint() * op * basis);
  }
  return out;
}

}  // namespace

CommuteTestReport necessary_commute_test(const qec::CodeSpace& code,
                                         const std::vector<Vec>& alice_basis,
                                         const Tolerance& tol) {
  if (alice_basis.empty()) throw InvalidParams("necessary_commute_test: empty alice basis");
  const Eigen::Index a = alice_basis.front().size();
  if (code.ambient_dim % a != 0)
    throw DimensionMismatch("necessary_commute_test: ambient dimension not divisible by dim_a");
  std::vector<Mat> q = alice_compressions(code, alice_basis, code.ambient_dim / a);
  CommuteTestReport report;
  for (size_t i = 0; i < q.size(); ++i)
    for (size_t j = i + 1; j < q.size(); ++j)
      report.worst_commutator =
          std::max(report.worst_commutator, (q[i] * q[j] - q[j] * q[i]).norm());
  report.commuting = tol.value_zero(report.worst_commutator, 1.0);
  return report;
}

Verdict oneway_algebra_test(const bipartite::StateSet& s, const Tolerance& tol, unsigned seed) {
  if (!s.orthonormal) throw InvalidParams("oneway_algebra_test: state set must be orthonormal");
  std::vector<Mat> ops;
  for (const auto& st : s.states) ops.push_back(st.op_form);
  const Eigen::Index a = s.states.front().dim_a;

  opalg::OperatorSpan s0 = opalg::operator_system_S0(ops, tol);
  Verdict verdict;
  double closure = opalg::closure_residual(s0, tol);
  if (!tol.value_zero(closure, 1.0)) {
    verdict.status = Status::Inconclusive;
    verdict.residual = closure;
    std::ostringstream msg;
    msg << "operator system span{B_i^dag B_j, I} is not multiplicatively closed (residual "
        << closure << "); the separating-vector criterion does not apply";
    verdict.diagnostics = msg.str();
    return verdict;
  }

  opalg::WedderburnDecomposition wd = opalg::wedderburn_decompose(s0, tol, seed);
  verdict.structure = wd.structure;
  if (!opalg::has_separating_vector(wd.structure)) {
    verdict.status = Status::NotDistinguishable;
    std::ostringstream msg;
    msg << "algebra structure has a block with m_k > n_k: no separating vector exists";
    verdict.diagnostics = msg.str();
    return verdict;
  }

  verdict.status = Status::Distinguishable;
  std::optional<Mat> trace_basis = opalg::trace_vector_basis(wd.structure.blocks);
  if (trace_basis && wd.structure.support_dim == a) {
    // Alice measures the conjugates of the trace vectors; every off-diagonal
    // product then averages to Tr(B_i^dag B_j)/a = 0.
    Protocol protocol;
    std::vector<std::vector<Vec>> bob;
    for (Eigen::Index x = 0; x < a; ++x) {
      Vec chi_bar = wd.transform * trace_basis->col(x);
      protocol.alice_basis.push_back(chi_bar.conjugate());
    }
    protocol.bob_bases = conditional_bob_bases(s, protocol.alice_basis, tol);
    verdict.residual = verify_protocol(s, protocol);
    if (!tol.value_zero(verdict.residual, 1.0))
      throw Error("oneway_algebra_test: constructed protocol failed verification");
    verdict.protocol = std::move(protocol);
    verdict.diagnostics = "separating vector exists; protocol built from trace-vector basis";
  } else {
    std::optional<Vec> sep = opalg::find_separating_vector(s0, 64, tol, seed);
    if (!sep)
      throw Error(
          "oneway_algebra_test: structure admits a separating vector but the search failed");
    verdict.separating_vector = sep;
    verdict.diagnostics =
        "separating vector exists (verified by rank); no constructive trace-vector basis for "
        "this block structure";
  }
  return verdict;
}

KingResult king_search(const qec::CodeSpace& code, int attempts, unsigned seed,
                       const Tolerance& tol) {
  if (code.basis.size() != 3) throw InvalidParams("king_search: code must be 3-dimensional");
  if (code.ambient_dim % 3 != 0)
    throw DimensionMismatch("king_search: ambient must be C^3 (x) C^n");
  const Eigen::Index n = code.ambient_dim / 3;

  KingResult result;
  result.best_commutator = std::numeric_limits<double>::infinity();
  const double accept = std::max(tol.absolute * 100, 1e-8);

  auto commutator_norm = [&](const Vec& p1, const Vec& p2) {
    std::vector<Mat> q = alice_compressions(code, {p1, p2}, n);
    return (q[0] * q[1] - q[1] * q[0]).norm();
  };
  auto consider = [&](const Vec& p1, const Vec& p2) {
    double c = commutator_norm(p1, p2);
    if (c < result.best_commutator) {
      result.best_commutator = c;
      if (c <= accept) result.witness = std::make_pair(p1, p2);
    }
    return c;
  };

  // Seed from the constructive basis finder whenever the subspace condition
  // holds; its Alice basis makes all compressions commute.
  try {
    std::vector<Mat> ops;
    for (const Vec& v : code.basis)
      ops.push_back(bipartite::from_vector(v, 3, n, tol).op_form);
    std::optional<Basis3d> basis = find_distinguishable_basis_3d(ops, tol, seed);
    if (basis) consider(basis->alice_basis[0], basis->alice_basis[1]);
  } catch (const Error&) {
    // Not seedable; fall through to the random search.
  }
  if (result.witness) return result;

  rnd::Rng rng(seed);
  for (int t = 0; t < attempts && !result.witness; ++t) {
    Mat q = rnd::haar_unitary(3, rng);
    Vec p1 = q.col(0), p2 = q.col(1);
    double current = consider(p1, p2);
    double step = 0.3;
    for (int iter = 0; iter < 300 && !result.witness; ++iter) {
      Mat k = rnd::gaussian_matrix(3, 3, rng);
      k = (k - k.adjoint()) / 2.0;
      Mat rot = (step * k).exp();
      Mat frame(3, 3);
      frame.col(0) = p1;
      frame.col(1) = p2;
      Vec third;
      for (Eigen::Index e = 0; e < 3; ++e) {
        Vec cand = Vec::Unit(3, e);
        cand -= p1.dot(cand) * p1 + p2.dot(cand) * p2;
        if (cand.norm() > 0.3) {
          third = cand.normalized();
          break;
        }
      }
      frame.col(2) = third;
      Vec n1 = frame * rot.col(0), n2 = frame * rot.col(1);
      double cand = consider(n1, n2);
      if (cand < current) {
        current = cand;
        p1 = n1;
        p2 = n2;
      } else {
        step = std::max(step * 0.9, 1e-4);
      }
    }
  }
  return result;
}

}  // namespace locckit::locc
