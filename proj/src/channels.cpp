#include "locckit/channels.hpp"

#include <cmath>
#include <sstream>

#include "locckit/random.hpp"

namespace locckit::channels {

using linalg::tensor;

KrausChannel make_channel(std::vector<Mat> kraus) {
  if (kraus.empty()) throw InvalidParams("make_channel: need at least one Kraus operator");
  KrausChannel c;
  c.dim_out = kraus.front().rows();
  c.dim_in = kraus.front().cols();
  for (const Mat& k : kraus) {
    if (k.rows() != c.dim_out || k.cols() != c.dim_in)
      throw DimensionMismatch("make_channel: Kraus operators must share shape");
    linalg::check_finite(k, "make_channel");
  }
  c.kraus = std::move(kraus);
  return c;
}

bool is_trace_preserving(const KrausChannel& c, const Tolerance& tol) {
  Mat sum = Mat::Zero(c.dim_in, c.dim_in);
  for (const Mat& k : c.kraus) sum += k.adjoint() * k;
  return tol.close(sum, Mat::Identity(c.dim_in, c.dim_in));
}

bool povm_is_valid(const Povm& p, const Tolerance& tol) {
  if (p.elements.empty()) return false;
  const Eigen::Index n = p.elements.front().rows();
  Mat sum = Mat::Zero(n, n);
  for (const Mat& e : p.elements) {
    if (e.rows() != n || e.cols() != n) return false;
    if (!tol.matrix_zero(e - e.adjoint(), std::max(e.norm(), 1.0))) return false;
    Eigen::SelfAdjointEigenSolver<Mat> solver((e + e.adjoint()) / 2.0);
    if (solver.eigenvalues().minCoeff() < -tol.singular_cutoff(e.norm())) return false;
    sum += e;
  }
  return tol.close(sum, Mat::Identity(n, n));
}

std::vector<RankOneElement> rank_one_decomposition(const Povm& p, const Tolerance& tol) {
  std::vector<RankOneElement> out;
  for (size_t j = 0; j < p.elements.size(); ++j) {
    linalg::HermitianEig eig = linalg::eig_hermitian(p.elements[j], tol);
    double top = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues.front();
    int significant = 0;
    for (double ev : eig.eigenvalues)
      if (std::abs(ev) > tol.singular_cutoff(std::abs(top))) ++significant;
    if (significant > 1)
      throw NotRankOne("rank_one_decomposition: element " + std::to_string(j) +
                       " has rank above one");
    if (significant == 0 || top <= 0)
      throw NotRankOne("rank_one_decomposition: element " + std::to_string(j) +
                       " is zero or not PSD");
    out.push_back({top, eig.eigenvectors.col(0)});
  }
  return out;
}

KrausChannel qc_channel_from_povm(const Povm& p, const Tolerance& tol) {
  std::vector<RankOneElement> dec = rank_one_decomposition(p, tol);
  const Eigen::Index a = p.elements.front().rows();
  const Eigen::Index r = static_cast<Eigen::Index>(dec.size());
  std::vector<Mat> kraus;
  for (Eigen::Index j = 0; j < r; ++j) {
    Mat v = Mat::Zero(r, a);
    v.row(j) = std::sqrt(dec[j].weight) * dec[j].vector.adjoint();
    kraus.push_back(v);
  }
  return make_channel(std::move(kraus));
}

KrausChannel extend_with_identity(const KrausChannel& c, Eigen::Index dim_b) {
  std::vector<Mat> kraus;
  kraus.reserve(c.kraus.size());
  Mat id = Mat::Identity(dim_b, dim_b);
  for (const Mat& k : c.kraus) kraus.push_back(tensor(k, id));
  return make_channel(std::move(kraus));
}

Mat apply_channel(const KrausChannel& c, const Mat& rho) {
  if (rho.rows() != c.dim_in || rho.cols() != c.dim_in)
    throw DimensionMismatch("apply: state dimension does not match channel input");
  Mat out = Mat::Zero(c.dim_out, c.dim_out);
  for (const Mat& k : c.kraus) out += k * rho * k.adjoint();
  return out;
}

KrausChannel compose(const KrausChannel& second, const KrausChannel& first) {
  if (second.dim_in != first.dim_out)
    throw DimensionMismatch("compose: inner dimensions do not match");
  std::vector<Mat> kraus;
  kraus.reserve(second.kraus.size() * first.kraus.size());
  for (const Mat& k2 : second.kraus)
    for (const Mat& k1 : first.kraus) kraus.push_back(k2 * k1);
  return make_channel(std::move(kraus));
}

KrausChannel build_recovery(const bipartite::StateSet& s, const std::vector<Vec>& alice_basis,
                            const Tolerance& tol) {
  if (!s.orthonormal) throw InvalidParams("build_recovery: state set must be orthonormal");
  const Eigen::Index a = s.states.front().dim_a;
  const Eigen::Index b = s.states.front().dim_b;
  const size_t d = s.states.size();
  if (static_cast<Eigen::Index>(alice_basis.size()) != a)
    throw DimensionMismatch("build_recovery: alice basis must have dim_a vectors");
  for (const Vec& phi : alice_basis)
    if (phi.size() != a) throw DimensionMismatch("build_recovery: alice vector of wrong length");

  // Precondition: for each outcome x the conditional Bob states {B_i phi_x}
  // must be mutually orthogonal.
  double worst = 0.0;
  size_t worst_i = 0, worst_k = 0, worst_x = 0;
  for (size_t x = 0; x < alice_basis.size(); ++x) {
    for (size_t i = 0; i < d; ++i)
      for (size_t k = i + 1; k < d; ++k) {
        Vec bi = s.states[i].op_form * alice_basis[x];
        Vec bk = s.states[k].op_form * alice_basis[x];
        double overlap = std::abs(bi.dot(bk));
        if (overlap > worst) {
          worst = overlap;
          worst_i = i;
          worst_k = k;
          worst_x = x;
        }
      }
  }
  if (!tol.value_zero(worst, 1.0)) {
    std::ostringstream msg;
    msg << "build_recovery: conditional Bob states not orthogonal; worst pair (" << worst_i << ","
        << worst_k << ") at outcome " << worst_x << " with overlap " << worst;
    throw NotDistinguishable(msg.str());
  }

  const Eigen::Index r = static_cast<Eigen::Index>(alice_basis.size());
  std::vector<Mat> kraus;
  for (Eigen::Index x = 0; x < r; ++x) {
    Mat rx = Mat::Zero(a * b, b);
    for (size_t i = 0; i < d; ++i) {
      Vec bob = s.states[i].op_form * alice_basis[x];
      rx += s.states[i].vector * bob.adjoint();
    }
    Mat bra = Mat::Zero(1, r);
    bra(0, x) = 1.0;
    kraus.push_back(tensor(bra, rx));
  }
  return make_channel(std::move(kraus));
}

double verify_recovery(const KrausChannel& recovery, const KrausChannel& noise,
                       const std::vector<Vec>& code_basis, int trials, unsigned seed) {
  if (noise.dim_out != recovery.dim_in)
    throw DimensionMismatch("verify_recovery: recovery input must match noise output");
  const Eigen::Index n = noise.dim_in;
  for (const Vec& v : code_basis)
    if (v.size() != n) throw DimensionMismatch("verify_recovery: code vector of wrong length");

  auto deviation = [&](const Mat& rho) {
    Mat roundtrip = channels::apply_channel(recovery, channels::apply_channel(noise, rho));
    return (roundtrip - rho).norm();
  };

  double dev = 0.0;
  // The d^2 matrix units span L(code); linearity makes this a complete check.
  for (const Vec& bi : code_basis)
    for (const Vec& bk : code_basis) dev = std::max(dev, deviation(bi * bk.adjoint()));
  rnd::Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    Vec coeff = rnd::gaussian_vector(static_cast<Eigen::Index>(code_basis.size()), rng);
    Vec psi = Vec::Zero(n);
    for (size_t i = 0; i < code_basis.size(); ++i) psi += coeff(i) * code_basis[i];
    psi.normalize();
    dev = std::max(dev, deviation(psi * psi.adjoint()));
  }
  return dev;
}

}  // namespace locckit::channels
