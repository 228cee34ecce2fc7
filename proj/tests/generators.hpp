#pragma once

// Shared random-instance generators for property and acceptance tests.

#include <utility>
#include <vector>

#include "locckit/channels.hpp"
#include "locckit/opalg.hpp"
#include "locckit/qec.hpp"
#include "locckit/random.hpp"

namespace testgen {

using locckit::Mat;
using locckit::Scalar;
using locckit::Vec;

struct ClassifyingInstance {
  locckit::channels::KrausChannel noise;
  std::vector<Vec> code_basis;  // individually correctable by construction
  Eigen::Index ambient = 0;
};

// Canonical algebra for a block multiset, hidden behind a Haar rotation.
inline locckit::opalg::OperatorSpan rotated_canonical(
    const std::vector<std::pair<Eigen::Index, Eigen::Index>>& blocks, locckit::rnd::Rng& rng) {
  Eigen::Index total = 0;
  for (auto [m, n] : blocks) total += m * n;
  Mat u = locckit::rnd::haar_unitary(total, rng);
  std::vector<Mat> basis;
  Eigen::Index offset = 0;
  for (auto [m, n] : blocks) {
    for (Eigen::Index p = 0; p < m; ++p)
      for (Eigen::Index q = 0; q < m; ++q) {
        Mat unit = Mat::Zero(m, m);
        unit(p, q) = 1.0;
        Mat element = Mat::Zero(total, total);
        element.block(offset, offset, m * n, m * n) =
            locckit::linalg::tensor(unit, Mat::Identity(n, n));
        basis.push_back(u * element * u.adjoint());
      }
    offset += m * n;
  }
  return locckit::opalg::make_span(basis);
}

// Shared entangled |Phi> plus the generalized Bell basis on C^d (x) C^d,
// i.e. operator forms I_d (x) X^i Z^j on Alice/Bob systems of dimension d^2,
// together with Alice's Bell-basis measurement and the matching recovery.
struct TeleportFixture {
  locckit::bipartite::StateSet states;
  locckit::channels::KrausChannel noise;
  locckit::channels::KrausChannel recovery;
  std::vector<Vec> code_basis;
};

inline TeleportFixture make_teleport_fixture(Eigen::Index d) {
  using namespace locckit;
  std::vector<Mat> weyl = opalg::weyl_operators(d);
  Mat id_d = Mat::Identity(d, d);
  std::vector<Mat> ops;
  for (const Mat& w : weyl) ops.push_back(linalg::tensor(id_d, w));
  TeleportFixture out;
  out.states = bipartite::state_set_from_operators(ops, d * d, d * d);

  std::vector<Vec> measured;
  for (const Mat& w : weyl) measured.push_back(bipartite::from_operator(w, d, d).vector);
  channels::Povm povm;
  for (const Vec& chi : measured) povm.elements.push_back(chi * chi.adjoint());
  out.noise =
      channels::extend_with_identity(channels::qc_channel_from_povm(povm), d * d);

  std::vector<Vec> teleport_frame;
  for (const Vec& chi : measured) teleport_frame.push_back(chi.conjugate());
  out.recovery = channels::build_recovery(out.states, teleport_frame);
  for (const auto& st : out.states.states) out.code_basis.push_back(st.vector);
  return out;
}

// Channel that routes each code vector into its own output sector: the
// compressions P A_j^dag A_i P are then diagonal in the code basis, and the
// basis is individually correctable.  Hidden behind a Haar rotation.
inline ClassifyingInstance make_classifying_instance(Eigen::Index d, Eigen::Index sectors,
                                                     locckit::rnd::Rng& rng) {
  const Eigen::Index n = d * sectors;
  Mat rot = locckit::rnd::haar_unitary(n, rng);

  // alpha: amplitudes per (kraus i, code k); columns have unit norm.
  Mat alpha(sectors, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    Vec c = locckit::rnd::gaussian_vector(sectors, rng).normalized();
    alpha.col(k) = c;
  }
  std::vector<Mat> kraus;
  for (Eigen::Index i = 0; i < sectors; ++i) {
    Mat a = Mat::Zero(n, n);
    for (Eigen::Index k = 0; k < d; ++k) {
      Vec chi = locckit::rnd::gaussian_vector(sectors, rng).normalized();
      Vec target = Vec::Zero(n);
      for (Eigen::Index t = 0; t < sectors; ++t) target(k * sectors + t) = chi(t);
      a += alpha(i, k) * target * Vec(Vec::Unit(n, k * sectors)).adjoint();
    }
    kraus.push_back(rot * a * rot.adjoint());
  }

  ClassifyingInstance out;
  out.ambient = n;
  out.noise = locckit::channels::make_channel(std::move(kraus));
  for (Eigen::Index k = 0; k < d; ++k)
    out.code_basis.push_back(rot.col(k * sectors));
  return out;
}

}  // namespace testgen
