#pragma once

#include <random>

#include "locckit/linalg.hpp"

namespace locckit::rnd {

using Rng = std::mt19937_64;

inline Scalar gaussian(Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  double re = dist(rng);
  double im = dist(rng);
  return {re, im};
}

inline Vec gaussian_vector(Eigen::Index n, Rng& rng) {
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gaussian(rng);
  return v;
}

inline Mat gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gaussian(rng);
  return m;
}

/// Haar-distributed unitary via QR with phase correction.
inline Mat haar_unitary(Eigen::Index n, Rng& rng) {
  Mat z = gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<Mat> qr(z);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    Scalar d = r(i, i);
    q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : Scalar(1, 0));
  }
  return q;
}

inline Vec random_unit_vector(Eigen::Index n, Rng& rng) {
  return gaussian_vector(n, rng).normalized();
}

/// Random density matrix (PSD, trace one).
inline Mat random_density(Eigen::Index n, Rng& rng) {
  Mat g = gaussian_matrix(n, n, rng);
  Mat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

}  // namespace locckit::rnd
