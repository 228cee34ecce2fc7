#pragma once

#include <catch2/catch.hpp>

#include "locckit/linalg.hpp"

namespace testutil {

using locckit::Mat;
using locckit::Scalar;
using locckit::Vec;

inline Mat pauli_x() { return (Mat(2, 2) << 0, 1, 1, 0).finished(); }
inline Mat pauli_y() {
  return (Mat(2, 2) << Scalar(0, 0), Scalar(0, -1), Scalar(0, 1), Scalar(0, 0)).finished();
}
inline Mat pauli_z() { return (Mat(2, 2) << 1, 0, 0, -1).finished(); }
inline Mat id(Eigen::Index n) { return Mat::Identity(n, n); }

inline double frob_dist(const Mat& a, const Mat& b) { return (a - b).norm(); }

// The worked three-qutrit-state example: B_1 = I, B_2 = diag(1, w, w^2),
// B_3 = sqrt(3/2)(|0><1| - |1><0|).
inline std::vector<Mat> qutrit_ops() {
  Scalar w = std::polar(1.0, 2.0 * M_PI / 3.0);
  Mat b1 = Mat::Identity(3, 3);
  Mat b2 = Mat::Zero(3, 3);
  b2(0, 0) = 1;
  b2(1, 1) = w;
  b2(2, 2) = w * w;
  Mat b3 = Mat::Zero(3, 3);
  double s = std::sqrt(1.5);
  b3(0, 1) = s;
  b3(1, 0) = -s;
  return {b1, b2, b3};
}

}  // namespace testutil
