#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "locckit/errors.hpp"

namespace locckit {

using Scalar = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Shared comparison policy: x ~ y iff |x-y| <= absolute + relative*max(|x|,|y|),
/// applied to scalars or Frobenius norms as each operation declares.
struct Tolerance {
  double absolute = 1e-10;
  double relative = 1e-9;

  bool scalar_close(double x, double y) const {
    return std::abs(x - y) <= absolute + relative * std::max(std::abs(x), std::abs(y));
  }
  // |x| small relative to a reference scale.
  bool value_zero(double x, double scale = 1.0) const {
    return std::abs(x) <= absolute + relative * std::abs(scale);
  }
  bool close(const Mat& a, const Mat& b) const {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return value_zero((a - b).norm(), std::max(a.norm(), b.norm()));
  }
  bool matrix_zero(const Mat& a, double scale = 1.0) const { return value_zero(a.norm(), scale); }
  // Singular-value cutoff for rank decisions on a matrix with largest singular value sigma_max.
  double singular_cutoff(double sigma_max) const { return absolute + relative * sigma_max; }
};

namespace linalg {

Mat dagger(const Mat& a);

/// Kronecker product with the convention
/// (A (x) B)[i*rows_B + k, j*cols_B + l] = A[i,j] * B[k,l].
Mat tensor(const Mat& a, const Mat& b);

Mat identity(Eigen::Index n);

struct HermitianEig {
  std::vector<double> eigenvalues;  // descending
  Mat eigenvectors;                 // orthonormal columns, canonical phases
};

/// Spectral decomposition of a Hermitian matrix. Eigenvalues descending; ties
/// broken by lexicographic order of the phase-canonicalized eigenvectors.
/// Throws NotHermitian when ||A - A^dag|| exceeds tolerance.
HermitianEig eig_hermitian(const Mat& a, const Tolerance& tol = {});

struct Svd {
  Mat u;
  std::vector<double> singular_values;  // descending
  Mat v;                                // A = U diag(S) V^dag
};

Svd svd(const Mat& a);

/// Orthonormal basis of {x : ||Lx|| <= cutoff}; may be empty (0 columns).
Mat null_space(const Mat& l, const Tolerance& tol = {});

Eigen::Index rank(const Mat& a, const Tolerance& tol = {});

/// Modified Gram-Schmidt; vectors that fall below tolerance after projection
/// are dropped.
std::vector<Vec> gram_schmidt(const std::vector<Vec>& vectors, const Tolerance& tol = {});

/// Basis of the commutant {X : XA_i = A_iX for all i}, computed as the null
/// space of the stacked linear maps X -> XA_i - A_iX.
std::vector<Mat> commutant_basis(const std::vector<Mat>& ops, const Tolerance& tol = {});

/// Rotates v so that its first entry of significant magnitude is real positive.
Vec canonical_phase(const Vec& v);

/// Common orthonormal eigenbasis of a commuting Hermitian family.  Tries
/// random real linear combinations (re-randomizing when the spectrum is
/// degenerate), then falls back to sequential refinement of eigenspaces.
/// Inputs are trusted to commute; callers validate.
Mat joint_eigenbasis_hermitian(const std::vector<Mat>& family, const Tolerance& tol = {},
                               unsigned seed = 17);

void check_finite(const Mat& a, const char* what);

}  // namespace linalg
}  // namespace locckit
