#pragma once

#include <utility>
#include <vector>

#include "locckit/channels.hpp"
#include "locckit/linalg.hpp"

namespace locckit::qec {

struct CodeSpace {
  Eigen::Index ambient_dim = 0;
  std::vector<Vec> basis;  // orthonormal
  Mat projector;           // P = sum_i |b_i><b_i|
};

CodeSpace make_code_space(const std::vector<Vec>& basis, const Tolerance& tol = {});

struct KlReport {
  bool correctable = false;
  Mat lambda;            // lambda_ij = Tr(P A_i^dag A_j P)/Tr(P)
  double residual = 0.0; // max_ij ||P A_i^dag A_j P - lambda_ij P||_F
};

/// Knill-Laflamme test: the code is correctable iff every compression
/// P A_i^dag A_j P is the scalar lambda_ij times P.
KlReport kl_check(const CodeSpace& code, const channels::KrausChannel& noise,
                  const Tolerance& tol = {});

struct SetCheckReport {
  bool correctable = false;
  std::pair<size_t, size_t> worst_pair{0, 0};
  double worst_overlap = 0.0;
};

/// A set of states is individually correctable iff all pairwise output
/// overlaps Tr(E(rho_k) E(rho_l)) vanish.
SetCheckReport correctable_set_check(const std::vector<Mat>& states,
                                     const channels::KrausChannel& noise,
                                     const Tolerance& tol = {});

/// Compressions P A_j^dag A_i P written in the code basis (d x d matrices).
std::vector<Mat> compressions(const CodeSpace& code, const channels::KrausChannel& noise);

struct CommuteReport {
  bool commuting = false;
  double worst_commutator = 0.0;
};

CommuteReport commuting_family_check(const CodeSpace& code, const channels::KrausChannel& noise,
                                     const Tolerance& tol = {});

/// Orthonormal basis in which every member of a commuting normal family is
/// diagonal.  Throws NotCommuting / NotNormal when the preconditions fail.
Mat simultaneous_eigenbasis(const std::vector<Mat>& family, const Tolerance& tol = {},
                            unsigned seed = 17);

/// True iff every P A_k^dag A_l P has vanishing cross-blocks between the
/// mutually orthogonal subspaces of the decomposition.
bool block_structure_check(const std::vector<CodeSpace>& decomposition,
                           const channels::KrausChannel& noise, const Tolerance& tol = {});

}  // namespace locckit::qec
