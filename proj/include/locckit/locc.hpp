#pragma once

#include <optional>
#include <string>
#include <vector>

#include "locckit/bipartite.hpp"
#include "locckit/opalg.hpp"
#include "locckit/qec.hpp"

namespace locckit::locc {

enum class Status { Distinguishable, NotDistinguishable, Inconclusive };

/// One-way protocol: Alice measures in `alice_basis`; given outcome x, Bob
/// measures in `bob_bases[x]`, whose i-th vector identifies state i (zero
/// vectors mark states that never produce outcome x).
struct Protocol {
  std::vector<Vec> alice_basis;
  std::vector<std::vector<Vec>> bob_bases;
};

struct Verdict {
  Status status = Status::Inconclusive;
  std::optional<Protocol> protocol;
  std::optional<opalg::AlgebraStructure> structure;
  std::optional<Vec> separating_vector;
  std::optional<Eigen::Index> schmidt_rank_certificate;
  double residual = 0.0;
  std::string diagnostics;
};

/// Max misidentification overlap of a protocol on a state set: Bob's
/// conditional (unnormalized) states are B_i |conj(phi_x)>.  With Bob bases
/// given, the overlap |<beta_{x,i}, B_k conj(phi_x)>| for i != k; without,
/// the pairwise overlaps of the conditional states.
double verify_protocol(const bipartite::StateSet& s, const std::vector<Vec>& alice_basis,
                       const std::vector<std::vector<Vec>>& bob_bases = {});

double verify_protocol(const bipartite::StateSet& s, const Protocol& protocol);

/// Decides one-way distinguishability of an orthonormal set via the operator
/// system span{B_i^dag B_j, I}: when it is multiplicatively closed, the set is
/// distinguishable iff the algebra has a separating vector.  Returns
/// Inconclusive (with the closure residual) when the span is not closed.
Verdict oneway_algebra_test(const bipartite::StateSet& s, const Tolerance& tol = {},
                            unsigned seed = 29);

/// tau -> (1/d) sum_{ij} |i><j| Tr(tau^T B_i^dag B_j), assembled as a matrix
/// on row-major vectorizations.  Equals the compression of tau (x) I to the
/// code in its state basis.
struct PsiMap {
  Eigen::Index dim_code = 0;
  Eigen::Index dim_alice = 0;
  Mat matrix;  // d^2 x a^2
  bool unital = false;

  Mat apply(const Mat& tau) const;
};

PsiMap build_psi_map(const std::vector<Mat>& ops, const Tolerance& tol = {});

struct Basis3d {
  std::vector<Vec> alice_basis;        // eigenvectors of the kernel element
  std::vector<Vec> code_coefficients;  // |Phi'_k> = sum_i c^k_i |Phi_i>
  Mat kernel_element;
  Protocol protocol;
  double overlap = 0.0;
};

/// Constructive basis finder for three orthonormal states on C^3 (x) C^n:
/// when span{B_i^dag B_j} is a strict subspace of M_3, a kernel element M of
/// the Psi map yields an Alice basis (its eigenvectors) and a distinguishable
/// code basis (the common eigenbasis of the commuting compressions).  When the
/// kernel has dimension above one the basis depends on the chosen element;
/// `preferred_kernel` pins that choice (it must lie in the kernel).
std::optional<Basis3d> find_distinguishable_basis_3d(
    const std::vector<Mat>& ops, const Tolerance& tol = {}, unsigned seed = 31,
    const std::optional<Mat>& preferred_kernel = std::nullopt);

/// No basis of the orthogonal complement of phi is one-way distinguishable
/// when the Schmidt rank of phi exceeds two.
Verdict schmidt_rank_obstruction(const bipartite::BipartiteState& phi, const Tolerance& tol = {});

/// Minimum over the list of the symmetric/antisymmetric cross-block norm
/// ||Pi_s (sigma (x) I) Pi_a + h.c.||_F; rank-one states only.
double sym_antisym_obstruction(Eigen::Index d, const std::vector<Mat>& sigma_list,
                               const Tolerance& tol = {});

struct CommuteTestReport {
  bool commuting = false;
  double worst_commutator = 0.0;
};

/// Necessary condition for a distinguishable basis: the compressions
/// {P (phi_j phi_j^dag (x) I) P} must commute.
CommuteTestReport necessary_commute_test(const qec::CodeSpace& code,
                                         const std::vector<Vec>& alice_basis,
                                         const Tolerance& tol = {});

struct KingResult {
  std::optional<std::pair<Vec, Vec>> witness;  // orthogonal pair in C^3
  double best_commutator = 0.0;
};

/// Search harness (not a decision procedure) for an orthonormal pair on C^3
/// whose compressions commute on a 3-dimensional code in C^3 (x) C^n.
KingResult king_search(const qec::CodeSpace& code, int attempts = 20, unsigned seed = 37,
                       const Tolerance& tol = {});

}  // namespace locckit::locc
