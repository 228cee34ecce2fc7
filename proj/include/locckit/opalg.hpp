#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "locckit/linalg.hpp"

namespace locckit::opalg {

/// Hilbert-Schmidt-orthonormal spanning set of a subspace of M_n.
struct OperatorSpan {
  Eigen::Index ambient_dim = 0;
  std::vector<Mat> basis;
  bool contains_identity = false;
  bool star_closed = false;
};

OperatorSpan make_span(const std::vector<Mat>& mats, const Tolerance& tol = {});

/// span{B_i^dag B_j : i != j} together with the identity.
OperatorSpan operator_system_S0(const std::vector<Mat>& ops, const Tolerance& tol = {});

/// span over all pairs (i, j), including i = j; no identity adjoined.
OperatorSpan x_subspace(const std::vector<Mat>& ops, const Tolerance& tol = {});

bool is_multiplicatively_closed(const OperatorSpan& s, const Tolerance& tol = {});

/// Residual of the worst product of basis elements against the span.
double closure_residual(const OperatorSpan& s, const Tolerance& tol = {});

/// Multiply-and-orthonormalize until the dimension stabilizes.  The result is
/// star-closed, multiplicatively closed and contains the input span.
OperatorSpan generated_algebra(const OperatorSpan& s, int max_rounds = 32,
                               const Tolerance& tol = {});

/// Wedderburn data of a *-closed algebra: multiset of (m_k, n_k) block
/// parameters with the algebra unitarily equivalent to ⊕_k M_{m_k} ⊗ I_{n_k}.
struct AlgebraStructure {
  std::vector<std::pair<Eigen::Index, Eigen::Index>> blocks;  // (m_k, n_k), sorted
  Eigen::Index algebra_dim = 0;                               // sum m_k^2
  Eigen::Index support_dim = 0;                               // sum m_k n_k
};

/// Structure plus the change of basis realizing it: columns of `transform`
/// (ambient_dim x support_dim isometry) carry the canonical coordinates, in
/// which every algebra element is block diagonal with blocks A_k (x) I_{n_k},
/// block k occupying the contiguous column range starting at block_offset[k].
struct WedderburnDecomposition {
  AlgebraStructure structure;
  Mat transform;
  std::vector<Eigen::Index> block_offsets;
};

AlgebraStructure wedderburn_structure(const OperatorSpan& alg, const Tolerance& tol = {},
                                      unsigned seed = 23);

WedderburnDecomposition wedderburn_decompose(const OperatorSpan& alg, const Tolerance& tol = {},
                                             unsigned seed = 23);

/// The canonical algebra has a separating vector iff n_k >= m_k for all k.
bool has_separating_vector(const AlgebraStructure& st);

/// Randomized search with rank verification: psi is separating iff the map
/// A -> A psi is injective on the algebra, i.e. the columns {E_p psi} have
/// rank equal to dim(alg).
std::optional<Vec> find_separating_vector(const OperatorSpan& alg, int attempts = 64,
                                          const Tolerance& tol = {}, unsigned seed = 7);

/// Clock-and-shift (generalized Pauli) unitaries X^p Z^q on C^m, ordered
/// p-major; pairwise trace-orthogonal.
std::vector<Mat> weyl_operators(Eigen::Index m);

/// Orthonormal basis of trace vectors for the canonical algebra
/// ⊕_k M_{m_k} (x) I_{n_k}: unit vectors v with <v|A|v> = Tr(A)/r for every
/// algebra element.  Constructible here when all blocks share one shape
/// (m, n) with m dividing n (covers commutative algebras, single blocks with
/// m | n, and equal square blocks); absent otherwise.
std::optional<Mat> trace_vector_basis(
    const std::vector<std::pair<Eigen::Index, Eigen::Index>>& blocks);

/// Unitary U whose conjugation gives every element of the canonical
/// square-block algebra a constant diagonal (each entry Tr/dim).  Only square
/// structures are in scope; mixed square sizes require the general
/// construction and are rejected.
Mat constant_diagonal_unitary(const AlgebraStructure& st);

}  // namespace locckit::opalg
