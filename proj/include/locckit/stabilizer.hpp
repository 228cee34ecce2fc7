#pragma once

#include <cstdint>
#include <vector>

#include "locckit/bipartite.hpp"
#include "locckit/linalg.hpp"
#include "locckit/locc.hpp"

namespace locckit::stabilizer {

/// n-qubit Pauli in symplectic form: i^phase_exp * prod_j X_j^{x_j} Z_j^{z_j},
/// with qubit 1 the most significant tensor factor.
struct PauliOperator {
  int n = 0;
  int phase_exp = 0;  // power of i, mod 4
  std::uint64_t x_bits = 0;
  std::uint64_t z_bits = 0;

  bool operator==(const PauliOperator&) const = default;
};

PauliOperator pauli_identity(int n);

/// Single-qubit X/Z on qubit j (1-based) of an n-qubit register.
PauliOperator pauli_x(int n, int j);
PauliOperator pauli_z(int n, int j);

PauliOperator pauli_mul(const PauliOperator& p, const PauliOperator& q);

bool pauli_commutes(const PauliOperator& p, const PauliOperator& q);

PauliOperator pauli_adjoint(const PauliOperator& p);

/// Phase chosen so the representative is Hermitian with +1 or +i coefficient
/// on the X^x Z^z word.
PauliOperator hermitian_representative(const PauliOperator& p);

Mat to_matrix(const PauliOperator& p);

/// The 4^k coset representatives of <X_j, Z_j : j <= k>/{phases}, all
/// Hermitian with canonical phase.
std::vector<PauliOperator> logical_pauli_set(int n, int k);

struct StabilizerCode {
  int n = 0;
  int k = 0;
  std::vector<PauliOperator> stabilizer_gens;
  std::vector<PauliOperator> logical_gens;  // X-bar_1..k then Z-bar_1..k
  std::vector<Vec> basis;                   // 2^k computational code vectors
};

/// Stabilizers {Z_{k+1},...,Z_n}, logicals {X_j, Z_j : j <= k}, code basis
/// span{|i_1..i_k 0..0>}.
StabilizerCode canonical_code(int n, int k);

/// S = {(I (x) to_matrix(B_i)) |Phi>} on C^{2^n} (x) C^{2^n}.
bipartite::StateSet states_from_paulis(const std::vector<PauliOperator>& paulis,
                                       const Tolerance& tol = {});

struct StabformReport {
  locc::Verdict verdict;
  bool analytic_distinguishable = false;  // k <= n/2
  opalg::AlgebraStructure structure;
  Eigen::Index s0_dim = 0;
};

/// The 4^k logical-Pauli states are one-way distinguishable iff k <= n/2.
/// Runs both the analytic test and the operator-algebra pipeline and insists
/// they agree.
StabformReport stabform_distinguishability(int n, int k, const Tolerance& tol = {},
                                           unsigned seed = 41);

}  // namespace locckit::stabilizer
