#pragma once

#include <optional>
#include <vector>

#include "locckit/linalg.hpp"

namespace locckit::bipartite {

/// Pure state on C^a (x) C^b together with its operator form B (b x a) under
/// |phi> = (I (x) B)|Phi>, i.e. vector[i*b + j] = B(j, i)/sqrt(a).
struct BipartiteState {
  Eigen::Index dim_a = 0;
  Eigen::Index dim_b = 0;
  Vec vector;
  Mat op_form;
};

struct StateSet {
  std::vector<BipartiteState> states;
  bool orthonormal = false;
};

/// (1/sqrt(a)) sum_i |ii>, with op_form = I_a.
BipartiteState max_entangled(Eigen::Index a);

/// Builds the state (I (x) B)|Phi> from a b x a operator with Tr(B^dag B) = a.
BipartiteState from_operator(const Mat& b, Eigen::Index dim_a, Eigen::Index dim_b,
                             const Tolerance& tol = {});

BipartiteState from_vector(const Vec& v, Eigen::Index dim_a, Eigen::Index dim_b,
                           const Tolerance& tol = {});

Mat to_operator(const BipartiteState& s);

StateSet make_state_set(const std::vector<BipartiteState>& states, const Tolerance& tol = {});

StateSet state_set_from_operators(const std::vector<Mat>& ops, Eigen::Index dim_a,
                                  Eigen::Index dim_b, const Tolerance& tol = {});

bool is_maximally_entangled(const BipartiteState& s, const Tolerance& tol = {});

struct Schmidt {
  std::vector<double> coefficients;  // descending, >= 0
  Mat a_vectors;                     // columns
  Mat b_vectors;                     // columns; s = sum_k c_k |u_k>|v_k>
};

Schmidt schmidt(const BipartiteState& s);

Eigen::Index schmidt_rank(const BipartiteState& s, const Tolerance& tol = {});

enum class System { A = 0, B = 1 };

/// Traces out the named system of an (a*b) x (a*b) operator.
Mat partial_trace(const Mat& rho, Eigen::Index dim_a, Eigen::Index dim_b, System traced_out);

/// Transposes the indices of the named system.
Mat partial_transpose(const Mat& rho, Eigen::Index dim_a, Eigen::Index dim_b, System which);

struct SimultaneousSchmidt {
  Mat u;
  Mat v;
  std::vector<Vec> diagonals;  // B_k = U diag(d_k) V
};

/// Looks for a unitary pair (U, V) with B_k = U D_k V for all k, D_k diagonal.
/// Absence is a value, not an error.  Square operators only.
std::optional<SimultaneousSchmidt> simultaneous_schmidt_test(const std::vector<Mat>& ops,
                                                             const Tolerance& tol = {});

}  // namespace locckit::bipartite
