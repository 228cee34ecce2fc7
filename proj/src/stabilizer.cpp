#include "locckit/stabilizer.hpp"

#include <bit>
#include <sstream>

namespace locckit::stabilizer {

namespace {

void check_qubits(const PauliOperator& p, const PauliOperator& q) {
  if (p.n != q.n) throw QubitCountMismatch("pauli arithmetic: operators on different registers");
}

int popcount(std::uint64_t v) { return std::popcount(v); }

}  // namespace

PauliOperator pauli_identity(int n) {
  if (n < 1 || n > 63) throw InvalidParams("pauli_identity: qubit count out of range");
  return {n, 0, 0, 0};
}

PauliOperator pauli_x(int n, int j) {
  if (j < 1 || j > n) throw InvalidParams("pauli_x: qubit index out of range");
  PauliOperator p = pauli_identity(n);
  p.x_bits = std::uint64_t(1) << (n - j);
  return p;
}

PauliOperator pauli_z(int n, int j) {
  if (j < 1 || j > n) throw InvalidParams("pauli_z: qubit index out of range");
  PauliOperator p = pauli_identity(n);
  p.z_bits = std::uint64_t(1) << (n - j);
  return p;
}

PauliOperator pauli_mul(const PauliOperator& p, const PauliOperator& q) {
  check_qubits(p, q);
  // Within each qubit, X^x Z^z X^x' Z^z' = (-1)^{z x'} X^{x+x'} Z^{z+z'}.
  PauliOperator out;
  out.n = p.n;
  out.phase_exp = (p.phase_exp + q.phase_exp + 2 * popcount(p.z_bits & q.x_bits)) % 4;
  out.x_bits = p.x_bits ^ q.x_bits;
  out.z_bits = p.z_bits ^ q.z_bits;
  return out;
}

bool pauli_commutes(const PauliOperator& p, const PauliOperator& q) {
  check_qubits(p, q);
  return ((popcount(p.x_bits & q.z_bits) + popcount(p.z_bits & q.x_bits)) % 2) == 0;
}

PauliOperator pauli_adjoint(const PauliOperator& p) {
  // (i^a X^x Z^z)^dag = i^{-a} (-1)^{x.z} X^x Z^z.
  PauliOperator out = p;
  out.phase_exp = ((4 - p.phase_exp) + 2 * popcount(p.x_bits & p.z_bits)) % 4;
  return out;
}

PauliOperator hermitian_representative(const PauliOperator& p) {
  PauliOperator out = p;
  out.phase_exp = popcount(p.x_bits & p.z_bits) % 2;
  return out;
}

Mat to_matrix(const PauliOperator& p) {
  static const Mat x = (Mat(2, 2) << 0, 1, 1, 0).finished();
  static const Mat z = (Mat(2, 2) << 1, 0, 0, -1).finished();
  Mat out = Mat::Identity(1, 1);
  for (int j = 1; j <= p.n; ++j) {
    std::uint64_t mask = std::uint64_t(1) << (p.n - j);
    Mat factor = Mat::Identity(2, 2);
    if (p.x_bits & mask) factor = x;
    if (p.z_bits & mask) factor = (p.x_bits & mask) ? Mat(x * z) : z;
    out = linalg::tensor(out, factor);
  }
  Scalar phase(1, 0);
  switch (p.phase_exp % 4) {
    case 1: phase = Scalar(0, 1); break;
    case 2: phase = Scalar(-1, 0); break;
    case 3: phase = Scalar(0, -1); break;
    default: break;
  }
  return phase * out;
}

std::vector<PauliOperator> logical_pauli_set(int n, int k) {
  if (k < 0 || k > n || n < 1) throw InvalidParams("logical_pauli_set: need 0 <= k <= n");
  std::vector<PauliOperator> out;
  out.reserve(std::size_t(1) << (2 * k));
  for (std::uint64_t x = 0; x < (std::uint64_t(1) << k); ++x)
    for (std::uint64_t z = 0; z < (std::uint64_t(1) << k); ++z) {
      PauliOperator p;
      p.n = n;
      p.x_bits = x << (n - k);
      p.z_bits = z << (n - k);
      out.push_back(hermitian_representative(p));
    }
  return out;
}

StabilizerCode canonical_code(int n, int k) {
  if (k < 0 || k > n || n < 1) throw InvalidParams("canonical_code: need 0 <= k <= n");
  StabilizerCode code;
  code.n = n;
  code.k = k;
  for (int j = k + 1; j <= n; ++j) code.stabilizer_gens.push_back(pauli_z(n, j));
  for (int j = 1; j <= k; ++j) code.logical_gens.push_back(pauli_x(n, j));
  for (int j = 1; j <= k; ++j) code.logical_gens.push_back(pauli_z(n, j));
  const Eigen::Index dim = Eigen::Index(1) << n;
  for (std::uint64_t i = 0; i < (std::uint64_t(1) << k); ++i) {
    // |i_1..i_k 0..0>, qubit 1 most significant.
    Vec v = Vec::Zero(dim);
    v(static_cast<Eigen::Index>(i << (n - k))) = 1.0;
    code.basis.push_back(v);
  }
  return code;
}

bipartite::StateSet states_from_paulis(const std::vector<PauliOperator>& paulis,
                                       const Tolerance& tol) {
  if (paulis.empty()) throw InvalidParams("states_from_paulis: empty list");
  std::vector<Mat> ops;
  ops.reserve(paulis.size());
  for (const PauliOperator& p : paulis) ops.push_back(to_matrix(p));
  const Eigen::Index dim = ops.front().rows();
  return bipartite::state_set_from_operators(ops, dim, dim, tol);
}

StabformReport stabform_distinguishability(int n, int k, const Tolerance& tol, unsigned seed) {
  if (k < 1 || k > n || n > 5)
    throw InvalidParams("stabform_distinguishability: need 1 <= k <= n <= 5");
  StabformReport report;
  report.analytic_distinguishable = (2 * k <= n);

  bipartite::StateSet states = states_from_paulis(logical_pauli_set(n, k), tol);
  report.verdict = locc::oneway_algebra_test(states, tol, seed);
  if (!report.verdict.structure)
    throw InconsistentVerdict("stabform_distinguishability: pipeline returned no structure");
  report.structure = *report.verdict.structure;
  report.s0_dim = report.structure.algebra_dim;

  bool pipeline_distinguishable = report.verdict.status == locc::Status::Distinguishable;
  if (pipeline_distinguishable != report.analytic_distinguishable) {
    std::ostringstream msg;
    msg << "stabform_distinguishability(" << n << "," << k << "): analytic verdict "
        << (report.analytic_distinguishable ? "distinguishable" : "not distinguishable")
        << " disagrees with the operator-algebra pipeline";
    throw InconsistentVerdict(msg.str());
  }
  // The canonical structure is a single M_{2^k} (x) I_{2^{n-k}} block.
  const Eigen::Index m = Eigen::Index(1) << k;
  const Eigen::Index mult = Eigen::Index(1) << (n - k);
  if (report.structure.blocks.size() != 1 || report.structure.blocks[0].first != m ||
      report.structure.blocks[0].second != mult) {
    std::ostringstream msg;
    msg << "stabform_distinguishability(" << n << "," << k
        << "): recovered structure is not {(2^k, 2^{n-k})}";
    throw InconsistentVerdict(msg.str());
  }
  return report;
}

}  // namespace locckit::stabilizer
