#include "locckit/stabilizer.hpp"

#include <catch2/catch.hpp>

#include "locckit/random.hpp"
#include "test_helpers.hpp"

using namespace locckit;
using namespace locckit::stabilizer;
using testutil::id;
using testutil::pauli_x;
using testutil::pauli_y;
using testutil::pauli_z;

TEST_CASE("single-qubit Pauli relations", "[stabilizer]") {
  PauliOperator x = pauli_x(1, 1), z = pauli_z(1, 1);
  // X Z = -i Y
  PauliOperator xz = pauli_mul(x, z);
  CHECK((to_matrix(xz) - Mat(Scalar(0, -1) * pauli_y())).norm() < 1e-14);
  // Z X = -X Z
  PauliOperator zx = pauli_mul(z, x);
  CHECK((to_matrix(zx) + to_matrix(xz)).norm() < 1e-14);
  CHECK_FALSE(pauli_commutes(x, z));
}

TEST_CASE("paulis on disjoint qubits commute", "[stabilizer]") {
  CHECK(pauli_commutes(pauli_x(2, 1), pauli_z(2, 2)));
  CHECK((to_matrix(pauli_x(2, 1)) - linalg::tensor(pauli_x(), id(2))).norm() < 1e-14);
  CHECK((to_matrix(pauli_z(2, 2)) - linalg::tensor(id(2), pauli_z())).norm() < 1e-14);
}

TEST_CASE("to_matrix is a homomorphism", "[stabilizer]") {
  const int n = 3;
  rnd::Rng rng(93);
  std::uniform_int_distribution<std::uint64_t> bits(0, (1u << n) - 1);
  std::uniform_int_distribution<int> phase(0, 3);
  for (int t = 0; t < 40; ++t) {
    PauliOperator p{n, phase(rng), bits(rng), bits(rng)};
    PauliOperator q{n, phase(rng), bits(rng), bits(rng)};
    CHECK((to_matrix(pauli_mul(p, q)) - Mat(to_matrix(p) * to_matrix(q))).norm() < 1e-12);
    CHECK((to_matrix(pauli_adjoint(p)) - Mat(to_matrix(p).adjoint())).norm() < 1e-12);
  }
}

TEST_CASE("pauli_commutes matches the matrix commutator exhaustively", "[stabilizer]") {
  const int n = 2;
  for (std::uint64_t xp = 0; xp < 4; ++xp)
    for (std::uint64_t zp = 0; zp < 4; ++zp)
      for (std::uint64_t xq = 0; xq < 4; ++xq)
        for (std::uint64_t zq = 0; zq < 4; ++zq) {
          PauliOperator p{n, 0, xp, zp}, q{n, 0, xq, zq};
          Mat mp = to_matrix(p), mq = to_matrix(q);
          bool matrix_commute = (mp * mq - mq * mp).norm() < 1e-12;
          CHECK(pauli_commutes(p, q) == matrix_commute);
        }
}

TEST_CASE("hermitian representatives square to the identity", "[stabilizer]") {
  for (std::uint64_t x = 0; x < 4; ++x)
    for (std::uint64_t z = 0; z < 4; ++z) {
      PauliOperator p = hermitian_representative({2, 0, x, z});
      Mat m = to_matrix(p);
      CHECK((m - m.adjoint()).norm() < 1e-14);
      CHECK((m * m - id(4)).norm() < 1e-14);
    }
}

TEST_CASE("logical pauli sets", "[stabilizer]") {
  auto one = logical_pauli_set(1, 1);
  REQUIRE(one.size() == 4);
  std::vector<Mat> expect{id(2), pauli_z(), pauli_x(), pauli_y()};
  for (const Mat& e : expect) {
    bool found = false;
    for (const PauliOperator& p : one)
      if ((to_matrix(p) - e).norm() < 1e-14) found = true;
    CHECK(found);
  }

  auto two = logical_pauli_set(2, 1);
  REQUIRE(two.size() == 4);
  for (const PauliOperator& p : two) {
    // acts as identity on qubit 2
    CHECK((p.x_bits & 1) == 0);
    CHECK((p.z_bits & 1) == 0);
  }

  CHECK(logical_pauli_set(3, 2).size() == 16);
}

TEST_CASE("canonical codes", "[stabilizer]") {
  StabilizerCode c21 = canonical_code(2, 1);
  REQUIRE(c21.basis.size() == 2);
  CHECK(c21.basis[0](0) == Scalar(1, 0));  // |00>
  CHECK(c21.basis[1](2) == Scalar(1, 0));  // |10>
  REQUIRE(c21.stabilizer_gens.size() == 1);
  CHECK(c21.stabilizer_gens[0] == pauli_z(2, 2));

  StabilizerCode c11 = canonical_code(1, 1);
  CHECK(c11.basis.size() == 2);
  CHECK(c11.stabilizer_gens.empty());

  StabilizerCode c31 = canonical_code(3, 1);
  REQUIRE(c31.basis.size() == 2);
  CHECK(c31.basis[0](0) == Scalar(1, 0));  // |000>
  CHECK(c31.basis[1](4) == Scalar(1, 0));  // |100>

  // Stabilizers commute; logicals commute with stabilizers; conjugate
  // logical pairs anticommute.
  StabilizerCode c32 = canonical_code(3, 2);
  for (const auto& g1 : c32.stabilizer_gens)
    for (const auto& g2 : c32.stabilizer_gens) CHECK(pauli_commutes(g1, g2));
  for (const auto& l : c32.logical_gens)
    for (const auto& g : c32.stabilizer_gens) CHECK(pauli_commutes(l, g));
  CHECK_FALSE(pauli_commutes(c32.logical_gens[0], c32.logical_gens[2]));  // X1 vs Z1
  CHECK(pauli_commutes(c32.logical_gens[0], c32.logical_gens[3]));        // X1 vs Z2
}

TEST_CASE("states_from_paulis yields orthonormal sets", "[stabilizer]") {
  auto bell = states_from_paulis(logical_pauli_set(1, 1));
  CHECK(bell.orthonormal);
  CHECK(bell.states.size() == 4);

  for (int n = 2; n <= 4; ++n) {
    auto s = states_from_paulis(logical_pauli_set(n, std::min(n, 2)));
    CHECK(s.orthonormal);
  }
}

TEST_CASE("stabform verdicts across small parameters", "[stabilizer]") {
  StabformReport r21 = stabform_distinguishability(2, 1);
  CHECK(r21.verdict.status == locc::Status::Distinguishable);
  CHECK(r21.structure.blocks[0] == std::make_pair<Eigen::Index, Eigen::Index>(2, 2));
  CHECK(r21.s0_dim == 4);

  StabformReport r32 = stabform_distinguishability(3, 2);
  CHECK(r32.verdict.status == locc::Status::NotDistinguishable);
  CHECK(r32.structure.blocks[0] == std::make_pair<Eigen::Index, Eigen::Index>(4, 2));
  CHECK(r32.s0_dim == 16);

  StabformReport r42 = stabform_distinguishability(4, 2);
  CHECK(r42.verdict.status == locc::Status::Distinguishable);
  CHECK(r42.structure.blocks[0] == std::make_pair<Eigen::Index, Eigen::Index>(4, 4));
}

TEST_CASE("stabform protocols verify when k <= n/2", "[stabilizer]") {
  StabformReport r21 = stabform_distinguishability(2, 1);
  REQUIRE(r21.verdict.protocol.has_value());
  auto states = states_from_paulis(logical_pauli_set(2, 1));
  CHECK(locc::verify_protocol(states, *r21.verdict.protocol) <= 1e-10);
}

TEST_CASE("logical span dimension is 4^k", "[stabilizer]") {
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= n; ++k) {
      std::vector<Mat> mats;
      for (const PauliOperator& p : logical_pauli_set(n, k)) mats.push_back(to_matrix(p));
      opalg::OperatorSpan span = opalg::make_span(mats);
      CHECK(span.basis.size() == static_cast<size_t>(1) << (2 * k));
      CHECK(opalg::is_multiplicatively_closed(span));
    }
}

TEST_CASE("state count exceeds ambient dimension beyond the boundary", "[stabilizer]") {
  // For k > n/2, 4^k > 2^n: more maximally entangled states than the
  // one-way bound allows.
  for (int n = 1; n <= 4; ++n)
    for (int k = 1; k <= n; ++k) {
      bool analytic = 2 * k <= n;
      if (!analytic) CHECK((1u << (2 * k)) > (1u << n));
    }
}

TEST_CASE("pauli arithmetic rejects register mismatches", "[stabilizer]") {
  CHECK_THROWS_AS(pauli_mul(pauli_x(2, 1), pauli_x(3, 1)), QubitCountMismatch);
  CHECK_THROWS_AS(logical_pauli_set(2, 3), InvalidParams);
  CHECK_THROWS_AS(stabform_distinguishability(6, 1), InvalidParams);
}
