#include <doctest.h>

#include <random>
#include <sstream>

#include "oracle_helpers.hpp"
#include "spinchem/pauli.hpp"

using namespace spinchem;
using pauli::cplx;
using pauli::OperatorSum;
using pauli::PauliTerm;

namespace {
PauliTerm P(const char* spec) {
  PauliTerm t;
  std::istringstream in(spec);
  std::string tok;
  while (in >> tok) t = t * PauliTerm::single(tok[0], std::stoul(tok.substr(1)));
  return t;
}
}  // namespace

TEST_CASE("single-qubit Pauli products") {
  PauliTerm x0 = PauliTerm::single('X', 0);
  PauliTerm z0 = PauliTerm::single('Z', 0);
  PauliTerm y0 = PauliTerm::single('Y', 0);

  // X0 * Z0 = -i Y0
  PauliTerm xz = x0 * z0;
  CHECK(xz.x == y0.x);
  CHECK(xz.z == y0.z);
  CHECK(xz.phase() == cplx(0, -1));

  // involution: squares give +I
  for (const PauliTerm& t : {x0, z0, y0, P("X0 Z1"), P("Y0 Y2 Z3")}) {
    PauliTerm sq = t * t;
    CHECK(sq.is_identity());
    CHECK(sq.phase() == cplx(1, 0));
  }
}

TEST_CASE("identity multiplication leaves operators unchanged") {
  OperatorSum h(3);
  h.add(P("X0 Z1"), 0.5);
  h.add(P("Y2"), -1.25);
  h.add(PauliTerm::identity(), 0.75);

  OperatorSum id(3);
  id.add(PauliTerm::identity(), 1.0);

  OperatorSum prod = id * h;
  REQUIRE(prod.size() == h.size());
  for (const auto& [key, c] : h.terms()) {
    CHECK(prod.terms().count(key) == 1);
    CHECK(std::abs(prod.terms().at(key) - c) < 1e-15);
  }
}

TEST_CASE("qubit-count mismatch is rejected") {
  OperatorSum a(2), b(3);
  a.add(P("X0"), 1.0);
  b.add(P("X0"), 1.0);
  CHECK_THROWS_AS(a * b, std::invalid_argument);
}

TEST_CASE("product of random terms matches the dense Kronecker oracle") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 60; ++trial) {
    unsigned n = 1 + trial % 6;
    PauliTerm a = oracle::random_pauli(rng, n);
    PauliTerm b = oracle::random_pauli(rng, n);
    PauliTerm ab = a * b;

    Eigen::MatrixXcd ma = oracle::kron_pauli(oracle::letters_of(a, n));
    Eigen::MatrixXcd mb = oracle::kron_pauli(oracle::letters_of(b, n));
    Eigen::MatrixXcd mab = ab.phase() * oracle::kron_pauli(oracle::letters_of(ab, n));
    CHECK((ma * mb - mab).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("to_dense matches the naive Kronecker construction") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> coeff(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    unsigned n = 1 + trial % 5;
    OperatorSum h(n);
    for (int t = 0; t < 8; ++t) h.add(oracle::random_pauli(rng, n), {coeff(rng), coeff(rng)});
    Eigen::MatrixXcd fast = pauli::to_dense(h);
    Eigen::MatrixXcd slow = oracle::dense_via_kron(h);
    CHECK((fast - slow).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("small dense examples") {
  OperatorSum z0(1);
  z0.add(P("Z0"), 1.0);
  Eigen::MatrixXcd mz = pauli::to_dense(z0);
  CHECK(mz(0, 0) == cplx(1, 0));
  CHECK(mz(1, 1) == cplx(-1, 0));
  CHECK(std::abs(mz(0, 1)) == 0.0);

  OperatorSum halfx(1);
  halfx.add(P("X0"), 0.5);
  Eigen::MatrixXcd mx = pauli::to_dense(halfx);
  CHECK(mx(0, 1) == cplx(0.5, 0));
  CHECK(mx(1, 0) == cplx(0.5, 0));
  CHECK(std::abs(mx(0, 0)) == 0.0);
}

TEST_CASE("ground energies of diagonal operators") {
  OperatorSum z0(1);
  z0.add(P("Z0"), 1.0);
  CHECK(pauli::ground_energy_exact(z0) == doctest::Approx(-1.0).epsilon(1e-12));

  OperatorSum zz(2);
  zz.add(P("Z0"), 1.0);
  zz.add(P("Z1"), 1.0);
  CHECK(pauli::ground_energy_exact(zz) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("dense oracle cap and hermiticity are enforced") {
  OperatorSum big(15);
  big.add(P("Z0"), 1.0);
  CHECK_THROWS_AS(pauli::ground_energy_exact(big), std::invalid_argument);

  OperatorSum nh(1);
  nh.add(P("X0"), cplx(0, 1));
  CHECK_THROWS_AS(pauli::ground_energy_exact(nh), std::invalid_argument);
}

TEST_CASE("diagonal expectation values") {
  OperatorSum z0(1);
  z0.add(P("Z0"), 1.0);
  CHECK(pauli::expectation(z0, 0b0) == doctest::Approx(1.0));
  CHECK(pauli::expectation(z0, 0b1) == doctest::Approx(-1.0));

  OperatorSum x0(1);
  x0.add(P("X0"), 1.0);
  CHECK(pauli::expectation(x0, 0b0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(pauli::expectation(z0, 0b10), std::invalid_argument);
}

TEST_CASE("variational bound: exact ground energy below every basis expectation") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> coeff(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    unsigned n = 2 + trial % 4;
    OperatorSum h(n);
    for (int t = 0; t < 10; ++t) h.add(oracle::random_pauli(rng, n), coeff(rng));
    REQUIRE(h.is_hermitian());
    double e0 = pauli::ground_energy_exact(h);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s)
      CHECK(e0 <= pauli::expectation(h, s) + 1e-9);
  }
}

TEST_CASE("Hermitian sums have self-adjoint dense matrices") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  OperatorSum h(4);
  for (int t = 0; t < 20; ++t) h.add(oracle::random_pauli(rng, 4), coeff(rng));
  Eigen::MatrixXcd m = pauli::to_dense(h);
  CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("coefficients below the prune threshold disappear") {
  OperatorSum h(1);
  h.add(P("Z0"), 1.0);
  h.add(P("Z0"), -1.0 + 1e-14);
  CHECK(h.size() == 0);
}

TEST_CASE("pauli text round trip") {
  std::istringstream in(
      "# two-qubit test operator\n"
      "0.5 X0 Z1\n"
      "\n"
      "-0.25 0.75 Y1\n"
      "1.5\n");
  OperatorSum h = pauli::parse_pauli_text(in);
  CHECK(h.n_qubits() == 2);
  CHECK(h.coefficient(P("X0 Z1")) == cplx(0.5, 0));
  CHECK(h.coefficient(P("Y1")) == cplx(-0.25, 0.75));
  CHECK(h.constant() == cplx(1.5, 0));

  std::ostringstream out;
  pauli::write_pauli_text(out, h);
  std::istringstream back(out.str());
  OperatorSum h2 = pauli::parse_pauli_text(back, 2);
  for (const auto& [key, c] : h.terms()) CHECK(std::abs(h2.terms().at(key) - c) < 1e-15);
}

TEST_CASE("malformed pauli text is rejected") {
  std::istringstream bad1("X0 0.5\n");
  CHECK_THROWS(pauli::parse_pauli_text(bad1));
  std::istringstream bad2("0.5 Q0\n");
  CHECK_THROWS(pauli::parse_pauli_text(bad2));
}

TEST_CASE("conjugation by a GF(2) basis permutation preserves the spectrum") {
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  unsigned n = 4;
  OperatorSum h(n);
  for (int t = 0; t < 12; ++t) h.add(oracle::random_pauli(rng, n), coeff(rng));

  // prefix-xor map
  std::vector<std::uint64_t> rows(n);
  for (unsigned i = 0; i < n; ++i) rows[i] = (std::uint64_t{1} << (i + 1)) - 1;
  gf2::Matrix a(n, rows);
  OperatorSum hc = pauli::conjugated_by_linear_map(h, a);

  // Independent oracle: explicit permutation matrix conjugation.
  std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t v = 0; v < dim; ++v) u(a.apply(v), v) = 1.0;
  Eigen::MatrixXcd expected = u * oracle::dense_via_kron(h) * u.adjoint();
  CHECK((pauli::to_dense(hc) - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("conjugation by a Hermitian unitary sum is exact") {
  // U = (X0 + Z0 Z1)/sqrt(2) maps Z0Z1 to X0.
  OperatorSum u(2);
  u.add(P("X0"), 1.0 / std::sqrt(2.0));
  u.add(P("Z0 Z1"), 1.0 / std::sqrt(2.0));

  OperatorSum g(2);
  g.add(P("Z0 Z1"), 1.0);
  OperatorSum gu = pauli::conjugated(g, u);
  CHECK(gu.size() == 1);
  CHECK(std::abs(gu.coefficient(P("X0")) - cplx(1, 0)) < 1e-12);

  Eigen::MatrixXcd mu = pauli::to_dense(u);
  CHECK((mu * mu - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
}
