#include <doctest.h>

#include <random>

#include "oracle_helpers.hpp"
#include "spinchem/fermion.hpp"
#include "spinchem/taper.hpp"
#include "spinchem/xbk.hpp"

using namespace spinchem;
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

// Independent oracle: replica energies straight from the dense matrix,
//   H'(x) = sum_ij S_i S_j <z_i|H|z_j>,   C(x) = sum_ij S_i S_j [z_i == z_j].
std::uint64_t replica_state(const std::vector<int>& spins, unsigned i, unsigned m) {
  std::uint64_t s = 0;
  for (unsigned q = 0; q < m; ++q)
    if (spins[i * m + q] < 0) s |= std::uint64_t{1} << q;
  return s;
}

double oracle_h_prime(const Eigen::MatrixXcd& hd, const std::vector<int>& signs,
                      const std::vector<int>& spins, unsigned m) {
  std::complex<double> total = 0;
  unsigned r = static_cast<unsigned>(signs.size());
  for (unsigned i = 0; i < r; ++i)
    for (unsigned j = 0; j < r; ++j)
      total += double(signs[i] * signs[j]) * hd(replica_state(spins, i, m), replica_state(spins, j, m));
  return total.real();
}

double oracle_c_norm(const std::vector<int>& signs, const std::vector<int>& spins, unsigned m) {
  double total = 0;
  unsigned r = static_cast<unsigned>(signs.size());
  for (unsigned i = 0; i < r; ++i)
    for (unsigned j = 0; j < r; ++j)
      total += signs[i] * signs[j] * (replica_state(spins, i, m) == replica_state(spins, j, m));
  return total;
}

std::vector<int> decode_spins(std::uint32_t bits, unsigned n) {
  std::vector<int> out(n);
  for (unsigned v = 0; v < n; ++v) out[v] = ((bits >> v) & 1) ? 1 : -1;
  return out;
}

}  // namespace

TEST_CASE("single-replica expansion of X vanishes") {
  OperatorSum h(1);
  h.add(P("X0"), 1.0);
  auto sectors = xbk::xbk_expand(h, {.r = 1});
  REQUIRE(sectors.size() == 1);
  CHECK(sectors[0].h_prime.terms().empty());
  CHECK(sectors[0].c_norm.constant() == doctest::Approx(1.0));
}

TEST_CASE("single-replica Z solves in one iteration") {
  OperatorSum h(1);
  h.add(P("Z0"), 1.0);
  auto sectors = xbk::xbk_expand(h, {.r = 1});
  REQUIRE(sectors.size() == 1);
  CHECK(sectors[0].c_norm.constant() == doctest::Approx(1.0));

  xbk::ExactBackend exact;
  xbk::XbkConfig cfg{.r = 1};
  auto solve = xbk::solve_sector(sectors[0], exact, cfg);
  CHECK(solve.valid);
  CHECK(solve.converged);
  CHECK(solve.lambda_prime == doctest::Approx(-1.0));
  CHECK(solve.iterations <= 2);  // one update plus the fixed-point confirmation
}

TEST_CASE("X0 with two replicas: brute force decides the sector values") {
  OperatorSum h(1);
  h.add(P("X0"), 1.0);
  xbk::XbkConfig cfg{.r = 2};
  auto sectors = xbk::xbk_expand(h, cfg);
  REQUIRE(sectors.size() == 2);  // p = 0, 1

  // brute force over the 4 assignments of the two replica bits
  for (auto& sec : sectors) {
    double best = 1e300;
    for (std::uint32_t bits = 0; bits < 4; ++bits) {
      std::vector<int> spins = decode_spins(bits, 2);
      double c = sec.c_norm.evaluate(spins);
      if (c < 0.5) continue;
      best = std::min(best, sec.h_prime.evaluate(spins) / c);
    }
    // the mixed-sign sector reaches the ground energy of X; the uniform
    // sector bottoms out at zero
    if (sec.p == 1)
      CHECK(best == doctest::Approx(-1.0));
    else
      CHECK(best == doctest::Approx(0.0));
  }

  xbk::ExactBackend exact;
  auto result = xbk::ground_energy_xbk(h, cfg, exact);
  CHECK(result.energy == doctest::Approx(-1.0));
  CHECK(result.best_p == 1);
}

TEST_CASE("sector polynomials match the dense replica oracle") {
  std::mt19937_64 rng(8080);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  for (int trial = 0; trial < 8; ++trial) {
    unsigned m = 1 + trial % 3;
    unsigned r = 1 + (trial / 2) % 3;
    OperatorSum h(m);
    for (int t = 0; t < 6; ++t) h.add(oracle::random_pauli(rng, m), coeff(rng));
    REQUIRE(h.is_hermitian());
    Eigen::MatrixXcd hd = pauli::to_dense(h);

    auto sectors = xbk::xbk_expand(h, {.r = r});
    for (const auto& sec : sectors) {
      for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << (r * m)); ++bits) {
        std::vector<int> spins = decode_spins(bits, r * m);
        CHECK(sec.h_prime.evaluate(spins) ==
              doctest::Approx(oracle_h_prime(hd, sec.sign_vector, spins, m)).epsilon(1e-9));
        CHECK(sec.c_norm.evaluate(spins) ==
              doctest::Approx(oracle_c_norm(sec.sign_vector, spins, m)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("C_p is pointwise non-negative") {
  auto f = fermion::parse_fermion_file("data/h2_sto3g.txt");
  auto jw = fermion::jordan_wigner(f);
  auto s = taper::find_symmetries(jw);
  auto tapered = taper::taper(jw, s, taper::select_sector(s, *f.hf_occupation));

  for (unsigned r : {1u, 2u, 3u, 4u}) {
    auto sectors = xbk::xbk_expand(tapered, {.r = r});
    for (const auto& sec : sectors) {
      unsigned n = sec.h_prime.n_vars();
      REQUIRE(r * tapered.n_qubits() == n);
      for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << n); ++bits)
        CHECK(sec.c_norm.evaluate(decode_spins(bits, n)) >= -1e-12);
    }
  }
}

TEST_CASE("r = 1 equals the minimum diagonal expectation") {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  OperatorSum h(3);
  for (int t = 0; t < 10; ++t) h.add(oracle::random_pauli(rng, 3), coeff(rng));
  REQUIRE(h.is_hermitian());

  double min_exp = 1e300;
  for (std::uint64_t b = 0; b < 8; ++b) min_exp = std::min(min_exp, pauli::expectation(h, b));

  xbk::ExactBackend exact;
  auto result = xbk::ground_energy_xbk(h, {.r = 1}, exact);
  CHECK(result.energy == doctest::Approx(min_exp).epsilon(1e-10));
}

TEST_CASE("H2 fixture: XBK energies fall with r toward the exact ground energy") {
  auto f = fermion::parse_fermion_file("data/h2_sto3g.txt");
  auto jw = fermion::jordan_wigner(f);
  auto s = taper::find_symmetries(jw);
  auto tapered = taper::taper(jw, s, taper::select_sector(s, *f.hf_occupation));

  xbk::ExactBackend exact;
  std::vector<double> energies;
  for (unsigned r : {1u, 2u, 3u}) {
    auto result = xbk::ground_energy_xbk(tapered, {.r = r}, exact);
    REQUIRE(result.any_valid);
    CHECK(result.all_converged);
    energies.push_back(result.energy);
    CHECK(result.energy >= *f.e_fci - 1e-9);  // variational from below never happens
  }
  CHECK(energies[0] == doctest::Approx(*f.e_hf).epsilon(1e-9));
  CHECK(energies[1] <= energies[0] + 1e-12);
  CHECK(energies[2] <= energies[1] + 1e-12);
}

TEST_CASE("Dinkelbach iterates decrease monotonically after the first update") {
  auto f = fermion::parse_fermion_file("data/h2_sto3g.txt");
  auto jw = fermion::jordan_wigner(f);
  auto s = taper::find_symmetries(jw);
  auto tapered = taper::taper(jw, s, taper::select_sector(s, *f.hf_occupation));

  xbk::ExactBackend exact;
  xbk::XbkConfig cfg{.r = 6};
  auto sectors = xbk::xbk_expand(tapered, cfg);
  for (auto& sec : sectors) {
    auto solve = xbk::solve_sector(sec, exact, cfg);
    if (!solve.valid) continue;
    for (std::size_t i = 2; i < solve.lambda_trace.size(); ++i)
      CHECK(solve.lambda_trace[i] <= solve.lambda_trace[i - 1] + 1e-12);
  }
}

TEST_CASE("state reconstruction") {
  OperatorSum h(1);
  h.add(P("X0"), 1.0);

  SUBCASE("single replica, single sample") {
    auto sectors = xbk::xbk_expand(h, {.r = 1});
    auto rec = xbk::reconstruct_state({{-1}}, sectors[0]);  // spin -1 = |1>
    CHECK(rec.coefficients.at(1) == doctest::Approx(1.0));
    CHECK(rec.coefficients.size() == 1);
  }

  SUBCASE("two aligned replicas") {
    auto sectors = xbk::xbk_expand(h, {.r = 2});
    auto rec = xbk::reconstruct_state({{1, 1}}, sectors[0]);  // both replicas |0>, signs (+,+)
    CHECK(rec.coefficients.at(0) == doctest::Approx(1.0));
    CHECK(rec.sign_conflicts.empty());
  }

  SUBCASE("mixed-sign optimum of X reconstructs the singlet-like pair") {
    xbk::XbkConfig cfg{.r = 2};
    auto sectors = xbk::xbk_expand(h, cfg);
    xbk::ExactBackend exact;
    auto& sec = sectors[1];  // p = 1
    auto solve = xbk::solve_sector(sec, exact, cfg);
    REQUIRE(solve.valid);
    auto rec = xbk::reconstruct_state({solve.best_assignment}, sec);
    REQUIRE(rec.coefficients.size() == 2);
    double a0 = rec.coefficients.at(0), a1 = rec.coefficients.at(1);
    CHECK(std::abs(a0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(std::abs(a1) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(a0 * a1 < 0);  // opposite signs up to a global flip
  }

  SUBCASE("amplitudes are normalized") {
    auto sectors = xbk::xbk_expand(h, {.r = 2});
    auto rec = xbk::reconstruct_state({{1, -1}, {1, 1}, {-1, -1}}, sectors[0]);
    double norm = 0;
    for (const auto& [state, a] : rec.coefficients) norm += a * a;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));
  }

  CHECK_THROWS_AS(xbk::reconstruct_state({}, xbk::XbkSector{}), std::invalid_argument);
}

TEST_CASE("expansion rejects bad inputs") {
  OperatorSum h(1);
  h.add(P("X0"), pauli::cplx(0, 1));
  CHECK_THROWS_AS(xbk::xbk_expand(h, {.r = 2}), std::invalid_argument);

  OperatorSum ok(1);
  ok.add(P("Z0"), 1.0);
  CHECK_THROWS_AS(xbk::xbk_expand(ok, {.r = 0}), std::invalid_argument);
}

TEST_CASE("sector json dump carries the lambda trace") {
  OperatorSum h(1);
  h.add(P("Z0"), 1.0);
  xbk::XbkConfig cfg{.r = 2};
  auto sectors = xbk::xbk_expand(h, cfg);
  xbk::ExactBackend exact;
  auto solve = xbk::solve_sector(sectors[0], exact, cfg);
  std::string text = xbk::sector_to_json(sectors[0], &solve);
  CHECK(text.find("lambda_trace") != std::string::npos);
  CHECK(text.find("sign_vector") != std::string::npos);
}
