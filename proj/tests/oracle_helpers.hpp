#pragma once

// Independent reference implementations used as test oracles. These stay
// deliberately naive and share no code with the library paths they check.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "spinchem/pauli.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline Eigen::Matrix2cd single_qubit_matrix(char op) {
  Eigen::Matrix2cd m;
  switch (op) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("bad pauli letter");
  }
  return m;
}

// Kronecker build-up with qubit 0 as the least significant index bit:
// M = m_{n-1} (x) ... (x) m_0.
inline Eigen::MatrixXcd kron_pauli(const std::string& letters_q0_first) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
  for (char op : letters_q0_first) {
    Eigen::Matrix2cd m = single_qubit_matrix(op);
    Eigen::MatrixXcd next(acc.rows() * 2, acc.cols() * 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) next.block(i * acc.rows(), j * acc.cols(), acc.rows(), acc.cols()) = m(i, j) * acc;
    acc = next;
  }
  return acc;
}

inline std::string letters_of(const spinchem::pauli::PauliTerm& t, unsigned n_qubits) {
  std::string s;
  for (unsigned q = 0; q < n_qubits; ++q) {
    bool xb = (t.x >> q) & 1, zb = (t.z >> q) & 1;
    s += xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
  }
  return s;
}

// Dense matrix of an OperatorSum via the naive Kronecker route.
inline Eigen::MatrixXcd dense_via_kron(const spinchem::pauli::OperatorSum& h) {
  std::size_t dim = std::size_t{1} << h.n_qubits();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [key, c] : h.terms()) {
    spinchem::pauli::PauliTerm t{key.first, key.second, 0};
    m += c * kron_pauli(letters_of(t, h.n_qubits()));
  }
  return m;
}

inline spinchem::pauli::PauliTerm random_pauli(std::mt19937_64& rng, unsigned n_qubits) {
  std::uniform_int_distribution<std::uint64_t> bits(0, (std::uint64_t{1} << n_qubits) - 1);
  return {bits(rng), bits(rng), 0};
}

}  // namespace oracle
