#include "spinchem/taper.hpp"
#include <limits>

#include <algorithm>
#include <cmath>

namespace spinchem::taper {

using pauli::OperatorSum;
using pauli::PauliTerm;

namespace {

constexpr double kSqrtHalf = 0.70710678118654752440;

OperatorSum single_term(unsigned n, const PauliTerm& t, double coeff = 1.0) {
  OperatorSum op(n);
  op.add(t, coeff);
  return op;
}

// Image of a canonical Pauli under the Clifford list; must stay a single
// signed Pauli.
std::pair<PauliTerm, int> conjugate_through(const PauliTerm& g, unsigned n,
                                            const std::vector<OperatorSum>& cliffords) {
  OperatorSum cur = single_term(n, g);
  for (const auto& u : cliffords) cur = pauli::conjugated(cur, u);
  if (cur.size() != 1)
    throw std::logic_error("clifford image of a generator is not a single Pauli");
  auto [key, c] = *cur.terms().begin();
  int sign = c.real() > 0 ? 1 : -1;
  if (std::abs(c - pauli::cplx(sign, 0)) > 1e-9)
    throw std::logic_error("clifford image has a non-unit coefficient");
  return {PauliTerm{key.first, key.second, 0}, sign};
}

}  // namespace

SymmetrySet build_symmetry_set(const OperatorSum& h, std::vector<PauliTerm> generators) {
  unsigned n = h.n_qubits();
  for (std::size_t i = 0; i < generators.size(); ++i) {
    generators[i].phase_exp = 0;
    for (const auto& [key, c] : h.terms()) {
      PauliTerm t{key.first, key.second, 0};
      if (!generators[i].commutes_with(t))
        throw std::invalid_argument("generator does not commute with the Hamiltonian");
    }
    for (std::size_t j = 0; j < i; ++j)
      if (!generators[i].commutes_with(generators[j]))
        throw std::invalid_argument("generators do not mutually commute");
  }

  SymmetrySet s;
  s.n_qubits = n;
  s.generators = generators;  // original frame; may be adjusted by products below
  std::uint64_t used = 0;

  for (std::size_t i = 0; i < s.generators.size(); ++i) {
    auto [img, sign] = conjugate_through(s.generators[i], n, s.cliffords);

    if ((img.z & ~used) == 0) {
      // Pure-X image. Clear x-bits sitting on finished targets by absorbing
      // those generators (a product of symmetries is a symmetry), then turn
      // one X into a Z with a basis change.
      for (std::size_t j = 0; j < i; ++j) {
        if ((img.x >> s.target_qubits[j]) & 1) {
          PauliTerm merged{s.generators[i].x ^ s.generators[j].x,
                           s.generators[i].z ^ s.generators[j].z, 0};
          s.generators[i] = merged;
          std::tie(img, sign) = conjugate_through(merged, n, s.cliffords);
        }
      }
      if (img.z == 0) {
        std::uint64_t free_x = img.x & ~used;
        if (free_x == 0) throw std::logic_error("generator set is not independent");
        unsigned q = static_cast<unsigned>(__builtin_ctzll(free_x));
        OperatorSum basis_change(n);
        basis_change.add(PauliTerm::single('X', q), kSqrtHalf);
        basis_change.add(PauliTerm::single('Z', q), kSqrtHalf);
        s.cliffords.push_back(std::move(basis_change));
        std::tie(img, sign) = conjugate_through(s.generators[i], n, s.cliffords);
      }
    }

    std::uint64_t zs = img.z & ~used;
    unsigned q = static_cast<unsigned>(__builtin_ctzll(zs));
    PauliTerm xq = PauliTerm::single('X', q);
    if (img.x == xq.x && img.z == 0) {
      // already a single X; nothing to rotate
      s.image_signs.push_back(sign);
    } else {
      OperatorSum u(n);
      u.add(xq, kSqrtHalf);
      u.add(img, sign * kSqrtHalf);  // signed image is the Hermitian involution
      s.cliffords.push_back(std::move(u));
      s.image_signs.push_back(1);
    }
    s.target_qubits.push_back(q);
    used |= std::uint64_t{1} << q;

    // Later generators may carry an X on this target; absorb it.
    for (std::size_t j = i + 1; j < s.generators.size(); ++j) {
      auto [imgj, signj] = conjugate_through(s.generators[j], n, s.cliffords);
      (void)signj;
      if ((imgj.z >> q) & 1) throw std::logic_error("commuting generator has Z on a target");
      if ((imgj.x >> q) & 1)
        s.generators[j] = PauliTerm{s.generators[j].x ^ s.generators[i].x,
                                    s.generators[j].z ^ s.generators[i].z, 0};
    }
  }

  // final sanity: each generator lands exactly on its signed X
  for (std::size_t i = 0; i < s.generators.size(); ++i) {
    auto [img, sign] = conjugate_through(s.generators[i], n, s.cliffords);
    PauliTerm xq = PauliTerm::single('X', s.target_qubits[i]);
    if (img.x != xq.x || img.z != 0 || sign != s.image_signs[i])
      throw std::logic_error("clifford sequence failed to normalize a generator");
  }
  return s;
}

SymmetrySet find_symmetries(const OperatorSum& h) {
  unsigned n = h.n_qubits();
  std::vector<std::uint64_t> rows;
  for (const auto& [key, c] : h.terms()) {
    if (key.first == 0 && key.second == 0) continue;
    rows.push_back(key.second | (key.first << n));  // (z | x): symplectic pairing
  }
  std::vector<std::uint64_t> basis = gf2::kernel_basis(rows, 2 * n);

  std::uint64_t mask = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::vector<PauliTerm> candidates;
  for (std::uint64_t v : basis) {
    PauliTerm t{v & mask, (v >> n) & mask, 0};
    if (!t.is_identity()) candidates.push_back(t);
  }
  std::sort(candidates.begin(), candidates.end(), [](const PauliTerm& a, const PauliTerm& b) {
    bool za = a.x == 0, zb = b.x == 0;
    if (za != zb) return za;  // Z-type first
    if (a.weight() != b.weight()) return a.weight() < b.weight();
    return std::tie(a.z, a.x) < std::tie(b.z, b.x);
  });

  std::vector<PauliTerm> chosen;
  for (const PauliTerm& c : candidates) {
    bool ok = true;
    for (const PauliTerm& g : chosen)
      if (!c.commutes_with(g)) {
        ok = false;
        break;
      }
    if (ok) chosen.push_back(c);
  }
  return build_symmetry_set(h, std::move(chosen));
}

std::vector<int> select_sector(const SymmetrySet& s, std::uint64_t reference_state) {
  std::vector<int> out;
  out.reserve(s.size());
  for (const PauliTerm& g : s.generators) {
    if (g.x != 0)
      throw SectorAmbiguous("generator " + g.to_string() +
                            " has zero expectation on a computational-basis reference");
    out.push_back((__builtin_popcountll(g.z & reference_state) & 1) ? -1 : 1);
  }
  return out;
}

OperatorSum taper(const OperatorSum& h, const SymmetrySet& s,
                  const std::vector<int>& assignments) {
  if (assignments.size() != s.size())
    throw std::invalid_argument("assignment list length does not match generator count");
  if (h.n_qubits() != s.n_qubits)
    throw std::invalid_argument("Hamiltonian does not match symmetry set qubit count");

  OperatorSum work = h;
  for (const auto& u : s.cliffords) work = pauli::conjugated(work, u);

  unsigned n = s.n_qubits;
  std::uint64_t removed = 0;
  for (unsigned q : s.target_qubits) removed |= std::uint64_t{1} << q;

  // compact index map over the surviving qubits
  std::vector<unsigned> new_index(n, 0);
  unsigned next = 0;
  for (unsigned q = 0; q < n; ++q)
    if (!((removed >> q) & 1)) new_index[q] = next++;

  OperatorSum out(n - static_cast<unsigned>(s.size()));
  for (const auto& [key, c] : work.terms()) {
    auto [x, z] = key;
    if (z & removed)
      throw std::logic_error("tapered term has Z support on a symmetry target");
    pauli::cplx coeff = c;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if ((x >> s.target_qubits[i]) & 1)
        coeff *= static_cast<double>(s.image_signs[i] * assignments[i]);
    }
    std::uint64_t nx = 0, nz = 0;
    for (unsigned q = 0; q < n; ++q) {
      if ((removed >> q) & 1) continue;
      if ((x >> q) & 1) nx |= std::uint64_t{1} << new_index[q];
      if ((z >> q) & 1) nz |= std::uint64_t{1} << new_index[q];
    }
    out.add(PauliTerm{nx, nz, 0}, coeff);
  }
  out.prune();
  return out;
}

SectorScan scan_sectors(const OperatorSum& h, const SymmetrySet& s) {
  SectorScan best;
  best.best_energy = std::numeric_limits<double>::infinity();
  std::size_t k = s.size();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
    std::vector<int> assign(k);
    for (std::size_t i = 0; i < k; ++i) assign[i] = ((bits >> i) & 1) ? -1 : 1;
    double e = pauli::ground_energy_exact(taper(h, s, assign));
    if (e < best.best_energy) {
      best.best_energy = e;
      best.best_assignments = assign;
    }
  }
  return best;
}

}  // namespace spinchem::taper
