#include "spinchem/xbk.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <complex>
#include <future>
#include <stdexcept>

namespace spinchem::xbk {

namespace {

using pauli::cplx;

struct MaskPoly {  // monomials over up to 64 spin variables
  std::map<std::uint64_t, cplx> terms;

  void scaled_insert(std::uint64_t mask, cplx c) {
    cplx& slot = terms[mask];
    slot += c;
    if (std::abs(slot) < 1e-15) terms.erase(mask);
  }
};

// Per-qubit factor of <s_bra| sigma |s_ket> as monomials over the two virtual
// variables bra (bit q) and ket (bit m + q).
void multiply_factor(MaskPoly& poly, char letter, unsigned q, unsigned m) {
  std::uint64_t bra = std::uint64_t{1} << q;
  std::uint64_t ket = std::uint64_t{1} << (m + q);
  std::vector<std::pair<std::uint64_t, cplx>> factor;
  switch (letter) {
    case 'I': factor = {{0, 0.5}, {bra | ket, 0.5}}; break;
    case 'X': factor = {{0, 0.5}, {bra | ket, -0.5}}; break;
    case 'Z': factor = {{bra, 0.5}, {ket, 0.5}}; break;
    case 'Y': factor = {{ket, cplx(0, 0.5)}, {bra, cplx(0, -0.5)}}; break;
  }
  MaskPoly next;
  for (const auto& [mask, c] : poly.terms)
    for (const auto& [fmask, fc] : factor) next.scaled_insert(mask ^ fmask, c * fc);
  poly = std::move(next);
}

char letter_at(std::uint64_t x, std::uint64_t z, unsigned q) {
  bool xb = (x >> q) & 1, zb = (z >> q) & 1;
  return xb ? (zb ? 'Y' : 'X') : (zb ? 'Z' : 'I');
}

// Remaps a template mask (bra bits 0..m-1, ket bits m..2m-1) onto the sector
// variables of replicas (i, j).
std::uint64_t remap(std::uint64_t mask, unsigned m, unsigned i, unsigned j) {
  std::uint64_t out = 0;
  for (unsigned q = 0; q < m; ++q) {
    if ((mask >> q) & 1) out |= std::uint64_t{1} << (i * m + q);
    if ((mask >> (m + q)) & 1) out |= std::uint64_t{1} << (j * m + q);
  }
  return out;
}

polyopt::Polynomial to_polynomial(const MaskPoly& poly, unsigned n_vars) {
  polyopt::Polynomial out(n_vars, polyopt::Domain::spin);
  for (const auto& [mask, c] : poly.terms) {
    if (std::abs(c.imag()) > 1e-9)
      throw std::logic_error("sector polynomial has an imaginary part");
    if (std::abs(c.real()) < 1e-14) continue;
    std::vector<unsigned> vars;
    for (unsigned v = 0; v < n_vars; ++v)
      if ((mask >> v) & 1) vars.push_back(v);
    out.add_term(std::move(vars), c.real());
  }
  return out;
}

}  // namespace

std::optional<polyopt::MinResult> ExactBackend::minimize(const polyopt::Polynomial& objective,
                                                         const polyopt::Polynomial& feasible,
                                                         std::uint64_t) {
  return polyopt::minimize_exact_feasible(objective, feasible);
}

std::vector<XbkSector> xbk_expand(const pauli::OperatorSum& h, const XbkConfig& cfg) {
  if (cfg.r < 1) throw std::invalid_argument("xbk_expand: replica count must be >= 1");
  if (!h.is_hermitian(1e-10))
    throw std::invalid_argument("xbk_expand: Hamiltonian has complex coefficients");
  unsigned m = h.n_qubits();
  unsigned r = cfg.r;
  if (static_cast<std::uint64_t>(r) * m > 64)
    throw std::invalid_argument("xbk_expand: r*m above 64 variables");
  unsigned n_vars = r * m;

  // cross-pair template over 2m virtual variables (bra replica, ket replica)
  MaskPoly cross;
  for (const auto& [key, c] : h.terms()) {
    MaskPoly t;
    t.scaled_insert(0, c.real());
    for (unsigned q = 0; q < m; ++q)
      multiply_factor(t, letter_at(key.first, key.second, q), q, m);
    for (const auto& [mask, v] : t.terms) cross.scaled_insert(mask, v);
  }

  // diagonal template over m variables: only Z/I strings survive
  MaskPoly diag;
  for (const auto& [key, c] : h.terms()) {
    if (key.first != 0) continue;
    diag.scaled_insert(key.second, c.real());
  }

  // norm template: prod_q (1 + s_bra s_ket)/2 = 2^-m sum over qubit subsets
  MaskPoly norm;
  {
    double w = std::pow(0.5, m);
    for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << m); ++sub) {
      std::uint64_t mask = 0;
      for (unsigned q = 0; q < m; ++q)
        if ((sub >> q) & 1) mask |= (std::uint64_t{1} << q) | (std::uint64_t{1} << (m + q));
      norm.scaled_insert(mask, w);
    }
  }

  std::vector<XbkSector> sectors;
  for (unsigned p = 0; p <= r / 2; ++p) {
    XbkSector sec;
    sec.p = p;
    sec.r = r;
    sec.m = m;
    sec.lambda = cfg.lambda_init;
    sec.sign_vector.assign(r, 1);
    for (unsigned i = 0; i < p; ++i) sec.sign_vector[i] = -1;

    MaskPoly hp, cp;
    for (unsigned i = 0; i < r; ++i) {
      double sii = sec.sign_vector[i] * sec.sign_vector[i];  // = 1
      for (const auto& [mask, c] : diag.terms)
        hp.scaled_insert(remap(mask, m, i, i), sii * c);
      cp.scaled_insert(0, 1.0);
      for (unsigned j = 0; j < r; ++j) {
        if (i == j) continue;
        double sij = sec.sign_vector[i] * sec.sign_vector[j];
        for (const auto& [mask, c] : cross.terms)
          hp.scaled_insert(remap(mask, m, i, j), sij * c);
        for (const auto& [mask, c] : norm.terms)
          cp.scaled_insert(remap(mask, m, i, j), sij * c);
      }
    }
    sec.h_prime = to_polynomial(hp, n_vars);
    sec.c_norm = to_polynomial(cp, n_vars);
    sectors.push_back(std::move(sec));
  }
  return sectors;
}

SectorSolve solve_sector(XbkSector& sec, SolverBackend& solver, const XbkConfig& cfg) {
  SectorSolve out;
  double lambda = sec.lambda;
  out.lambda_trace.push_back(lambda);
  for (unsigned iter = 0; iter < cfg.max_lambda_iterations; ++iter) {
    polyopt::Polynomial d = sec.h_prime;
    for (const auto& [vars, c] : sec.c_norm.terms()) d.add_term(vars, -lambda * c);
    d.prune();
    d.resize(sec.h_prime.n_vars());

    auto res = solver.minimize(d, sec.c_norm,
                               (static_cast<std::uint64_t>(sec.p) << 20) | iter);
    if (!res) {
      out.valid = false;
      out.converged = false;
      return out;
    }
    double hp = sec.h_prime.evaluate(res->assignment);
    double cp = sec.c_norm.evaluate(res->assignment);
    if (cp <= 0.5) {
      out.valid = false;
      out.converged = false;
      return out;
    }
    double next = hp / cp;
    out.best_assignment = res->assignment;
    out.iterations = iter + 1;
    out.lambda_trace.push_back(next);
    if (std::abs(next - lambda) < cfg.lambda_tolerance) {
      lambda = next;
      out.converged = true;
      break;
    }
    lambda = next;
  }
  out.lambda_prime = lambda;
  sec.lambda = lambda;
  return out;
}

XbkResult ground_energy_xbk(const pauli::OperatorSum& h, const XbkConfig& cfg,
                            SolverBackend& solver) {
  XbkResult result;
  result.sectors = xbk_expand(h, cfg);
  result.solves.resize(result.sectors.size());

  // sectors are independent; solve them concurrently
  std::vector<std::future<SectorSolve>> futures;
  futures.reserve(result.sectors.size());
  for (auto& sec : result.sectors)
    futures.push_back(std::async(std::launch::async, [&sec, &solver, &cfg] {
      return solve_sector(sec, solver, cfg);
    }));
  for (std::size_t i = 0; i < futures.size(); ++i) result.solves[i] = futures[i].get();

  result.energy = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < result.solves.size(); ++i) {
    const SectorSolve& s = result.solves[i];
    if (!s.valid) continue;
    if (!s.converged) result.all_converged = false;
    if (!result.any_valid || s.lambda_prime < result.energy) {
      result.any_valid = true;
      result.energy = s.lambda_prime;
      result.best_p = result.sectors[i].p;
    }
  }
  return result;
}

StateReconstruction reconstruct_state(const std::vector<std::vector<int>>& samples,
                                      const XbkSector& sec) {
  if (samples.empty()) throw std::invalid_argument("reconstruct_state: no samples");
  StateReconstruction rec;
  std::map<std::uint64_t, long long> signed_counts;
  for (const auto& sample : samples) {
    if (sample.size() != static_cast<std::size_t>(sec.r) * sec.m)
      throw std::invalid_argument("reconstruct_state: sample length mismatch");
    for (unsigned i = 0; i < sec.r; ++i) {
      std::uint64_t state = 0;
      for (unsigned q = 0; q < sec.m; ++q)
        if (sample[i * sec.m + q] < 0) state |= std::uint64_t{1} << q;  // spin -1 = |1>
      rec.counts[state] += 1;
      signed_counts[state] += sec.sign_vector[i];
    }
  }
  double norm2 = 0;
  for (const auto& [state, b] : rec.counts) norm2 += static_cast<double>(b) * b;
  double norm = std::sqrt(norm2);
  for (const auto& [state, b] : rec.counts) {
    long long sc = signed_counts[state];
    int sign = sc > 0 ? 1 : (sc < 0 ? -1 : 1);
    if (static_cast<std::uint64_t>(sc > 0 ? sc : -sc) != b) rec.sign_conflicts.push_back(state);
    rec.signs[state] = sign;
    rec.coefficients[state] = sign * static_cast<double>(b) / norm;
  }
  return rec;
}

std::vector<unsigned> replica_groups(const XbkSector& sec) {
  std::vector<unsigned> groups(static_cast<std::size_t>(sec.r) * sec.m);
  for (unsigned i = 0; i < sec.r; ++i)
    for (unsigned q = 0; q < sec.m; ++q) groups[i * sec.m + q] = i;
  return groups;
}

std::string sector_to_json(const XbkSector& sec, const SectorSolve* solve) {
  nlohmann::json j;
  j["p"] = sec.p;
  j["r"] = sec.r;
  j["m"] = sec.m;
  j["sign_vector"] = sec.sign_vector;
  j["lambda"] = sec.lambda;
  auto poly_json = [](const polyopt::Polynomial& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [vars, c] : p.terms()) terms.push_back({{"vars", vars}, {"coeff", c}});
    return nlohmann::json{{"n_vars", p.n_vars()}, {"domain", "spin"}, {"terms", terms}};
  };
  j["h_prime"] = poly_json(sec.h_prime);
  j["c_norm"] = poly_json(sec.c_norm);
  if (solve) {
    j["lambda_trace"] = solve->lambda_trace;
    j["iterations"] = solve->iterations;
    j["converged"] = solve->converged;
    j["valid"] = solve->valid;
  }
  return j.dump(2);
}

XbkSector sector_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  XbkSector sec;
  sec.p = j.at("p").get<unsigned>();
  sec.r = j.at("r").get<unsigned>();
  sec.m = j.at("m").get<unsigned>();
  sec.sign_vector = j.at("sign_vector").get<std::vector<int>>();
  sec.lambda = j.value("lambda", 0.0);
  auto poly_from = [](const nlohmann::json& pj) {
    polyopt::Polynomial p(pj.at("n_vars").get<unsigned>(), polyopt::Domain::spin);
    for (const auto& term : pj.at("terms"))
      p.add_term(term.at("vars").get<std::vector<unsigned>>(), term.at("coeff").get<double>());
    return p;
  };
  sec.h_prime = poly_from(j.at("h_prime"));
  sec.c_norm = poly_from(j.at("c_norm"));
  return sec;
}

}  // namespace spinchem::xbk
