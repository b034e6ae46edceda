#include "spinchem/polyopt.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace spinchem::polyopt {

namespace {

using json = nlohmann::json;

struct MaskTerm {
  std::uint32_t mask;
  double coeff;
};

void sort_merge(std::vector<MaskTerm>& terms) {
  std::sort(terms.begin(), terms.end(),
            [](const MaskTerm& a, const MaskTerm& b) { return a.mask < b.mask; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < terms.size();) {
    std::uint32_t mask = terms[i].mask;
    double c = 0;
    while (i < terms.size() && terms[i].mask == mask) c += terms[i++].coeff;
    if (std::abs(c) > 1e-15) terms[out++] = {mask, c};
  }
  terms.resize(out);
}

// Restricted term lists for variable `var` set to the domain's first value
// (binary 0 / spin -1) and second value (binary 1 / spin +1). The constant
// produced by fully-restricted terms is folded into acc.
void restrict_var(const std::vector<MaskTerm>& terms, unsigned var, Domain domain,
                  std::vector<MaskTerm>& first, std::vector<MaskTerm>& second,
                  double& acc_first, double& acc_second) {
  std::uint32_t bit = std::uint32_t{1} << var;
  first.clear();
  second.clear();
  acc_first = 0;
  acc_second = 0;
  for (const MaskTerm& t : terms) {
    if (!(t.mask & bit)) {
      if (t.mask == 0) {
        acc_first += t.coeff;
        acc_second += t.coeff;
      } else {
        first.push_back(t);
        second.push_back(t);
      }
      continue;
    }
    std::uint32_t rest = t.mask & ~bit;
    // second value: x=1 or s=+1 keeps the coefficient
    if (rest == 0)
      acc_second += t.coeff;
    else
      second.push_back({rest, t.coeff});
    // first value: x=0 kills the term, s=-1 negates it
    if (domain == Domain::spin) {
      if (rest == 0)
        acc_first -= t.coeff;
      else
        first.push_back({rest, -t.coeff});
    }
  }
  sort_merge(first);
  sort_merge(second);
}

std::vector<MaskTerm> compile_terms(const Polynomial& p) {
  if (p.n_vars() > kExactSolverMaxVars)
    throw std::invalid_argument("exhaustive routine: variable cap (" +
                                std::to_string(kExactSolverMaxVars) + ") exceeded");
  std::vector<MaskTerm> out;
  out.reserve(p.terms().size());
  for (const auto& [vars, c] : p.terms()) {
    std::uint32_t mask = 0;
    for (unsigned v : vars) mask |= std::uint32_t{1} << v;
    out.push_back({mask, c});
  }
  sort_merge(out);
  return out;
}

std::vector<int> decode_assignment(std::uint32_t bits, unsigned n, Domain domain) {
  std::vector<int> out(n);
  for (unsigned v = 0; v < n; ++v) {
    bool second = (bits >> v) & 1;
    out[v] = domain == Domain::binary ? (second ? 1 : 0) : (second ? 1 : -1);
  }
  return out;
}

// Depth-first enumeration with subcube restriction. visit(bits, value) is
// called once per leaf; subtrees whose polynomial became constant are visited
// once at their lexicographically-smallest representative.
template <class Visit>
void enumerate(std::vector<MaskTerm> terms, unsigned n_vars, Domain domain, Visit&& visit) {
  struct Frame {
    std::vector<MaskTerm> live;
    double acc;
    unsigned var;
    std::uint32_t bits;
  };
  double acc0 = 0;
  {  // fold any initial constant
    std::vector<MaskTerm> nonconst;
    for (const MaskTerm& t : terms)
      if (t.mask == 0)
        acc0 += t.coeff;
      else
        nonconst.push_back(t);
    terms = std::move(nonconst);
  }
  std::vector<Frame> stack;
  stack.push_back({std::move(terms), acc0, 0, 0});
  std::vector<MaskTerm> first, second;
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.var == n_vars || f.live.empty()) {
      visit(f.bits, f.acc);
      continue;
    }
    double a1, a2;
    restrict_var(f.live, f.var, domain, first, second, a1, a2);
    // push second branch first so the first value is explored first
    stack.push_back({second, f.acc + a2, f.var + 1, f.bits | (std::uint32_t{1} << f.var)});
    stack.push_back({first, f.acc + a1, f.var + 1, f.bits});
  }
}

// Joint enumeration of (objective, feasible) over the same assignment tree.
template <class Visit>
void enumerate2(std::vector<MaskTerm> obj, std::vector<MaskTerm> feas, unsigned n_vars,
                Domain domain, Visit&& visit) {
  struct Frame {
    std::vector<MaskTerm> live_o, live_f;
    double acc_o, acc_f;
    unsigned var;
    std::uint32_t bits;
  };
  auto split_const = [](std::vector<MaskTerm>& terms) {
    double acc = 0;
    std::vector<MaskTerm> rest;
    for (const MaskTerm& t : terms)
      if (t.mask == 0)
        acc += t.coeff;
      else
        rest.push_back(t);
    terms = std::move(rest);
    return acc;
  };
  double ao = split_const(obj), af = split_const(feas);
  std::vector<Frame> stack;
  stack.push_back({std::move(obj), std::move(feas), ao, af, 0, 0});
  std::vector<MaskTerm> of, os, ff, fs;
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.var == n_vars || (f.live_o.empty() && f.live_f.empty())) {
      visit(f.bits, f.acc_o, f.acc_f);
      continue;
    }
    double o1, o2, f1, f2;
    restrict_var(f.live_o, f.var, domain, of, os, o1, o2);
    restrict_var(f.live_f, f.var, domain, ff, fs, f1, f2);
    stack.push_back({os, fs, f.acc_o + o2, f.acc_f + f2, f.var + 1,
                     f.bits | (std::uint32_t{1} << f.var)});
    stack.push_back({of, ff, f.acc_o + o1, f.acc_f + f1, f.var + 1, f.bits});
  }
}

}  // namespace

void Polynomial::add_term(std::vector<unsigned> vars, double coeff) {
  std::sort(vars.begin(), vars.end());
  std::vector<unsigned> reduced;
  reduced.reserve(vars.size());
  for (std::size_t i = 0; i < vars.size();) {
    unsigned v = vars[i];
    if (v >= n_vars_) throw std::invalid_argument("add_term: variable index out of range");
    std::size_t run = 0;
    while (i < vars.size() && vars[i] == v) {
      ++run;
      ++i;
    }
    if (domain_ == Domain::binary) {
      reduced.push_back(v);  // x^k = x
    } else if (run % 2 == 1) {
      reduced.push_back(v);  // s^2 = 1
    }
  }
  double& slot = terms_[reduced];
  slot += coeff;
  if (slot == 0.0) terms_.erase(reduced);
}

double Polynomial::constant() const {
  auto it = terms_.find({});
  return it == terms_.end() ? 0.0 : it->second;
}

unsigned Polynomial::degree() const {
  std::size_t d = 0;
  for (const auto& [vars, c] : terms_) d = std::max(d, vars.size());
  return static_cast<unsigned>(d);
}

double Polynomial::evaluate(const std::vector<int>& assignment) const {
  if (assignment.size() != n_vars_)
    throw std::invalid_argument("evaluate: assignment length mismatch");
  double total = 0;
  for (const auto& [vars, c] : terms_) {
    double prod = c;
    for (unsigned v : vars) prod *= assignment[v];
    total += prod;
  }
  return total;
}

double Polynomial::max_abs_coefficient() const {
  double m = 0;
  for (const auto& [vars, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void Polynomial::prune(double threshold) {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < threshold)
      it = terms_.erase(it);
    else
      ++it;
  }
}

void Polynomial::resize(unsigned n_vars) {
  if (n_vars < n_vars_) throw std::invalid_argument("resize: cannot shrink a polynomial");
  n_vars_ = n_vars;
}

namespace {

Polynomial substitute_affine(const Polynomial& p, Domain target, double scale, double shift) {
  // each source variable v becomes (scale * t_v + shift) in the target domain
  Polynomial out(p.n_vars(), target);
  for (const auto& [vars, c] : p.terms()) {
    std::size_t k = vars.size();
    for (std::uint32_t sub = 0; sub < (std::uint32_t{1} << k); ++sub) {
      double coeff = c;
      std::vector<unsigned> kept;
      for (std::size_t i = 0; i < k; ++i) {
        if ((sub >> i) & 1) {
          coeff *= scale;
          kept.push_back(vars[i]);
        } else {
          coeff *= shift;
        }
      }
      if (coeff != 0.0) out.add_term(std::move(kept), coeff);
    }
  }
  out.prune();
  return out;
}

}  // namespace

Polynomial spin_to_binary(const Polynomial& p) {
  if (p.domain() != Domain::spin) throw std::invalid_argument("spin_to_binary: wrong domain");
  return substitute_affine(p, Domain::binary, 2.0, -1.0);  // s = 2x - 1
}

Polynomial binary_to_spin(const Polynomial& p) {
  if (p.domain() != Domain::binary) throw std::invalid_argument("binary_to_spin: wrong domain");
  return substitute_affine(p, Domain::spin, 0.5, 0.5);  // x = (s + 1)/2
}

namespace {

// One Rosenberg substitution y := a*b. Default penalty is the dominance
// bound 1 + 2 sum|c| over the terms carrying the pair at substitution time.
unsigned substitute_pair(Polynomial& work, unsigned a, unsigned b, QuadratisationMap& qmap,
                         std::optional<double> penalty_strength = std::nullopt) {
  double penalty;
  if (penalty_strength) {
    penalty = *penalty_strength;
  } else {
    double abs_sum = 0;
    for (const auto& [vars, c] : work.terms())
      if (std::binary_search(vars.begin(), vars.end(), a) &&
          std::binary_search(vars.begin(), vars.end(), b))
        abs_sum += std::abs(c);
    penalty = 1.0 + 2.0 * abs_sum;
  }

  unsigned y = work.n_vars();
  Polynomial next(work.n_vars() + 1, Domain::binary);
  for (const auto& [vars, c] : work.terms()) {
    bool has = vars.size() >= 3 && std::binary_search(vars.begin(), vars.end(), a) &&
               std::binary_search(vars.begin(), vars.end(), b);
    if (!has) {
      next.add_term(vars, c);
      continue;
    }
    std::vector<unsigned> rewritten;
    for (unsigned v : vars)
      if (v != a && v != b) rewritten.push_back(v);
    rewritten.push_back(y);
    next.add_term(std::move(rewritten), c);
  }
  next.add_term({a, b}, penalty);
  next.add_term({a, y}, -2.0 * penalty);
  next.add_term({b, y}, -2.0 * penalty);
  next.add_term({y}, 3.0 * penalty);
  qmap.ancillas.push_back({y, a, b, penalty});
  work = std::move(next);
  return y;
}

}  // namespace

std::pair<Polynomial, QuadratisationMap> quadratize(const Polynomial& p) {
  if (p.domain() != Domain::binary)
    throw std::invalid_argument("quadratize expects a binary-domain polynomial");
  Polynomial work = p;
  QuadratisationMap qmap;
  while (work.degree() > 2) {
    // count pair occurrences inside degree >= 3 terms
    std::map<std::pair<unsigned, unsigned>, unsigned> counts;
    for (const auto& [vars, c] : work.terms()) {
      if (vars.size() < 3) continue;
      for (std::size_t i = 0; i < vars.size(); ++i)
        for (std::size_t j = i + 1; j < vars.size(); ++j) counts[{vars[i], vars[j]}]++;
    }
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it)
      if (it->second > best->second) best = it;  // ties: lexicographically first pair
    substitute_pair(work, best->first.first, best->first.second, qmap);
  }
  work.prune();
  return {std::move(work), std::move(qmap)};
}

std::pair<Polynomial, QuadratisationMap> quadratize_grouped(
    const Polynomial& p, const std::vector<unsigned>& group_of_var,
    std::optional<double> penalty_strength) {
  if (p.domain() != Domain::binary)
    throw std::invalid_argument("quadratize_grouped expects a binary-domain polynomial");
  if (group_of_var.size() != p.n_vars())
    throw std::invalid_argument("quadratize_grouped: group list length mismatch");
  for (const auto& [vars, c] : p.terms()) {
    std::set<unsigned> groups;
    for (unsigned v : vars) groups.insert(group_of_var[v]);
    if (groups.size() > 2)
      throw std::invalid_argument("quadratize_grouped: monomial spans more than two groups");
  }

  // Repeatedly collapse the first same-group factor pair of the first
  // high-order monomial; every substitution rewrites all monomials carrying
  // that pair, so group-local factors get shared across the polynomial.
  Polynomial work = p;
  QuadratisationMap qmap;
  std::vector<unsigned> group = group_of_var;  // extended per ancilla
  while (work.degree() > 2) {
    const std::vector<unsigned>* victim = nullptr;
    for (const auto& [vars, c] : work.terms())
      if (vars.size() >= 3) {
        victim = &vars;
        break;
      }
    unsigned a = 0, b = 0;
    bool found = false;
    for (std::size_t i = 0; i < victim->size() && !found; ++i)
      for (std::size_t j = i + 1; j < victim->size() && !found; ++j)
        if (group[(*victim)[i]] == group[(*victim)[j]]) {
          a = (*victim)[i];
          b = (*victim)[j];
          found = true;
        }
    if (!found) throw std::logic_error("high-order monomial without a same-group pair");
    unsigned g = group[a];
    substitute_pair(work, a, b, qmap, penalty_strength);
    group.push_back(g);
  }
  work.prune();
  return {std::move(work), std::move(qmap)};
}

std::pair<Polynomial, QuadratisationMap> quadratize_spin_grouped(
    const Polynomial& p, const std::vector<unsigned>& group_of_var,
    std::optional<double> penalty_strength) {
  if (p.domain() != Domain::spin)
    throw std::invalid_argument("quadratize_spin_grouped expects a spin-domain polynomial");
  if (group_of_var.size() != p.n_vars())
    throw std::invalid_argument("quadratize_spin_grouped: group list length mismatch");
  for (const auto& [vars, c] : p.terms()) {
    std::set<unsigned> groups;
    for (unsigned v : vars) groups.insert(group_of_var[v]);
    if (groups.size() > 2)
      throw std::invalid_argument("quadratize_spin_grouped: monomial spans more than two groups");
  }

  Polynomial work = p;
  QuadratisationMap qmap;
  std::vector<unsigned> group = group_of_var;
  while (work.degree() > 2) {
    const std::vector<unsigned>* victim = nullptr;
    for (const auto& [vars, c] : work.terms())
      if (vars.size() >= 3) {
        victim = &vars;
        break;
      }
    unsigned a = 0, b = 0;
    bool found = false;
    for (std::size_t i = 0; i < victim->size() && !found; ++i)
      for (std::size_t j = i + 1; j < victim->size() && !found; ++j)
        if (group[(*victim)[i]] == group[(*victim)[j]]) {
          a = (*victim)[i];
          b = (*victim)[j];
          found = true;
        }
    if (!found) throw std::logic_error("high-order monomial without a same-group pair");

    double penalty;
    if (penalty_strength) {
      penalty = *penalty_strength;
    } else {
      double abs_sum = 0;
      for (const auto& [vars, c] : work.terms())
        if (std::binary_search(vars.begin(), vars.end(), a) &&
            std::binary_search(vars.begin(), vars.end(), b))
          abs_sum += std::abs(c);
      penalty = 1.0 + 2.0 * abs_sum;
    }

    unsigned y = work.n_vars();
    unsigned w = y + 1;
    Polynomial next(work.n_vars() + 2, Domain::spin);
    for (const auto& [vars, c] : work.terms()) {
      bool has = vars.size() >= 3 && std::binary_search(vars.begin(), vars.end(), a) &&
                 std::binary_search(vars.begin(), vars.end(), b);
      if (!has) {
        next.add_term(vars, c);
        continue;
      }
      std::vector<unsigned> rewritten;
      for (unsigned v : vars)
        if (v != a && v != b) rewritten.push_back(v);
      rewritten.push_back(y);
      next.add_term(std::move(rewritten), c);
    }
    double q = penalty / 4.0;
    next.add_term({}, 8 * q);
    next.add_term({a, b}, 2 * q);
    next.add_term({a, y}, 2 * q);
    next.add_term({b, y}, 2 * q);
    next.add_term({a}, -2 * q);
    next.add_term({b}, -2 * q);
    next.add_term({y}, -2 * q);
    next.add_term({a, w}, -4 * q);
    next.add_term({b, w}, -4 * q);
    next.add_term({y, w}, -4 * q);
    next.add_term({w}, 4 * q);
    qmap.ancillas.push_back({y, a, b, penalty, static_cast<int>(w)});
    unsigned g = group[a];
    group.push_back(g);  // y inherits the pair's group
    group.push_back(g);  // w never joins a monomial but needs a label
    work = std::move(next);
  }
  work.prune();
  return {std::move(work), std::move(qmap)};
}

double IsingModel::energy(const std::vector<int>& spins) const {
  if (spins.size() != h.size()) throw std::invalid_argument("IsingModel::energy: size mismatch");
  double e = offset;
  for (std::size_t i = 0; i < h.size(); ++i) e += h[i] * spins[i];
  for (const auto& [pair, j] : couplings) e += j * spins[pair.first] * spins[pair.second];
  return e;
}

double IsingModel::max_abs_field() const {
  double m = 0;
  for (double v : h) m = std::max(m, std::abs(v));
  return m;
}

double IsingModel::max_abs_coupling() const {
  double m = 0;
  for (const auto& [pair, j] : couplings) m = std::max(m, std::abs(j));
  return m;
}

IsingModel qubo_to_ising(const Polynomial& qubo) {
  if (qubo.domain() != Domain::binary)
    throw std::invalid_argument("qubo_to_ising expects a binary polynomial");
  if (qubo.degree() > 2) throw std::invalid_argument("qubo_to_ising: degree above 2");
  IsingModel model;
  model.h.assign(qubo.n_vars(), 0.0);
  for (const auto& [vars, c] : qubo.terms()) {
    switch (vars.size()) {
      case 0:
        model.offset += c;
        break;
      case 1:  // c x = c (s+1)/2
        model.h[vars[0]] += c / 2;
        model.offset += c / 2;
        break;
      default: {  // c x y = c (s+1)(t+1)/4
        model.couplings[{vars[0], vars[1]}] += c / 4;
        model.h[vars[0]] += c / 4;
        model.h[vars[1]] += c / 4;
        model.offset += c / 4;
      }
    }
  }
  for (auto it = model.couplings.begin(); it != model.couplings.end();)
    it = it->second == 0.0 ? model.couplings.erase(it) : std::next(it);
  return model;
}

IsingModel spin_quadratic_to_ising(const Polynomial& p) {
  if (p.domain() != Domain::spin)
    throw std::invalid_argument("spin_quadratic_to_ising expects a spin polynomial");
  if (p.degree() > 2) throw std::invalid_argument("spin_quadratic_to_ising: degree above 2");
  IsingModel model;
  model.h.assign(p.n_vars(), 0.0);
  for (const auto& [vars, c] : p.terms()) {
    if (vars.empty())
      model.offset += c;
    else if (vars.size() == 1)
      model.h[vars[0]] += c;
    else
      model.couplings[{vars[0], vars[1]}] += c;
  }
  return model;
}

Polynomial ising_to_polynomial(const IsingModel& model) {
  Polynomial p(model.n_vars(), Domain::spin);
  if (model.offset != 0.0) p.add_term({}, model.offset);
  for (unsigned i = 0; i < model.n_vars(); ++i)
    if (model.h[i] != 0.0) p.add_term({i}, model.h[i]);
  for (const auto& [pair, j] : model.couplings)
    if (j != 0.0) p.add_term({pair.first, pair.second}, j);
  return p;
}

Polynomial ising_to_qubo(const IsingModel& model) { return spin_to_binary(ising_to_polynomial(model)); }

MinResult minimize_exact(const Polynomial& p) {
  std::vector<MaskTerm> terms = compile_terms(p);
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_bits = 0;
  enumerate(std::move(terms), p.n_vars(), p.domain(), [&](std::uint32_t bits, double value) {
    if (value < best) {
      best = value;
      best_bits = bits;
    }
  });
  return {best, decode_assignment(best_bits, p.n_vars(), p.domain())};
}

std::optional<MinResult> minimize_exact_feasible(const Polynomial& objective,
                                                 const Polynomial& feasible) {
  if (objective.n_vars() != feasible.n_vars() || objective.domain() != feasible.domain())
    throw std::invalid_argument("minimize_exact_feasible: mismatched polynomials");
  std::vector<MaskTerm> obj = compile_terms(objective);
  std::vector<MaskTerm> feas = compile_terms(feasible);
  double best = std::numeric_limits<double>::infinity();
  std::uint32_t best_bits = 0;
  bool found = false;
  enumerate2(std::move(obj), std::move(feas), objective.n_vars(), objective.domain(),
             [&](std::uint32_t bits, double value, double feas_value) {
               if (feas_value < 0.5) return;  // norm-zero assignment: +inf objective
               if (!found || value < best) {
                 found = true;
                 best = value;
                 best_bits = bits;
               }
             });
  if (!found) return std::nullopt;
  return MinResult{best, decode_assignment(best_bits, objective.n_vars(), objective.domain())};
}

double spectral_gap(const Polynomial& p, double resolution) {
  std::vector<MaskTerm> terms = compile_terms(p);
  double e1 = std::numeric_limits<double>::infinity();
  double e2 = std::numeric_limits<double>::infinity();
  enumerate(std::move(terms), p.n_vars(), p.domain(), [&](std::uint32_t, double value) {
    if (value < e1 - resolution) {
      if (e1 < e2) e2 = e1;
      e1 = value;
    } else if (std::abs(value - e1) > resolution && value < e2) {
      e2 = value;
    }
  });
  if (!std::isfinite(e2))
    throw std::domain_error("spectral_gap: landscape has a single energy value");
  return e2 - e1;
}

void write_qubo_file(std::ostream& out, const Polynomial& qubo) {
  if (qubo.domain() != Domain::binary || qubo.degree() > 2)
    throw std::invalid_argument("write_qubo_file expects a QUBO");
  std::size_t n_nodes = 0, n_couplers = 0;
  for (const auto& [vars, c] : qubo.terms()) {
    if (vars.size() == 1) ++n_nodes;
    if (vars.size() == 2) ++n_couplers;
  }
  out.precision(17);
  if (qubo.constant() != 0.0) out << "c offset " << qubo.constant() << "\n";
  out << "p qubo 0 " << qubo.n_vars() << " " << n_nodes << " " << n_couplers << "\n";
  for (const auto& [vars, c] : qubo.terms())
    if (vars.size() == 1) out << vars[0] << " " << vars[0] << " " << c << "\n";
  for (const auto& [vars, c] : qubo.terms())
    if (vars.size() == 2) out << vars[0] << " " << vars[1] << " " << c << "\n";
}

Polynomial read_qubo_file(std::istream& in) {
  std::string line;
  unsigned max_nodes = 0;
  double offset = 0.0;
  std::vector<std::tuple<unsigned, unsigned, double>> entries;
  bool header_seen = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") {
      std::string what;
      if (ls >> what && what == "offset") ls >> offset;
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      unsigned zero, nn, nc;
      if (!(ls >> fmt >> zero >> max_nodes >> nn >> nc) || fmt != "qubo")
        throw std::runtime_error("bad qubo header");
      header_seen = true;
      continue;
    }
    unsigned i = std::stoul(tok);
    unsigned j;
    double v;
    if (!(ls >> j >> v)) throw std::runtime_error("bad qubo entry line");
    entries.emplace_back(i, j, v);
  }
  if (!header_seen) throw std::runtime_error("missing qubo header");
  Polynomial p(max_nodes, Domain::binary);
  if (offset != 0.0) p.add_term({}, offset);
  for (auto& [i, j, v] : entries) {
    if (i == j)
      p.add_term({i}, v);
    else
      p.add_term({i, j}, v);
  }
  return p;
}

std::string ising_to_json(const IsingModel& model) {
  json j;
  j["n_vars"] = model.n_vars();
  j["h"] = model.h;
  json couplers = json::array();
  for (const auto& [pair, v] : model.couplings) couplers.push_back({pair.first, pair.second, v});
  j["J"] = couplers;
  j["offset"] = model.offset;
  return j.dump(2);
}

IsingModel ising_from_json(const std::string& text) {
  json j = json::parse(text);
  IsingModel model;
  model.h = j.at("h").get<std::vector<double>>();
  model.offset = j.value("offset", 0.0);
  for (const auto& entry : j.at("J")) {
    unsigned a = entry.at(0).get<unsigned>();
    unsigned b = entry.at(1).get<unsigned>();
    double v = entry.at(2).get<double>();
    if (a == b) throw std::runtime_error("ising json has a self-coupling");
    if (a > b) std::swap(a, b);
    model.couplings[{a, b}] += v;
  }
  return model;
}

}  // namespace spinchem::polyopt
