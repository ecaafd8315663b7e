#include "zchain/ma.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "zchain/error.hpp"

namespace zchain {

namespace {

using Tuple = std::vector<ElementId>;

// Tuples whose evaluation leaves the fragment count as not satisfying.
std::vector<Tuple> satisfying(const ModelFragment& m, const Formula& f, const std::vector<std::string>& vars,
                              const Window& w) {
  CompiledFormula cf(f, vars);
  std::vector<Tuple> out;
  const std::size_t n = vars.size();
  const auto& dom = w.elements();
  auto test = [&](const Tuple& t) {
    try {
      return cf.eval(m, t, w);
    } catch (const InteriorViolation&) {
      return false;
    }
  };
  if (n == 0) {
    if (test({})) out.emplace_back();
    return out;
  }
  if (dom.empty()) return out;
  std::vector<std::size_t> idx(n, 0);
  Tuple t(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) t[i] = dom[idx[i]];
    if (test(t)) out.push_back(t);
    std::size_t k = n;
    while (k > 0 && ++idx[k - 1] == dom.size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

struct Bound {
  std::size_t k = 0;
  MACounterexample worst;
};

Bound least_bound(const std::vector<Tuple>& sat, std::size_t n) {
  Bound b;
  if (n <= 1) return b;
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) pos.push_back(i);
    std::map<Tuple, std::size_t> groups;
    for (const auto& t : sat) {
      Tuple key;
      for (std::size_t p : pos) key.push_back(t[p]);
      const std::size_t c = ++groups[key];
      if (c > b.k) {
        b.k = c;
        b.worst = {pos, key, c};
      }
    }
  }
  return b;
}

}  // namespace

MAWitness is_mutually_algebraic(const ModelFragment& m, const Formula& f, const std::vector<std::string>& vars,
                                const Window& window, std::optional<std::size_t> k) {
  for (const auto& v : free_variables(f))
    if (std::find(vars.begin(), vars.end(), v) == vars.end())
      throw PreconditionError("variable " + v + " is free in the formula but not listed");
  if (vars.size() > 16) throw PreconditionError("too many variables for an exhaustive check");
  MAWitness w;
  w.formula = f;
  w.vars = vars;
  const auto sat = satisfying(m, f, vars, window);
  w.satisfying = sat.size();
  const Bound b = least_bound(sat, vars.size());
  w.k = b.k;
  w.requested = k;
  if (k && b.k > *k) {
    w.verdict = false;
    w.counterexample = b.worst;
  }
  return w;
}

MAStability ma_stable(const ModelFragment& m, const Formula& f, const std::vector<std::string>& vars,
                      const Window& small, const Window& large) {
  if (large.size() <= small.size()) throw PreconditionError("the second window must be larger");
  for (ElementId e : small.elements())
    if (!large.contains(e)) throw PreconditionError("the windows are not nested");
  MAStability s;
  s.k_small = is_mutually_algebraic(m, f, vars, small).k;
  s.k_large = is_mutually_algebraic(m, f, vars, large).k;
  s.stable = s.k_small == s.k_large;
  return s;
}

namespace {

std::size_t greedy_family(const std::vector<Tuple>& sat) {
  std::set<ElementId> used;
  std::size_t count = 0;
  for (const auto& t : sat) {
    if (std::any_of(t.begin(), t.end(), [&](ElementId e) { return used.count(e) != 0; })) continue;
    used.insert(t.begin(), t.end());
    ++count;
  }
  return count;
}

}  // namespace

DisjointFamilyReport disjoint_family(const ModelFragment& m, const Formula& f, const std::vector<std::string>& vars,
                                     const Window& window, std::size_t factor) {
  DisjointFamilyReport r;
  const auto sat = satisfying(m, f, vars, window);
  r.satisfying = sat.size();
  r.family = greedy_family(sat);
  r.k = least_bound(sat, vars.size()).k;
  r.arity = vars.size();
  r.threshold = factor * r.k * r.arity;
  r.meets_threshold = r.family >= r.threshold;
  return r;
}

Formula disjunct_formula(const QeDisjunct& d) {
  std::vector<Formula> parts = d.positives;
  for (const auto& b : d.negatives) parts.push_back(Formula::negate(b));
  return Formula::conj(parts);
}

Qe1Result qe1_construct(const ModelFragment& m, const std::vector<QeDisjunct>& dnf,
                        const std::vector<std::string>& vars, const Window& window, std::size_t factor) {
  Qe1Result res;
  std::size_t sum_k = 0;
  for (std::size_t i = 0; i < dnf.size(); ++i) {
    const Formula phi = disjunct_formula(dnf[i]);
    const auto sat = satisfying(m, phi, vars, window);
    const std::size_t k = least_bound(sat, vars.size()).k;
    const std::size_t family = greedy_family(sat);
    const bool finite = family < factor * k * vars.size() || sat.empty();
    Formula gamma;
    if (finite) {
      std::vector<Formula> eqs;
      for (const auto& t : sat) {
        std::vector<Formula> cs;
        for (std::size_t j = 0; j < vars.size(); ++j) cs.push_back(Formula::eq(Term::var(vars[j]), Term::param(t[j])));
        eqs.push_back(Formula::conj(cs));
      }
      gamma = Formula::disj(eqs);
    } else {
      gamma = Formula::conj(dnf[i].positives);
    }
    const std::size_t gk = is_mutually_algebraic(m, gamma, vars, window).k;
    if (!finite && gk > k)
      res.notes.push_back("disjunct " + std::to_string(i) + ": positive part has bound " + std::to_string(gk) +
                          " against " + std::to_string(k) + " for the disjunct");
    res.gamma_parts.push_back(gamma);
    res.finite_case.push_back(finite);
    res.part_k.push_back(gk);
    sum_k += gk;
  }
  res.gamma = Formula::disj(res.gamma_parts);

  std::vector<Formula> all;
  for (const auto& d : dnf) all.push_back(disjunct_formula(d));
  const auto phi_sat = satisfying(m, Formula::disj(all), vars, window);
  const auto gamma_sat = satisfying(m, res.gamma, vars, window);
  res.implication_ok = std::includes(gamma_sat.begin(), gamma_sat.end(), phi_sat.begin(), phi_sat.end());
  res.k_gamma = least_bound(gamma_sat, vars.size()).k;
  res.ma_ok = res.k_gamma <= sum_k;
  return res;
}

}  // namespace zchain
