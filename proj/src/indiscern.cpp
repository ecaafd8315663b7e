#include "zchain/indiscern.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "zchain/prenex.hpp"
#include "zchain/rng.hpp"

namespace zchain {

std::vector<ElementId> deep_points(const ModelFragment& m, const Window& window, long r) {
  std::vector<ElementId> out;
  for (ElementId e : window.elements()) {
    if (!m.interior(e, r)) continue;
    bool inside = true;
    for (long k = -r; k <= r && inside; ++k) inside = window.contains(static_cast<ElementId>(static_cast<long>(e) + k));
    if (inside) out.push_back(e);
  }
  return out;
}

namespace {

constexpr std::size_t kTypingCap = 50000;

std::size_t power_capped(std::size_t base, std::size_t exp, std::size_t cap) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && v > cap / base) return cap + 1;
    v *= base;
  }
  return v;
}

std::vector<ElementId> tuple_at(const std::vector<ElementId>& pts, std::size_t n, std::size_t index) {
  std::vector<ElementId> t(n);
  for (std::size_t i = n; i-- > 0;) {
    t[i] = pts[index % pts.size()];
    index /= pts.size();
  }
  return t;
}

// Tested tuples: all of pts^n when there are at most `cap`, otherwise `cap`
// seeded draws.
std::vector<std::vector<ElementId>> tested_tuples(const std::vector<ElementId>& pts, std::size_t n, std::size_t cap,
                                                  std::uint64_t seed, bool& sampled) {
  std::vector<std::vector<ElementId>> out;
  if (n > 0 && pts.empty()) return out;
  const std::size_t total = power_capped(pts.size(), n, cap);
  sampled = total > cap;
  if (!sampled) {
    for (std::size_t i = 0; i < total; ++i) out.push_back(tuple_at(pts, n, i));
    return out;
  }
  Rng rng(seed);
  std::set<std::vector<ElementId>> seen;
  while (out.size() < cap) {
    std::vector<ElementId> t(n);
    for (auto& e : t) e = pts[rng.below(pts.size())];
    if (seen.insert(t).second) out.push_back(std::move(t));
  }
  return out;
}

void require_zero_deep(const ModelFragment& m, const Window& window, long r) {
  const ElementId z = m.zero_id();
  if (!m.interior(z, r)) throw InteriorViolation("the r-window of 0 leaves the fragment");
  for (long k = -r; k <= r; ++k)
    if (!window.contains(static_cast<ElementId>(static_cast<long>(z) + k)))
      throw InteriorViolation("the r-window of 0 leaves the evaluation window");
}

}  // namespace

IndiscernReport check_indiscernability(const ModelFragment& m, const Formula& f, const Window& window,
                                       const IndiscernOptions& opt) {
  IndiscernReport rep;
  rep.formula = f;
  rep.r = static_cast<long>(radius(f));
  rep.vars = free_variables(f);
  const long r = rep.r;
  require_zero_deep(m, window, r);
  const auto pts = deep_points(m, window, r);
  const std::size_t n = rep.vars.size();

  bool sampled = false;
  auto tuples = tested_tuples(pts, n, kTypingCap, opt.seed, sampled);
  rep.tuples_tested = tuples.size();
  std::map<RType, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < tuples.size(); ++i) groups[r_type(m, tuples[i], r)].push_back(i);
  rep.types_seen = groups.size();

  // Pick what to evaluate: everything if affordable, otherwise an even share
  // of each type that has at least two tested tuples.
  std::vector<std::vector<std::size_t>> chosen;
  if (tuples.size() <= opt.max_evals) {
    for (auto& [t, idx] : groups) chosen.push_back(idx);
  } else {
    sampled = true;
    std::size_t multi = 0;
    for (const auto& [t, idx] : groups) multi += idx.size() >= 2;
    const std::size_t share = std::max<std::size_t>(2, multi ? opt.max_evals / multi : 2);
    Rng rng(opt.seed ^ 0x5bd1e995ULL);
    std::size_t budget = opt.max_evals;
    for (auto& [t, idx] : groups) {
      if (idx.size() < 2 || budget < 2) continue;
      auto pick = idx;
      const std::size_t k = std::min({share, pick.size(), budget});
      for (std::size_t i = 0; i < k; ++i) std::swap(pick[i], pick[i + rng.below(pick.size() - i)]);
      pick.resize(k);
      std::sort(pick.begin(), pick.end());
      budget -= k;
      chosen.push_back(std::move(pick));
    }
  }
  rep.sampled = sampled;

  CompiledFormula cf(f, rep.vars);
  for (const auto& group : chosen) {
    std::optional<std::size_t> first_true, first_false;
    for (std::size_t i : group) {
      ++rep.tuples_evaluated;
      (cf.eval(m, tuples[i], window) ? first_true : first_false).emplace(i);
      if (first_true && first_false) break;
    }
    rep.pairs_checked += group.size() * (group.size() - 1) / 2;
    if (first_true && first_false)
      rep.violations.push_back({tuples[*first_true], tuples[*first_false], true, false});
  }

  // Witnesses far from the parameters may be missing if the window does not
  // realize every neighborhood type that the fragment does.
  const long half = (r + 1) / 2;
  std::set<std::string> in_fragment, in_window;
  for (ElementId e : interior_window(m, half)) in_fragment.insert(neighborhood_type(m, e, half));
  for (ElementId e : deep_points(m, window, half)) in_window.insert(neighborhood_type(m, e, half));
  std::size_t missing = 0;
  for (const auto& t : in_fragment)
    if (!in_window.count(t)) ++missing;
  if (missing)
    rep.warnings.push_back(std::to_string(missing) + " neighborhood type(s) of radius " + std::to_string(half) +
                           " occur in the fragment but not in the window");
  return rep;
}

std::vector<RType> satisfying_rtypes(const ModelFragment& m, const Formula& f, const std::vector<std::string>& vars,
                                     const Window& window) {
  const long r = static_cast<long>(radius(f));
  require_zero_deep(m, window, r);
  const auto pts = deep_points(m, window, r);
  bool sampled = false;
  auto tuples = tested_tuples(pts, vars.size(), static_cast<std::size_t>(-1) / 2, 0, sampled);
  CompiledFormula cf(f, vars);
  std::map<RType, std::pair<bool, std::size_t>> verdict;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const bool v = cf.eval(m, tuples[i], window);
    auto [it, fresh] = verdict.emplace(r_type(m, tuples[i], r), std::make_pair(v, i));
    if (!fresh && it->second.first != v) {
      const auto& other = tuples[it->second.second];
      Violation viol{v ? tuples[i] : other, v ? other : tuples[i], true, false};
      throw IndiscernabilityAbort("tuples of the same " + std::to_string(r) + "-type disagree on " + to_string(f),
                                  std::move(viol));
    }
  }
  std::vector<RType> out;
  for (const auto& [t, v] : verdict)
    if (v.first) out.push_back(t);
  return out;
}

Formula rtype_to_formula(const RType& t, const std::vector<std::string>& vars) {
  if (vars.size() != t.n) throw PreconditionError("rtype_to_formula: variable count does not match the type");
  auto point = [&](std::size_t i) { return i == 0 ? Term::constant("0") : Term::var(vars[i - 1]); };
  std::vector<Formula> lits;
  for (std::size_t i = 0; i <= t.n; ++i)
    for (std::size_t j = i + 1; j <= t.n; ++j) {
      if (auto k = t.at(i, j)) {
        lits.push_back(Formula::eq(point(j), shift(point(i), *k)));
      } else {
        for (long k2 = -t.r; k2 <= t.r; ++k2) lits.push_back(Formula::negate(Formula::eq(point(j), shift(point(i), k2))));
      }
    }
  for (std::size_t i = 0; i <= t.n; ++i)
    for (long k = -t.r; k <= t.r; ++k) {
      Formula a = Formula::rel("A", {shift(point(i), k)});
      lits.push_back(t.nbhd_types[i][static_cast<std::size_t>(k + t.r)] == '1' ? a : Formula::negate(a));
    }
  return Formula::conj(lits);
}

Formula rtypes_to_formula(const std::vector<RType>& types, const std::vector<std::string>& vars) {
  std::vector<Formula> parts;
  for (const auto& t : types) parts.push_back(rtype_to_formula(t, vars));
  return Formula::disj(parts);
}

}  // namespace zchain
