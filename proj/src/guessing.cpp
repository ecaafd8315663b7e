#include "zchain/guessing.hpp"

#include <algorithm>
#include <set>

#include "zchain/dictionary.hpp"
#include "zchain/error.hpp"
#include "zchain/ma.hpp"
#include "zchain/prenex.hpp"

namespace zchain {

Fuel::Fuel(std::uint64_t budget) : budget_(budget) {
  if (budget == 0) throw PreconditionError("fuel must be positive");
}

bool Fuel::spend(std::uint64_t steps) {
  if (used_ + steps > budget_) {
    used_ = budget_;
    return false;
  }
  used_ += steps;
  return true;
}

bool SuccessorApprox::excepted(Handle h) const {
  return std::binary_search(exceptions.begin(), exceptions.end(), h);
}

namespace {

PrenexParts existential_parts(const Formula& psi) {
  PrenexParts parts = split_prenex(is_prenex(psi) ? psi : to_prenex(psi));
  for (const auto& q : parts.prefix)
    if (q.first != Op::Exists) throw PreconditionError("psi must be existential: " + to_string(psi));
  return parts;
}

// psi(x, y) on the fragment, witnesses over a window, read through the
// backward translation of its matrix. Handle terms are element ids here.
class PsiOnFragment {
 public:
  PsiOnFragment(const ModelFragment& m, const DefDictionary& d, const Formula& psi, const Window& w)
      : m_(m), w_(w) {
    const PrenexParts parts = existential_parts(psi);
    std::vector<std::string> names{"x", "y"};
    for (const auto& q : parts.prefix) names.push_back(q.second);
    for (const auto& v : free_variables(psi))
      if (v != "x" && v != "y") throw PreconditionError("psi may only have x and y free");
    witnesses_ = parts.prefix.size();
    cf_ = CompiledFormula(translate(parts.matrix, d, Direction::Backward), names);
  }

  bool holds(ElementId a, ElementId b) const {
    std::vector<ElementId> t{a, b};
    t.resize(2 + witnesses_);
    auto test = [&] {
      try {
        return cf_.eval(m_, t, w_);
      } catch (const InteriorViolation&) {
        return false;
      }
    };
    if (witnesses_ == 0) return test();
    const auto& dom = w_.elements();
    if (dom.empty()) return false;
    std::vector<std::size_t> idx(witnesses_, 0);
    for (;;) {
      for (std::size_t i = 0; i < witnesses_; ++i) t[2 + i] = dom[idx[i]];
      if (test()) return true;
      std::size_t k = witnesses_;
      while (k > 0 && ++idx[k - 1] == dom.size()) idx[--k] = 0;
      if (k == 0) return false;
    }
  }

 private:
  const ModelFragment& m_;
  const Window& w_;
  std::size_t witnesses_ = 0;
  CompiledFormula cf_;
};

bool far(const ModelFragment& m, ElementId a, ElementId b, long r) {
  const SignedDistance d = signed_distance(m, a, b);
  return !d.is_finite() || *d.k > r || *d.k < -r;
}

Formula to_elements(const OracleModel& o, const Formula& f) {
  std::map<HandleId, HandleId> map;
  for (HandleId h : handles_in(f)) map[h] = harness::element_of(o, h);
  return map_handles(f, map);
}

bool sat_xy(const OracleModel& o, const SatProgram& prog, Handle x, Handle y, const std::vector<Handle>& U,
            SatStats* stats) {
  std::vector<Handle> args;
  for (const auto& v : prog.sr.vars) {
    if (v == "x") args.push_back(x);
    else if (v == "y") args.push_back(y);
    else throw PreconditionError("unexpected free variable " + v);
  }
  return sat_general(o, prog, args, U, stats);
}

}  // namespace

std::vector<ElementId> exception_set(const ModelFragment& m, const DefDictionary& d, const Formula& psi, long r,
                                     const Window& window) {
  const PsiOnFragment eval(m, d, psi, window);
  std::set<ElementId> x;
  const auto& dom = window.elements();
  for (ElementId a : dom)
    for (ElementId b : dom)
      if (far(m, a, b, r) && eval.holds(a, b)) {
        x.insert(a);
        x.insert(b);
      }
  for (HandleId c : handles_in(psi))
    for (ElementId e : neighborhood(m, static_cast<ElementId>(c), r)) x.insert(e);
  return {x.begin(), x.end()};
}

Formula default_psi(const DefDictionary& d) {
  const Formula phi = forward_definition(d, "S", {"x", "y"});
  const Formula p = to_prenex(phi);
  existential_parts(p);
  return p;
}

SuccessorApprox build_successor_approx(const OracleModel& o, const Formula& psi, const ApproxOptions& opt) {
  const ModelFragment& m = harness::fragment(o);
  const DefDictionary& d = harness::dictionary(o);
  const Window full = Window::full(m);
  const Formula on_m = to_elements(o, psi);

  SuccessorApprox sa;
  sa.psi = psi;
  sa.r = std::max<long>(1, static_cast<long>(radius(psi, d)));

  const PsiOnFragment eval(m, d, on_m, full);
  for (ElementId e : full.elements()) {
    const auto s = m.offset(e, 1);
    if (s && !eval.holds(e, *s))
      throw PreconditionError("phi_S does not imply psi at " + to_string(m, e));
  }
  const PrenexParts parts = existential_parts(on_m);
  const Formula in_l = join_prenex({parts.prefix, translate(parts.matrix, d, Direction::Backward)});
  const MAWitness ma = is_mutually_algebraic(m, in_l, {"x", "y"}, full, opt.max_k);
  if (!ma.verdict)
    throw PreconditionError("psi is not mutually algebraic on the fragment (least bound " + std::to_string(ma.k) +
                            ")");

  for (ElementId e : exception_set(m, d, on_m, sa.r, full)) {
    const Handle h = harness::handle_of(o, e);
    sa.exceptions.push_back(h);
    if (auto s = m.offset(e, 1)) sa.succ[h] = harness::handle_of(o, *s);
    if (auto p = m.offset(e, -1)) sa.pred[h] = harness::handle_of(o, *p);
  }
  std::sort(sa.exceptions.begin(), sa.exceptions.end());
  return sa;
}

SuccPredLists guess_succ_pred(const OracleModel& o, const SuccessorApprox& sa, Handle a, Fuel& fuel) {
  SuccPredLists out;
  if (sa.excepted(a)) {
    if (auto it = sa.succ.find(a); it != sa.succ.end()) out.succ.push_back(it->second);
    if (auto it = sa.pred.find(a); it != sa.pred.end()) out.pred.push_back(it->second);
    return out;
  }
  const PrenexParts parts = existential_parts(sa.psi);
  std::vector<std::string> names{"x", "y"};
  for (const auto& q : parts.prefix) names.push_back(q.second);
  const auto query = o.prepare(parts.matrix, names);
  const std::size_t w = parts.prefix.size();
  std::vector<Handle> universe(o.size());
  for (std::size_t i = 0; i < o.size(); ++i) universe[i] = o.enumerate(i);

  // nullopt: out of fuel
  auto holds = [&](Handle x, Handle y) -> std::optional<bool> {
    std::vector<Handle> t{x, y};
    t.resize(2 + w);
    std::vector<std::size_t> idx(w, 0);
    for (;;) {
      for (std::size_t i = 0; i < w; ++i) t[2 + i] = universe[idx[i]];
      if (!fuel.spend()) return std::nullopt;
      try {
        if (query(t)) return true;
      } catch (const InteriorViolation&) {
      }
      std::size_t k = w;
      while (k > 0 && ++idx[k - 1] == universe.size()) idx[--k] = 0;
      if (k == 0) return false;
    }
  };

  for (Handle b : universe) {
    const auto fwd = holds(a, b);
    if (!fwd) {
      out.complete = false;
      return out;
    }
    if (*fwd) {
      if (!sa.excepted(b)) {
        out.succ.push_back(b);
      } else if (auto it = sa.pred.find(b); it != sa.pred.end() && it->second == a) {
        out.succ.push_back(b);
      }
    }
    const auto bwd = holds(b, a);
    if (!bwd) {
      out.complete = false;
      return out;
    }
    if (*bwd) {
      if (!sa.excepted(b)) {
        out.pred.push_back(b);
      } else if (auto it = sa.succ.find(b); it != sa.succ.end() && it->second == a) {
        out.pred.push_back(b);
      }
    }
  }
  return out;
}

GuessConfig build_guess_config(const OracleModel& o, const Window& window, const std::optional<Formula>& psi,
                               const ApproxOptions& opt) {
  const DefDictionary& d = harness::dictionary(o);
  GuessConfig cfg;
  cfg.sa = build_successor_approx(o, psi ? *psi : default_psi(d), opt);
  cfg.succ = build_sat_program(o, forward_definition(d, "S", {"x", "y"}), window);
  cfg.zero = build_sat_program(o, forward_definition(d, "0", {"x"}), window);
  cfg.a = build_sat_program(o, forward_definition(d, "A", {"x"}), window);
  cfg.r1 = cfg.sa.r;
  cfg.r2 = cfg.succ.sr.value;
  cfg.r_a = cfg.a.sr.value;
  return cfg;
}

NeighborhoodGuesses guess_neighborhood(const OracleModel& o, const GuessConfig& cfg, Handle a, std::size_t n,
                                       Fuel& fuel) {
  NeighborhoodGuesses res;
  res.n = n;
  const long N = cfg.r1 * static_cast<long>(n) + cfg.r2;
  res.N = N;
  const std::uint64_t side = 2 * static_cast<std::uint64_t>(N) + 1;
  res.bound = static_cast<std::uint64_t>(cfg.r1) * side * side;
  auto slot = [&](long i) { return static_cast<std::size_t>(i + N); };

  // Phase 1: one deterministic run, recording when each U_i grows.
  struct Event {
    long i;
    std::size_t m;
    Handle h;
  };
  std::vector<Event> events{{0, 1, a}};
  std::vector<std::vector<Handle>> u(side);
  u[slot(0)].push_back(a);
  std::vector<std::pair<long, Handle>> queue{{0, a}};
  auto add = [&](long i, Handle h) {
    auto& s = u[slot(i)];
    if (std::find(s.begin(), s.end(), h) != s.end()) return;
    s.push_back(h);
    events.push_back({i, s.size(), h});
    queue.emplace_back(i, h);
  };
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const auto [i, b] = queue[q];
    if (i <= -N || i >= N) continue;
    SuccPredLists lists = guess_succ_pred(o, cfg.sa, b, fuel);
    if (!lists.complete) {
      res.trace_complete = false;
      break;
    }
    res.alg1.push_back({b, lists});
    if (i >= 0)
      for (Handle s : lists.succ) add(i + 1, s);
    if (i <= 0)
      for (Handle p : lists.pred) add(i - 1, p);
  }
  for (auto& s : u) std::sort(s.begin(), s.end());
  res.u = u;

  // Phase 2: each (i, m) fixes a prefix of the run; resolve the window inside it.
  std::vector<std::size_t> order(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) order[e] = e;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return std::pair(events[x].i, events[x].m) < std::pair(events[y].i, events[y].m);
  });
  std::set<std::vector<Handle>> seen;
  for (std::size_t e : order) {
    res.tried.emplace_back(events[e].i, events[e].m);
    std::vector<std::vector<Handle>> pu(side);
    std::vector<Handle> U;
    for (std::size_t k = 0; k <= e; ++k) {
      pu[slot(events[k].i)].push_back(events[k].h);
      U.push_back(events[k].h);
    }
    for (auto& s : pu) std::sort(s.begin(), s.end());
    std::sort(U.begin(), U.end());
    U.erase(std::unique(U.begin(), U.end()), U.end());

    bool ok = true;
    auto step = [&](Handle cur, long j, bool forward) -> std::optional<Handle> {
      for (Handle b : pu[slot(j)]) {
        if (fuel.exhausted()) {
          ok = false;
          return std::nullopt;
        }
        SatStats stats;
        const bool hit = forward ? sat_xy(o, cfg.succ, cur, b, U, &stats) : sat_xy(o, cfg.succ, b, cur, U, &stats);
        if (!fuel.spend(stats.evaluations)) {
          ok = false;
          return std::nullopt;
        }
        if (hit) return b;
      }
      return std::nullopt;
    };
    std::vector<Handle> up{a}, down;
    for (std::size_t i = 0; i < n && ok; ++i) {
      auto b = step(up.back(), static_cast<long>(i) + 1, true);
      if (!b) ok = false;
      else up.push_back(*b);
    }
    for (std::size_t i = 0; i < n && ok; ++i) {
      auto b = step(down.empty() ? a : down.back(), -static_cast<long>(i) - 1, false);
      if (!b) ok = false;
      else down.push_back(*b);
    }
    if (!ok) continue;
    std::vector<Handle> guess(down.rbegin(), down.rend());
    guess.insert(guess.end(), up.begin(), up.end());
    res.emitted.emplace_back(events[e].i, events[e].m);
    ++res.pre_dedup;
    if (seen.insert(guess).second) res.guesses.push_back(std::move(guess));
  }
  return res;
}

GuessBatch guess_A(const OracleModel& o, const GuessConfig& cfg, std::size_t n, Fuel& fuel) {
  const std::uint64_t evals_before = o.eval_count();
  GuessBatch batch;
  batch.n = n;
  batch.r1 = cfg.r1;
  batch.r2 = cfg.r2;
  batch.r_a = cfg.r_a;
  batch.N = cfg.r1 * static_cast<long>(n) + cfg.r2;
  const std::uint64_t side = 2 * static_cast<std::uint64_t>(batch.N) + 1;
  batch.bound_alg2 = static_cast<std::uint64_t>(cfg.r1) * side * side;
  const std::uint64_t c_side = 2 * static_cast<std::uint64_t>(cfg.r1 + cfg.r2) + 1;
  batch.C = static_cast<std::uint64_t>(cfg.r1) * c_side * c_side;
  const std::uint64_t width = std::max<std::uint64_t>(n + static_cast<std::uint64_t>(cfg.r_a), 1);
  batch.bound_batch = batch.C * width * width;

  std::optional<Handle> zero;
  for (std::size_t i = 0; i < o.size() && !zero; ++i) {
    const Handle h = o.enumerate(i);
    SatStats stats;
    const bool hit = sat_general(o, cfg.zero, {h}, {}, &stats);
    if (!fuel.spend(stats.evaluations)) {
      batch.complete = false;
      batch.fuel_used = fuel.used();
      batch.oracle_evals = o.eval_count() - evals_before;
      return batch;
    }
    if (hit) zero = h;
  }
  if (!zero) throw Error("no element satisfies the definition of 0");
  batch.zero = *zero;

  const std::size_t wide = n + static_cast<std::size_t>(cfg.r_a);
  batch.windows = guess_neighborhood(o, cfg, *zero, wide, fuel);
  batch.N_run = batch.windows.N;
  batch.complete = batch.windows.trace_complete;
  batch.extra_info_log = batch.windows.tried;

  std::set<std::string> seen;
  for (std::size_t e = 0; e < batch.windows.guesses.size(); ++e) {
    const auto& g = batch.windows.guesses[e];
    std::vector<Handle> U = g;
    std::sort(U.begin(), U.end());
    std::string bits;
    for (std::size_t i = 0; i <= n; ++i) {
      SatStats stats;
      const bool hit = sat_general(o, cfg.a, {g[wide + i]}, U, &stats);
      fuel.spend(stats.evaluations);
      bits.push_back(hit ? '1' : '0');
    }
    if (seen.insert(bits).second) batch.guesses.push_back(bits);
  }
  batch.pre_dedup = batch.windows.pre_dedup;
  batch.fuel_used = fuel.used();
  batch.oracle_evals = o.eval_count() - evals_before;
  return batch;
}

}  // namespace zchain
