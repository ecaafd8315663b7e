#include "zchain/satisfaction.hpp"

#include <algorithm>
#include <map>

#include "zchain/error.hpp"
#include "zchain/indiscern.hpp"
#include "zchain/prenex.hpp"

namespace zchain {

std::string extended_type(const ModelFragment& m, const Window& window, ElementId e, long r) {
  std::string out;
  for (long k = -r; k <= r; ++k) {
    auto t = m.offset(e, k);
    if (!t) {
      out.push_back('#');
    } else if (window.contains(*t)) {
      out.push_back(m.label(*t) ? '1' : '0');
    } else {
      out.push_back(m.label(*t) ? 'b' : 'a');
    }
  }
  return out;
}

WitnessKit build_witness_kit(const ModelFragment& m, long r, std::size_t n, std::size_t m_bound,
                             const Window* window) {
  const Window full = window ? Window() : Window::full(m);
  const Window& w = window ? *window : full;
  if (w.size() == 0) throw PreconditionError("witness kit needs a nonempty window");
  WitnessKit kit;
  kit.r = r;
  kit.quota = static_cast<std::size_t>(2 * r + 1) * (n + m_bound + 1);
  std::map<std::string, std::size_t> taken;
  for (ElementId e : w.elements())
    if (taken[extended_type(m, w, e, r)]++ < kit.quota) kit.v.push_back(e);
  if (!std::binary_search(kit.v.begin(), kit.v.end(), m.zero_id())) {
    kit.v.push_back(m.zero_id());
    std::sort(kit.v.begin(), kit.v.end());
  }
  for (ElementId e : kit.v)
    for (long k = -r; k <= r; ++k)
      if (auto t = m.offset(e, k); t && w.contains(*t)) kit.v_prime.push_back(*t);
  std::sort(kit.v_prime.begin(), kit.v_prime.end());
  kit.v_prime.erase(std::unique(kit.v_prime.begin(), kit.v_prime.end()), kit.v_prime.end());
  return kit;
}

std::vector<Handle> hardcode(const OracleModel& o, const std::vector<ElementId>& els) {
  std::vector<Handle> out;
  for (ElementId e : els) out.push_back(harness::handle_of(o, e));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

HandleKit hardcode(const OracleModel& o, const WitnessKit& k) {
  return {k.r, hardcode(o, k.v), hardcode(o, k.v_prime)};
}

bool sat_existential(const OracleModel& o, const Formula& f, const std::vector<std::string>& vars,
                     const std::vector<Handle>& args, const std::vector<Handle>& U, const HandleKit& kit,
                     SatStats* stats) {
  PrenexParts parts = split_prenex(f);
  std::vector<std::string> names = vars;
  for (const auto& [q, v] : parts.prefix) {
    if (q != Op::Exists) throw PreconditionError("sat_existential needs an existential formula: " + to_string(f));
    names.push_back(v);
  }
  if (args.size() != vars.size()) throw PreconditionError("argument count does not match the variables");
  std::vector<Handle> domain = U;
  domain.insert(domain.end(), kit.v_prime.begin(), kit.v_prime.end());
  std::sort(domain.begin(), domain.end());
  domain.erase(std::unique(domain.begin(), domain.end()), domain.end());

  const auto query = o.prepare(parts.matrix, names);
  const std::size_t m = parts.prefix.size();
  std::vector<Handle> tuple = args;
  tuple.resize(args.size() + m);
  auto test = [&]() {
    if (stats) ++stats->evaluations;
    try {
      return query(tuple);
    } catch (const InteriorViolation&) {
      if (stats) ++stats->skipped;
      return false;
    }
  };
  if (m == 0) return test();
  if (domain.empty()) return false;
  std::vector<std::size_t> idx(m, 0);
  for (;;) {
    for (std::size_t i = 0; i < m; ++i) tuple[args.size() + i] = domain[idx[i]];
    if (test()) return true;
    std::size_t k = m;
    while (k > 0 && ++idx[k - 1] == domain.size()) idx[--k] = 0;
    if (k == 0) return false;
  }
}

namespace {

bool term_defined_arithmetic(const DefDictionary& d) {
  Formula probe = parse("(= (S (P x)) 0)", d.source);
  return is_quantifier_free(translate(probe, d, Direction::Forward));
}

std::size_t add_component(SatRadius& sr, const Formula& comp, const DefDictionary& d) {
  const std::string key = to_string(comp);
  for (std::size_t i = 0; i < sr.components.size(); ++i)
    if (to_string(sr.components[i]) == key) return i;
  sr.components.push_back(comp);
  sr.component_vars.push_back(free_variables(comp));
  const long r = static_cast<long>(radius(comp, d));
  sr.component_radii.push_back(r);
  sr.value = std::max(sr.value, r);
  return sr.components.size() - 1;
}

}  // namespace

SatRadius satisfaction_radius(const Formula& f, const ModelFragment& m, const DefDictionary& d,
                              const Window& window, Decomposition mode) {
  SatRadius sr;
  sr.vars = free_variables(f);
  const Formula pf = to_prenex(f);
  const PrenexParts parts = split_prenex(pf);
  const bool all_exists = std::all_of(parts.prefix.begin(), parts.prefix.end(),
                                      [](const auto& q) { return q.first == Op::Exists; });
  const bool all_forall = std::all_of(parts.prefix.begin(), parts.prefix.end(),
                                      [](const auto& q) { return q.first == Op::Forall; });
  if (mode == Decomposition::Auto && all_exists) {
    sr.method = "existential";
    sr.dnf.push_back({{add_component(sr, pf, d), true}});
    return sr;
  }
  if (mode == Decomposition::Auto && all_forall) {
    PrenexParts neg{{}, Formula::negate(parts.matrix)};
    for (const auto& [q, v] : parts.prefix) neg.prefix.emplace_back(Op::Exists, v);
    sr.method = "universal";
    sr.dnf.push_back({{add_component(sr, join_prenex(neg), d), false}});
    return sr;
  }

  if (!handles_in(f).empty()) throw PreconditionError("the r-type decomposition needs a parameter-free formula");
  if (!term_defined_arithmetic(d))
    throw PreconditionError("the r-type decomposition needs 0, S and P defined by terms in dictionary " + d.name);
  sr.method = "rtype";
  const Formula in_l = to_prenex(translate(f, d, Direction::Backward));
  const auto types = satisfying_rtypes(m, in_l, sr.vars, window);
  for (const auto& t : types) {
    std::vector<SatLiteral> conj;
    Formula c = rtype_to_formula(t, sr.vars);
    std::vector<Formula> lits;
    while (c.op() == Op::And) {
      lits.push_back(c.child(0));
      c = c.child(1);
    }
    lits.push_back(c);
    for (const auto& lit : lits) {
      const bool positive = lit.op() != Op::Not;
      const Formula atom = positive ? lit : lit.child();
      conj.push_back({add_component(sr, translate(atom, d, Direction::Forward), d), positive});
    }
    sr.dnf.push_back(std::move(conj));
  }
  return sr;
}

std::vector<Handle> neighborhood_handles(const OracleModel& o, const std::vector<Handle>& args, long k) {
  const ModelFragment& m = harness::fragment(o);
  std::vector<ElementId> els;
  for (Handle h : args) {
    const ElementId e = harness::element_of(o, h);
    for (long j = -k; j <= k; ++j)
      if (auto t = m.offset(e, j)) els.push_back(*t);
  }
  return hardcode(o, els);
}

SatProgram build_sat_program(const OracleModel& o, const Formula& f, const Window& window, Decomposition mode) {
  const ModelFragment& m = harness::fragment(o);
  SatProgram prog;
  prog.sr = satisfaction_radius(f, m, harness::dictionary(o), window, mode);
  const auto params = handles_in(f);
  for (std::size_t i = 0; i < prog.sr.components.size(); ++i) {
    const auto parts = split_prenex(prog.sr.components[i]);
    const std::size_t n = prog.sr.component_vars[i].size() + params.size();
    prog.kits.push_back(
        hardcode(o, build_witness_kit(m, prog.sr.component_radii[i], n, parts.prefix.size(), &window)));
  }
  prog.parameter_support = neighborhood_handles(o, params, prog.sr.value);
  return prog;
}

bool sat_general(const OracleModel& o, const SatProgram& prog, const std::vector<Handle>& args,
                 const std::vector<Handle>& U, SatStats* stats) {
  const SatRadius& sr = prog.sr;
  if (args.size() != sr.vars.size()) throw PreconditionError("argument count does not match the variables");
  std::map<std::string, Handle> binding;
  for (std::size_t i = 0; i < args.size(); ++i) binding[sr.vars[i]] = args[i];
  std::vector<Handle> work = U;
  work.insert(work.end(), prog.parameter_support.begin(), prog.parameter_support.end());

  std::vector<std::optional<bool>> value(sr.components.size());
  auto component = [&](std::size_t i) {
    if (!value[i]) {
      std::vector<Handle> a;
      for (const auto& v : sr.component_vars[i]) a.push_back(binding.at(v));
      value[i] = sat_existential(o, sr.components[i], sr.component_vars[i], a, work, prog.kits[i], stats);
    }
    return *value[i];
  };
  for (const auto& conj : sr.dnf) {
    bool all = true;
    for (const auto& lit : conj)
      if (component(lit.component) != lit.positive) {
        all = false;
        break;
      }
    if (all) return true;
  }
  return false;
}

WarmupConfig build_warmup(const OracleModel& o, const Window& window) {
  const DefDictionary& d = harness::dictionary(o);
  WarmupConfig cfg;
  cfg.phi_zero = forward_definition(d, "0", {"x"});
  cfg.phi_succ = forward_definition(d, "S", {"x", "y"});
  cfg.phi_a = forward_definition(d, "A", {"x"});
  if (!is_quantifier_free(cfg.phi_succ) || !is_quantifier_free(cfg.phi_zero))
    throw PreconditionError("the warm-up needs quantifier-free definitions of 0 and S");
  cfg.prog_a = build_sat_program(o, cfg.phi_a, window);
  return cfg;
}

WarmupResult warmup_compute_A(const OracleModel& o, const WarmupConfig& cfg, std::size_t n) {
  const std::uint64_t evals_before = o.eval_count();
  const auto zero_q = o.prepare(cfg.phi_zero, {"x"});
  const auto succ_q = o.prepare(cfg.phi_succ, {"x", "y"});
  auto ask = [](const OracleModel::Query& q, std::vector<Handle> t) {
    try {
      return q(t);
    } catch (const InteriorViolation&) {
      return false;
    }
  };
  auto scan = [&](auto&& accept, const char* what) -> Handle {
    for (std::size_t i = 0; i < o.size(); ++i) {
      const Handle h = o.enumerate(i);
      if (accept(h)) return h;
    }
    throw Error(std::string("enumeration exhausted while looking for ") + what);
  };

  WarmupResult res;
  res.r = cfg.prog_a.sr.value;
  const Handle zero = scan([&](Handle h) { return ask(zero_q, {h}); }, "0");
  std::vector<Handle> below, above{zero};
  for (long i = 0; i < res.r; ++i) {
    const Handle cur = below.empty() ? zero : below.back();
    below.push_back(scan([&](Handle h) { return ask(succ_q, {h, cur}); }, "a predecessor"));
  }
  for (std::size_t i = 0; i < n + static_cast<std::size_t>(res.r); ++i) {
    const Handle cur = above.back();
    above.push_back(scan([&](Handle h) { return ask(succ_q, {cur, h}); }, "a successor"));
  }
  res.walk.assign(below.rbegin(), below.rend());
  res.walk.insert(res.walk.end(), above.begin(), above.end());
  std::vector<Handle> U = res.walk;
  std::sort(U.begin(), U.end());
  for (std::size_t i = 0; i <= n; ++i) res.bits.push_back(sat_general(o, cfg.prog_a, {above[i]}, U) ? '1' : '0');
  res.oracle_evals = o.eval_count() - evals_before;
  return res;
}

}  // namespace zchain
