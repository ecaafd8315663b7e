#include "zchain/eval.hpp"

#include <algorithm>

#include "zchain/error.hpp"

namespace zchain {

Window::Window(const ModelFragment& m, std::vector<ElementId> elems) : elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  member_.assign(m.size(), 0);
  for (ElementId id : elems_) {
    if (id >= m.size()) throw UnknownElement("window element " + std::to_string(id) + " is not in the fragment");
    member_[id] = 1;
  }
}

Window Window::full(const ModelFragment& m) {
  std::vector<ElementId> all(m.size());
  for (ElementId i = 0; i < m.size(); ++i) all[i] = i;
  return Window(m, std::move(all));
}

CompiledFormula::CompiledFormula(const Formula& f, std::vector<std::string> vars) : arity_(vars.size()) {
  std::map<std::string, std::uint32_t> env;
  for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = static_cast<std::uint32_t>(i);
  slots_ = vars.size();
  for (const auto& v : free_variables(f))
    if (!env.count(v)) throw PreconditionError("free variable '" + v + "' has no argument position");
  root_ = compile(f, env);
}

CompiledFormula::CTerm CompiledFormula::compile_term(const Term& t,
                                                     const std::map<std::string, std::uint32_t>& env) const {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto it = env.find(t.name);
      if (it == env.end()) throw PreconditionError("unbound variable '" + t.name + "'");
      return {CTerm::Base::Slot, it->second, 0, 0, 0};
    }
    case Term::Kind::Handle:
      return {CTerm::Base::Handle, t.handle, 0, 0, 0};
    case Term::Kind::Const:
      if (t.name != "0") throw SignatureError("constant '" + t.name + "' is not in L");
      return {CTerm::Base::Zero, 0, 0, 0, 0};
    case Term::Kind::Apply: {
      if ((t.name != "S" && t.name != "P") || t.args.size() != 1)
        throw SignatureError("function '" + t.name + "' is not in L");
      CTerm inner = compile_term(t.args[0], env);
      inner.off += t.name == "S" ? 1 : -1;
      inner.lo = std::min(inner.lo, inner.off);
      inner.hi = std::max(inner.hi, inner.off);
      return inner;
    }
  }
  return {};
}

std::uint32_t CompiledFormula::compile(const Formula& f, std::map<std::string, std::uint32_t>& env) {
  Node node;
  node.op = f.op();
  switch (f.op()) {
    case Op::True:
    case Op::False:
      break;
    case Op::Eq:
      node.t1 = compile_term(f.terms()[0], env);
      node.t2 = compile_term(f.terms()[1], env);
      break;
    case Op::Rel:
      if (f.symbol() != "A" || f.terms().size() != 1) throw SignatureError("relation '" + f.symbol() + "' is not in L");
      node.t1 = compile_term(f.terms()[0], env);
      break;
    case Op::Not:
      node.a = compile(f.child(), env);
      break;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      node.a = compile(f.child(0), env);
      node.b = compile(f.child(1), env);
      break;
    case Op::Exists:
    case Op::Forall: {
      auto saved = env;
      node.slot = static_cast<std::uint32_t>(slots_++);
      env[f.symbol()] = node.slot;
      node.a = compile(f.child(), env);
      env = std::move(saved);
      break;
    }
  }
  nodes_.push_back(node);
  return static_cast<std::uint32_t>(nodes_.size() - 1);
}

namespace {

ElementId eval_term(const CompiledFormula::CTerm& t, const ModelFragment& m, const std::vector<ElementId>& slots) {
  std::uint64_t base = 0;
  switch (t.base) {
    case CompiledFormula::CTerm::Base::Slot:
      base = slots[t.value];
      break;
    case CompiledFormula::CTerm::Base::Zero:
      base = m.zero_id();
      break;
    case CompiledFormula::CTerm::Base::Handle:
      base = t.value;
      break;
  }
  if (base >= m.size()) throw UnknownElement("handle " + std::to_string(base) + " is not in the fragment");
  const auto id = static_cast<ElementId>(base);
  if (t.lo == 0 && t.hi == 0) return id;
  const Element e = m.element(id);
  const auto& ch = m.chains()[e.chain];
  if (e.pos + t.lo < ch.lo || e.pos + t.hi > ch.hi)
    throw InteriorViolation("term evaluation at " + to_string(m, id) + " leaves the fragment");
  return static_cast<ElementId>(static_cast<long>(id) + t.off);
}

}  // namespace

bool CompiledFormula::run(std::uint32_t idx, const ModelFragment& m, std::vector<ElementId>& slots,
                          const Window& w) const {
  const Node& n = nodes_[idx];
  switch (n.op) {
    case Op::True:
      return true;
    case Op::False:
      return false;
    case Op::Eq:
      return eval_term(n.t1, m, slots) == eval_term(n.t2, m, slots);
    case Op::Rel:
      return m.label(eval_term(n.t1, m, slots));
    case Op::Not:
      return !run(n.a, m, slots, w);
    case Op::And:
      return run(n.a, m, slots, w) && run(n.b, m, slots, w);
    case Op::Or:
      return run(n.a, m, slots, w) || run(n.b, m, slots, w);
    case Op::Implies:
      return !run(n.a, m, slots, w) || run(n.b, m, slots, w);
    case Op::Exists:
      for (ElementId e : w.elements()) {
        slots[n.slot] = e;
        if (run(n.a, m, slots, w)) return true;
      }
      return false;
    case Op::Forall:
      for (ElementId e : w.elements()) {
        slots[n.slot] = e;
        if (!run(n.a, m, slots, w)) return false;
      }
      return true;
  }
  return false;
}

bool CompiledFormula::eval(const ModelFragment& m, std::span<const ElementId> args, const Window& w) const {
  if (args.size() != arity_) throw PreconditionError("wrong number of arguments");
  std::vector<ElementId> slots(slots_, 0);
  std::copy(args.begin(), args.end(), slots.begin());
  return run(root_, m, slots, w);
}

namespace {

std::pair<std::vector<std::string>, std::vector<ElementId>> split(const Assignment& asg) {
  std::vector<std::string> vars;
  std::vector<ElementId> args;
  for (const auto& [v, e] : asg) {
    vars.push_back(v);
    args.push_back(e);
  }
  return {vars, args};
}

}  // namespace

bool eval_qf(const ModelFragment& m, const Formula& f, const Assignment& asg) {
  if (!is_quantifier_free(f)) throw PreconditionError("eval_qf needs a quantifier-free formula");
  auto [vars, args] = split(asg);
  return CompiledFormula(f, vars).eval(m, args, Window());
}

bool eval_windowed(const ModelFragment& m, const Formula& f, const Assignment& asg, const Window& w) {
  auto [vars, args] = split(asg);
  return CompiledFormula(f, vars).eval(m, args, w);
}

std::vector<std::vector<ElementId>> satisfying_tuples(const ModelFragment& m, const Formula& f,
                                                      const std::vector<std::string>& vars,
                                                      const std::vector<ElementId>& domain, const Window& w) {
  CompiledFormula cf(f, vars);
  std::vector<std::vector<ElementId>> out;
  const std::size_t n = vars.size();
  if (n == 0) {
    if (cf.eval(m, {}, w)) out.emplace_back();
    return out;
  }
  if (domain.empty()) return out;
  std::vector<std::size_t> idx(n, 0);
  std::vector<ElementId> tuple(n);
  for (;;) {
    for (std::size_t i = 0; i < n; ++i) tuple[i] = domain[idx[i]];
    if (cf.eval(m, tuple, w)) out.push_back(tuple);
    std::size_t k = n;
    while (k > 0 && ++idx[k - 1] == domain.size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

}  // namespace zchain
