#include "zchain/oracle.hpp"

#include <algorithm>

#include "zchain/error.hpp"
#include "zchain/rng.hpp"

namespace zchain {

void CallLog::add(std::string line) {
  std::lock_guard lock(mu_);
  lines_.push_back(std::move(line));
}

std::vector<std::string> CallLog::lines() const {
  std::lock_guard lock(mu_);
  return lines_;
}

std::string CallLog::text() const {
  std::string out;
  for (const auto& l : lines()) out += l + "\n";
  return out;
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[rng.below(i)]);
  return p;
}

namespace {

Term map_term(const Term& t, const std::map<HandleId, HandleId>& map) {
  if (t.kind == Term::Kind::Handle) {
    auto it = map.find(t.handle);
    if (it == map.end()) throw UnknownElement("unknown handle " + std::to_string(t.handle));
    return Term::param(it->second);
  }
  Term out = t;
  for (auto& a : out.args) a = map_term(a, map);
  return out;
}

}  // namespace

Formula map_handles(const Formula& f, const std::map<HandleId, HandleId>& map) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Eq:
      return Formula::eq(map_term(f.terms()[0], map), map_term(f.terms()[1], map));
    case Op::Rel: {
      std::vector<Term> ts;
      for (const auto& t : f.terms()) ts.push_back(map_term(t, map));
      return Formula::rel(f.symbol(), std::move(ts));
    }
    case Op::Not:
      return Formula::negate(map_handles(f.child(), map));
    case Op::And:
      return Formula::conj(map_handles(f.child(0), map), map_handles(f.child(1), map));
    case Op::Or:
      return Formula::disj(map_handles(f.child(0), map), map_handles(f.child(1), map));
    case Op::Implies:
      return Formula::implies(map_handles(f.child(0), map), map_handles(f.child(1), map));
    case Op::Exists:
      return Formula::exists(f.symbol(), map_handles(f.child(), map));
    case Op::Forall:
      return Formula::forall(f.symbol(), map_handles(f.child(), map));
  }
  return f;
}

OracleModel::OracleModel(ModelFragment m, DefDictionary d, std::uint64_t seed)
    : frag_(std::move(m)), dict_(std::move(d)), full_(Window::full(frag_)) {
  dict_.validate();
  const std::size_t n = frag_.size();
  // Handles are a seeded relabelling of the elements; the enumeration order
  // is an independent seeded permutation.
  auto labels = seeded_permutation(n, seed);
  handle_of_.resize(n);
  for (std::size_t e = 0; e < n; ++e) {
    handle_of_[e] = 1000 + labels[e];
    element_of_.emplace(handle_of_[e], static_cast<ElementId>(e));
  }
  for (std::size_t i : seeded_permutation(n, seed ^ 0x9e3779b97f4a7c15ULL)) order_.push_back(handle_of_[i]);
  validate();
}

Handle OracleModel::enumerate(std::size_t i) const {
  if (i >= order_.size()) throw Error("enumeration index " + std::to_string(i) + " past the end");
  const Handle h = order_[i];
  if (log_) log_->add("ENUM " + std::to_string(i) + " -> " + std::to_string(h));
  return h;
}

ElementId OracleModel::resolve(Handle h) const {
  auto it = element_of_.find(h);
  if (it == element_of_.end()) throw UnknownElement("unknown handle " + std::to_string(h));
  return it->second;
}

OracleModel::Query OracleModel::prepare(const Formula& qf, const std::vector<std::string>& vars) const {
  if (!is_quantifier_free(qf)) throw PreconditionError("the oracle only evaluates quantifier-free formulas");
  check_signature(qf, dict_.target);
  std::map<HandleId, HandleId> params;
  for (HandleId h : handles_in(qf)) params[h] = resolve(h);
  Formula in_l = translate(map_handles(qf, params), dict_, Direction::Backward);
  Query q;
  q.owner_ = this;
  q.compiled_ = std::make_shared<CompiledFormula>(in_l, vars);
  q.hash_ = hash_hex(formula_hash(qf));
  q.arity_ = vars.size();
  return q;
}

bool OracleModel::Query::operator()(std::span<const Handle> args) const {
  std::vector<ElementId> els;
  els.reserve(args.size());
  for (Handle h : args) els.push_back(owner_->resolve(h));
  const bool v = compiled_->eval(owner_->frag_, els, owner_->full_);
  owner_->evals_.fetch_add(1, std::memory_order_relaxed);
  if (owner_->log_) {
    std::string line = "EVAL " + hash_;
    for (Handle h : args) line += " " + std::to_string(h);
    owner_->log_->add(line + " -> " + (v ? "1" : "0"));
  }
  return v;
}

bool OracleModel::holds(const Formula& qf, const std::map<std::string, Handle>& binding) const {
  std::vector<std::string> vars;
  std::vector<Handle> args;
  for (const auto& [v, h] : binding) {
    vars.push_back(v);
    args.push_back(h);
  }
  return prepare(qf, vars)(args);
}

void OracleModel::validate() const {
  constexpr long kMargin = 8;
  const auto inner = interior_window(frag_, kMargin);
  if (inner.empty()) throw DictionaryError("fragment too small to validate the dictionary");
  auto try_eval = [&](const CompiledFormula& cf, const std::vector<ElementId>& args) -> std::optional<bool> {
    try {
      return cf.eval(frag_, args, full_);
    } catch (const InteriorViolation&) {
      return std::nullopt;
    }
  };

  // L' constants and functions must denote total functions on the interior.
  for (const auto& c : dict_.target.constants) {
    const auto& def = dict_.backward.at(c);
    CompiledFormula cf(def.body, def.params);
    std::size_t hits = 0;
    for (ElementId x = 0; x < frag_.size(); ++x)
      if (try_eval(cf, {x}).value_or(false)) ++hits;
    if (hits != 1)
      throw DictionaryError("constant " + c + " is satisfied by " + std::to_string(hits) + " elements, not one");
  }
  for (const auto& [f, arity] : dict_.target.functions) {
    const auto& def = dict_.backward.at(f);
    CompiledFormula cf(def.body, def.params);
    std::vector<ElementId> args(static_cast<std::size_t>(arity) + 1);
    // one argument position ranges over the interior, the others are fixed
    // at the first interior element; enough for the unary symbols we meet
    for (ElementId x : inner) {
      std::fill(args.begin(), args.end() - 1, inner.front());
      if (arity > 0) args[0] = x;
      std::size_t hits = 0;
      for (ElementId y = 0; y < frag_.size(); ++y) {
        args.back() = y;
        if (try_eval(cf, args).value_or(false)) ++hits;
      }
      if (hits != 1)
        throw DictionaryError("function " + f + " is not functional and total at " + to_string(frag_, x));
      if (arity == 0) break;
    }
  }

  // Round trip: each L-symbol's L'-definition, read back in L, must mean the symbol.
  const std::size_t stride = std::max<std::size_t>(1, inner.size() / 16);
  for (const auto& [sym, def] : dict_.forward) {
    CompiledFormula back(translate(def.body, dict_, Direction::Backward), def.params);
    for (std::size_t i = 0; i < inner.size(); i += stride) {
      const ElementId x = inner[i];
      auto bad = [&] {
        return DictionaryError("definition of " + sym + " does not round-trip at " + to_string(frag_, x));
      };
      if (def.params.size() == 1) {
        const bool want = sym == "0" ? x == frag_.zero_id() : frag_.label(x);
        if (try_eval(back, {x}) != want) throw bad();
      } else {
        const auto target = frag_.offset(x, sym == "S" ? 1 : -1);
        for (ElementId y = 0; y < frag_.size(); ++y) {
          auto got = try_eval(back, {x, y});
          if (got && *got != (target && *target == y)) throw bad();
        }
      }
    }
  }
  if (dict_.forward.count("0")) {
    CompiledFormula back(translate(dict_.forward.at("0").body, dict_, Direction::Backward), {"x"});
    if (try_eval(back, {frag_.zero_id()}) != true) throw DictionaryError("definition of 0 does not round-trip");
  }
}

namespace harness {

ElementId element_of(const OracleModel& o, Handle h) { return o.resolve(h); }
Handle handle_of(const OracleModel& o, ElementId e) { return o.handle_of_.at(e); }
const ModelFragment& fragment(const OracleModel& o) { return o.frag_; }
const DefDictionary& dictionary(const OracleModel& o) { return o.dict_; }

}  // namespace harness

}  // namespace zchain
