#include "zchain/prenex.hpp"

#include <map>
#include <set>

#include "zchain/error.hpp"

namespace zchain {

Formula desugar(const Formula& f) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
    case Op::Eq:
    case Op::Rel:
      return f;
    case Op::Not:
      return Formula::negate(desugar(f.child()));
    case Op::And:
      return Formula::conj(desugar(f.child(0)), desugar(f.child(1)));
    case Op::Or:
      return Formula::disj(desugar(f.child(0)), desugar(f.child(1)));
    case Op::Implies:
      return Formula::disj(Formula::negate(desugar(f.child(0))), desugar(f.child(1)));
    case Op::Exists:
      return Formula::exists(f.symbol(), desugar(f.child()));
    case Op::Forall:
      return Formula::forall(f.symbol(), desugar(f.child()));
  }
  return f;
}

namespace {

class Prenexer {
 public:
  explicit Prenexer(const Formula& f) : used_(variable_names(f)) {}

  PrenexParts run(const Formula& f, const std::map<std::string, Term>& env) {
    switch (f.op()) {
      case Op::True:
      case Op::False:
        return {{}, f};
      case Op::Eq:
      case Op::Rel:
        return {{}, substitute(f, env)};
      case Op::Not: {
        PrenexParts inner = run(f.child(), env);
        for (auto& [q, v] : inner.prefix) q = q == Op::Exists ? Op::Forall : Op::Exists;
        inner.matrix = Formula::negate(inner.matrix);
        return inner;
      }
      case Op::And:
      case Op::Or: {
        PrenexParts left = run(f.child(0), env);
        PrenexParts right = run(f.child(1), env);
        left.prefix.insert(left.prefix.end(), right.prefix.begin(), right.prefix.end());
        left.matrix = f.op() == Op::And ? Formula::conj(left.matrix, right.matrix)
                                        : Formula::disj(left.matrix, right.matrix);
        return left;
      }
      case Op::Implies:
        return run(desugar(f), env);
      case Op::Exists:
      case Op::Forall: {
        const std::string renamed = fresh(f.symbol());
        auto inner_env = env;
        inner_env[f.symbol()] = Term::var(renamed);
        PrenexParts inner = run(f.child(), inner_env);
        inner.prefix.insert(inner.prefix.begin(), {f.op(), renamed});
        return inner;
      }
    }
    return {{}, f};
  }

 private:
  std::string fresh(const std::string& base) {
    for (;;) {
      std::string cand = base + std::to_string(counter_++);
      if (used_.insert(cand).second) return cand;
    }
  }

  std::set<std::string> used_;
  std::size_t counter_ = 0;
};

std::size_t count_term(const Term& t) {
  std::size_t n = t.kind == Term::Kind::Apply && (t.name == "S" || t.name == "P") ? 1 : 0;
  for (const auto& a : t.args) n += count_term(a);
  return n;
}

}  // namespace

Formula to_prenex(const Formula& f) {
  if (is_quantifier_free(f)) return desugar(f);
  Prenexer p(f);
  return join_prenex(p.run(desugar(f), {}));
}

bool is_prenex(const Formula& f) {
  const Formula* cur = &f;
  while (cur->is_quantifier()) cur = &cur->child();
  return is_quantifier_free(*cur);
}

PrenexParts split_prenex(const Formula& f) {
  PrenexParts parts;
  const Formula* cur = &f;
  while (cur->is_quantifier()) {
    parts.prefix.emplace_back(cur->op(), cur->symbol());
    cur = &cur->child();
  }
  if (!is_quantifier_free(*cur)) throw NotPrenex("formula is not in prenex form: " + to_string(f));
  parts.matrix = *cur;
  return parts;
}

Formula join_prenex(const PrenexParts& parts) {
  Formula acc = parts.matrix;
  for (auto it = parts.prefix.rbegin(); it != parts.prefix.rend(); ++it)
    acc = it->first == Op::Exists ? Formula::exists(it->second, acc) : Formula::forall(it->second, acc);
  return acc;
}

std::size_t successor_symbol_count(const Formula& f) {
  std::size_t n = 0;
  for (const auto& t : f.terms()) n += count_term(t);
  for (const auto& k : f.kids()) n += successor_symbol_count(k);
  return n;
}

std::size_t radius(const Formula& f) {
  PrenexParts parts = split_prenex(f);
  return successor_symbol_count(parts.matrix) << parts.prefix.size();
}

}  // namespace zchain
