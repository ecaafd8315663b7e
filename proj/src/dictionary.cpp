#include "zchain/dictionary.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "zchain/error.hpp"
#include "zchain/prenex.hpp"

namespace zchain {

namespace {

std::size_t expected_params(const Signature& sig, const std::string& sym) {
  if (sig.has_constant(sym)) return 1;
  if (auto a = sig.function_arity(sym)) return static_cast<std::size_t>(*a) + 1;
  if (auto a = sig.relation_arity(sym)) return static_cast<std::size_t>(*a);
  throw DictionaryError("symbol '" + sym + "' is not in signature " + sig.name);
}

std::vector<std::string> all_symbols(const Signature& sig) {
  std::vector<std::string> out = sig.constants;
  for (const auto& [f, a] : sig.functions) out.push_back(f);
  for (const auto& [r, a] : sig.relations) out.push_back(r);
  return out;
}

bool term_has_var(const Term& t, const std::string& v) {
  if (t.kind == Term::Kind::Var) return t.name == v;
  return std::any_of(t.args.begin(), t.args.end(), [&](const Term& a) { return term_has_var(a, v); });
}

bool term_vars_within(const Term& t, const std::vector<std::string>& allowed) {
  if (t.kind == Term::Kind::Var) return std::find(allowed.begin(), allowed.end(), t.name) != allowed.end();
  return std::all_of(t.args.begin(), t.args.end(), [&](const Term& a) { return term_vars_within(a, allowed); });
}

// If `def` has the shape out = τ(inputs) (either orientation), returns τ.
std::optional<Term> term_definition(const Definition& def) {
  if (def.body.op() != Op::Eq || def.params.empty()) return std::nullopt;
  const std::string& out = def.params.back();
  const std::vector<std::string> inputs(def.params.begin(), def.params.end() - 1);
  for (int side = 0; side < 2; ++side) {
    const Term& lhs = def.body.terms()[side];
    const Term& rhs = def.body.terms()[1 - side];
    if (lhs.kind == Term::Kind::Var && lhs.name == out && !term_has_var(rhs, out) && term_vars_within(rhs, inputs))
      return rhs;
  }
  return std::nullopt;
}

class Translator {
 public:
  Translator(const std::map<std::string, Definition>& defs, std::set<std::string> used)
      : defs_(defs), used_(std::move(used)) {}

  Formula formula(const Formula& f) {
    switch (f.op()) {
      case Op::True:
      case Op::False:
        return f;
      case Op::Eq: {
        Atom atom;
        Term a = term(f.terms()[0], atom);
        Term b = term(f.terms()[1], atom);
        return atom.wrap(Formula::eq(std::move(a), std::move(b)));
      }
      case Op::Rel: {
        Atom atom;
        std::vector<Term> args;
        for (const auto& t : f.terms()) args.push_back(term(t, atom));
        const Definition& def = lookup(f.symbol());
        return atom.wrap(instantiate(def, args));
      }
      case Op::Not:
        return Formula::negate(formula(f.child()));
      case Op::And:
        return Formula::conj(formula(f.child(0)), formula(f.child(1)));
      case Op::Or:
        return Formula::disj(formula(f.child(0)), formula(f.child(1)));
      case Op::Implies:
        return Formula::implies(formula(f.child(0)), formula(f.child(1)));
      case Op::Exists:
        return Formula::exists(f.symbol(), formula(f.child()));
      case Op::Forall:
        return Formula::forall(f.symbol(), formula(f.child()));
    }
    return f;
  }

 private:
  struct Atom {
    std::vector<std::string> vars;
    std::vector<Formula> constraints;

    Formula wrap(Formula core) const {
      if (vars.empty()) return core;
      std::vector<Formula> parts = constraints;
      parts.push_back(std::move(core));
      Formula acc = Formula::conj(parts);
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) acc = Formula::exists(*it, acc);
      return acc;
    }
  };

  const Definition& lookup(const std::string& sym) const {
    auto it = defs_.find(sym);
    if (it == defs_.end()) throw DictionaryError("symbol '" + sym + "' missing from dictionary");
    return it->second;
  }

  Formula instantiate(const Definition& def, const std::vector<Term>& args) {
    std::map<std::string, Term> sub;
    for (std::size_t i = 0; i < args.size(); ++i) sub.emplace(def.params[i], args[i]);
    return substitute(def.body, sub);
  }

  Term term(const Term& t, Atom& atom) {
    switch (t.kind) {
      case Term::Kind::Var:
      case Term::Kind::Handle:
        return t;
      case Term::Kind::Const:
      case Term::Kind::Apply: {
        std::vector<Term> args;
        for (const auto& a : t.args) args.push_back(term(a, atom));
        const Definition& def = lookup(t.name);
        if (auto tau = term_definition(def)) {
          std::map<std::string, Term> sub;
          for (std::size_t i = 0; i < args.size(); ++i) sub.emplace(def.params[i], args[i]);
          return substitute(*tau, sub);
        }
        std::string z = fresh_name("z", used_);
        args.push_back(Term::var(z));
        atom.vars.push_back(z);
        atom.constraints.push_back(instantiate(def, args));
        return Term::var(z);
      }
    }
    return t;
  }

  const std::map<std::string, Definition>& defs_;
  std::set<std::string> used_;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

Signature parse_signature_line(const std::string& name, const std::string& spec) {
  Signature sig;
  sig.name = name;
  std::stringstream parts(spec);
  std::string item;
  while (std::getline(parts, item, ';')) {
    std::istringstream in(trim(item));
    std::string kind, sym;
    if (!(in >> kind)) continue;
    if (!(in >> sym)) throw DictionaryError("signature entry '" + item + "' lacks a symbol");
    if (kind == "const") {
      sig.constants.push_back(sym);
    } else if (kind == "func" || kind == "rel") {
      int arity = -1;
      if (!(in >> arity)) throw DictionaryError("signature entry '" + item + "' lacks an arity");
      (kind == "func" ? sig.functions : sig.relations).emplace_back(sym, arity);
    } else {
      throw DictionaryError("unknown signature entry kind '" + kind + "'");
    }
  }
  sig.validate();
  return sig;
}

std::string signature_line(const Signature& sig) {
  std::vector<std::string> items;
  for (const auto& c : sig.constants) items.push_back("const " + c);
  for (const auto& [f, a] : sig.functions) items.push_back("func " + f + " " + std::to_string(a));
  for (const auto& [r, a] : sig.relations) items.push_back("rel " + r + " " + std::to_string(a));
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? "; " : "") + items[i];
  return out;
}

}  // namespace

void DefDictionary::validate() const {
  source.validate();
  target.validate();
  auto check_side = [](const Signature& from, const Signature& to, const std::map<std::string, Definition>& defs,
                       const char* side) {
    for (const auto& sym : all_symbols(from)) {
      auto it = defs.find(sym);
      if (it == defs.end()) throw DictionaryError(std::string(side) + " definition missing for '" + sym + "'");
      const Definition& def = it->second;
      if (def.params.size() != expected_params(from, sym))
        throw DictionaryError("definition of '" + sym + "' has wrong parameter count");
      check_signature(def.body, to);
      for (const auto& v : free_variables(def.body))
        if (std::find(def.params.begin(), def.params.end(), v) == def.params.end())
          throw DictionaryError("definition of '" + sym + "' has stray free variable '" + v + "'");
    }
    for (const auto& [sym, def] : defs)
      if (!from.has_symbol(sym)) throw DictionaryError(std::string(side) + " definition for unknown '" + sym + "'");
  };
  check_side(source, target, forward, "forward");
  check_side(target, source, backward, "backward");
}

Formula translate(const Formula& f, const DefDictionary& d, Direction dir) {
  const auto& defs = dir == Direction::Forward ? d.forward : d.backward;
  std::set<std::string> used = variable_names(f);
  for (const auto& [sym, def] : defs) {
    auto names = variable_names(def.body);
    used.insert(names.begin(), names.end());
  }
  return Translator(defs, std::move(used)).formula(f);
}

std::size_t radius(const Formula& f, const DefDictionary& d) {
  PrenexParts parts = split_prenex(f);
  Formula matrix_in_l = to_prenex(translate(parts.matrix, d, Direction::Backward));
  return radius(matrix_in_l) << parts.prefix.size();
}

Formula forward_definition(const DefDictionary& d, const std::string& symbol, const std::vector<std::string>& vars) {
  auto it = d.forward.find(symbol);
  if (it == d.forward.end()) throw DictionaryError("no forward definition for '" + symbol + "'");
  if (vars.size() != it->second.params.size()) throw DictionaryError("wrong variable count for '" + symbol + "'");
  std::map<std::string, Term> sub;
  for (std::size_t i = 0; i < vars.size(); ++i) sub.emplace(it->second.params[i], Term::var(vars[i]));
  return substitute(it->second.body, sub);
}

DefDictionary parse_dictionary(std::string_view text) {
  DefDictionary d;
  struct Pending {
    bool forward;
    std::string sym;
    std::vector<std::string> params;
    std::string body;
    std::size_t line;
  };
  std::vector<Pending> pending;
  bool have_sig = false;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    auto where = [&] { return " (line " + std::to_string(lineno) + ")"; };
    if (line.rfind("name:", 0) == 0) {
      d.name = trim(line.substr(5));
    } else if (line.rfind("signature:", 0) == 0) {
      d.target = parse_signature_line("L'", trim(line.substr(10)));
      have_sig = true;
    } else if (line.rfind("forward ", 0) == 0 || line.rfind("backward ", 0) == 0) {
      const bool fwd = line[0] == 'f';
      const auto assign = line.find(":=");
      const auto open = line.find('(');
      const auto close = line.find(')');
      if (assign == std::string::npos || open == std::string::npos || close == std::string::npos || close > assign)
        throw DictionaryError("malformed definition" + where());
      std::string head = trim(line.substr(fwd ? 8 : 9, open - (fwd ? 8 : 9)));
      std::istringstream ps(line.substr(open + 1, close - open - 1));
      std::vector<std::string> params;
      for (std::string p; ps >> p;) params.push_back(p);
      pending.push_back({fwd, head, params, trim(line.substr(assign + 2)), lineno});
    } else {
      throw DictionaryError("unrecognised line" + where() + ": " + line);
    }
  }
  if (d.name.empty()) throw DictionaryError("dictionary lacks a 'name:' header");
  if (!have_sig) throw DictionaryError("dictionary lacks a 'signature:' line");
  for (const auto& p : pending) {
    const Signature& body_sig = p.forward ? d.target : d.source;
    Formula body;
    try {
      body = parse(p.body, body_sig);
    } catch (const Error& e) {
      throw DictionaryError("definition of '" + p.sym + "' (line " + std::to_string(p.line) + "): " + e.what());
    }
    auto& side = p.forward ? d.forward : d.backward;
    if (!side.emplace(p.sym, Definition{p.params, body}).second)
      throw DictionaryError("duplicate definition of '" + p.sym + "'");
  }
  d.validate();
  return d;
}

DefDictionary load_dictionary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read dictionary file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_dictionary(ss.str());
}

std::string to_string(const DefDictionary& d) {
  std::string out = "name: " + d.name + "\nsignature: " + signature_line(d.target) + "\n";
  auto emit = [&](const char* kw, const std::map<std::string, Definition>& defs) {
    for (const auto& [sym, def] : defs) {
      out += std::string(kw) + " " + sym + " (";
      for (std::size_t i = 0; i < def.params.size(); ++i) out += (i ? " " : "") + def.params[i];
      out += ") := " + to_string(def.body) + "\n";
    }
  };
  emit("forward", d.forward);
  emit("backward", d.backward);
  return out;
}

namespace {

constexpr std::string_view kPrimedSignature = "signature: const 0'; func S' 1; func P' 1; rel A' 1\n";

std::string builtin_text(std::string_view name) {
  if (name == "identity")
    return std::string("name: identity\n") + std::string(kPrimedSignature) +
           "forward 0 (x) := (= x 0')\n"
           "forward S (x y) := (= (S' x) y)\n"
           "forward P (x y) := (= (P' x) y)\n"
           "forward A (x) := (A' x)\n"
           "backward 0' (x) := (= x 0)\n"
           "backward S' (x y) := (= (S x) y)\n"
           "backward P' (x y) := (= (P x) y)\n"
           "backward A' (x) := (A x)\n";
  if (name == "swap")
    return std::string("name: swap\n") + std::string(kPrimedSignature) +
           "forward 0 (x) := (= x 0')\n"
           "forward S (x y) := (= (P' x) y)\n"
           "forward P (x y) := (= (S' x) y)\n"
           "forward A (x) := (A' x)\n"
           "backward 0' (x) := (= x 0)\n"
           "backward S' (x y) := (= (P x) y)\n"
           "backward P' (x y) := (= (S x) y)\n"
           "backward A' (x) := (A x)\n";
  if (name == "ashift")
    return std::string("name: ashift\n") + std::string(kPrimedSignature) +
           "forward 0 (x) := (= x 0')\n"
           "forward S (x y) := (= (S' x) y)\n"
           "forward P (x y) := (= (P' x) y)\n"
           "forward A (x) := (A' (P' (P' x)))\n"
           "backward 0' (x) := (= x 0)\n"
           "backward S' (x y) := (= (S x) y)\n"
           "backward P' (x y) := (= (P x) y)\n"
           "backward A' (x) := (A (S (S x)))\n";
  if (name == "relational")
    return "name: relational\n"
           "signature: const 0'; rel Succ 2; rel Pred 2; rel A' 1\n"
           "forward 0 (x) := (= x 0')\n"
           "forward S (x y) := (Succ x y)\n"
           "forward P (x y) := (Pred x y)\n"
           "forward A (x) := (A' x)\n"
           "backward 0' (x) := (= x 0)\n"
           "backward Succ (x y) := (= (S x) y)\n"
           "backward Pred (x y) := (= (P x) y)\n"
           "backward A' (x) := (A x)\n";
  if (name == "exists-succ")
    return "name: exists-succ\n"
           "signature: const 0'; func P' 1; rel A' 1\n"
           "forward 0 (x) := (= x 0')\n"
           "forward S (x y) := (exists w (and (= w y) (= (P' w) x)))\n"
           "forward P (x y) := (= (P' x) y)\n"
           "forward A (x) := (A' x)\n"
           "backward 0' (x) := (= x 0)\n"
           "backward P' (x y) := (= (P x) y)\n"
           "backward A' (x) := (A x)\n";
  throw DictionaryError("unknown built-in dictionary '" + std::string(name) + "'");
}

}  // namespace

DefDictionary builtin_dictionary(std::string_view name) { return parse_dictionary(builtin_text(name)); }

std::vector<std::string> builtin_dictionary_names() {
  return {"identity", "swap", "ashift", "relational", "exists-succ"};
}

}  // namespace zchain
