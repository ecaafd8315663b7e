#include "zchain/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <functional>

#include "zchain/error.hpp"

namespace zchain {

// ---------------------------------------------------------------- Signature

Signature Signature::L() {
  return Signature{"L", {"0"}, {{"S", 1}, {"P", 1}}, {{"A", 1}}};
}

bool Signature::has_constant(std::string_view sym) const {
  return std::find(constants.begin(), constants.end(), sym) != constants.end();
}

std::optional<int> Signature::function_arity(std::string_view sym) const {
  for (const auto& [n, a] : functions)
    if (n == sym) return a;
  return std::nullopt;
}

std::optional<int> Signature::relation_arity(std::string_view sym) const {
  for (const auto& [n, a] : relations)
    if (n == sym) return a;
  return std::nullopt;
}

bool Signature::has_symbol(std::string_view sym) const {
  return has_constant(sym) || function_arity(sym) || relation_arity(sym);
}

bool Signature::has_numerals() const {
  return has_constant("0") && function_arity("S") == 1 && function_arity("P") == 1;
}

void Signature::validate() const {
  std::set<std::string> seen;
  auto add = [&](const std::string& s) {
    if (s.empty()) throw SignatureError("empty symbol name in signature " + name);
    if (!seen.insert(s).second) throw SignatureError("duplicate symbol '" + s + "' in signature " + name);
  };
  for (const auto& c : constants) add(c);
  for (const auto& [f, a] : functions) {
    add(f);
    if (a < 1) throw SignatureError("function '" + f + "' must have positive arity");
  }
  for (const auto& [r, a] : relations) {
    add(r);
    if (a < 0) throw SignatureError("relation '" + r + "' has negative arity");
  }
}

// --------------------------------------------------------------------- Term

Term Term::var(std::string name) { return Term{Kind::Var, std::move(name), {}, 0}; }
Term Term::constant(std::string sym) { return Term{Kind::Const, std::move(sym), {}, 0}; }
Term Term::apply(std::string fn, std::vector<Term> args) {
  return Term{Kind::Apply, std::move(fn), std::move(args), 0};
}
Term Term::param(HandleId id) { return Term{Kind::Handle, {}, {}, id}; }

Term shift(Term t, long n) {
  const char* fn = n >= 0 ? "S" : "P";
  for (long i = 0; i < (n >= 0 ? n : -n); ++i) t = Term::apply(fn, {std::move(t)});
  return t;
}

Term numeral(long n) { return shift(Term::constant("0"), n); }

// ------------------------------------------------------------------ Formula

Formula::Formula() : node_(std::make_shared<const Node>()) {}
Formula::Formula(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

Formula Formula::truth() { return Formula(Node{Op::True, {}, {}, {}}); }
Formula Formula::falsity() { return Formula(Node{Op::False, {}, {}, {}}); }
Formula Formula::eq(Term lhs, Term rhs) {
  return Formula(Node{Op::Eq, {}, {std::move(lhs), std::move(rhs)}, {}});
}
Formula Formula::rel(std::string sym, std::vector<Term> args) {
  return Formula(Node{Op::Rel, std::move(sym), std::move(args), {}});
}
Formula Formula::negate(Formula f) { return Formula(Node{Op::Not, {}, {}, {std::move(f)}}); }
Formula Formula::conj(Formula a, Formula b) {
  return Formula(Node{Op::And, {}, {}, {std::move(a), std::move(b)}});
}
Formula Formula::disj(Formula a, Formula b) {
  return Formula(Node{Op::Or, {}, {}, {std::move(a), std::move(b)}});
}
Formula Formula::implies(Formula a, Formula b) {
  return Formula(Node{Op::Implies, {}, {}, {std::move(a), std::move(b)}});
}
Formula Formula::exists(std::string var, Formula body) {
  return Formula(Node{Op::Exists, std::move(var), {}, {std::move(body)}});
}
Formula Formula::forall(std::string var, Formula body) {
  return Formula(Node{Op::Forall, std::move(var), {}, {std::move(body)}});
}

Formula Formula::conj(const std::vector<Formula>& parts) {
  if (parts.empty()) return truth();
  Formula acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = conj(*it, acc);
  return acc;
}

Formula Formula::disj(const std::vector<Formula>& parts) {
  if (parts.empty()) return falsity();
  Formula acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = disj(*it, acc);
  return acc;
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  const Node& a = *node_;
  const Node& b = *other.node_;
  return a.op == b.op && a.symbol == b.symbol && a.terms == b.terms && a.kids == b.kids;
}

// ------------------------------------------------------------------ Printer

namespace {

// n if t is S^n(0) or P^n(0) (negated), for printing as (lit n).
std::optional<long> as_numeral(const Term& t) {
  long n = 0;
  const Term* cur = &t;
  std::string dir;
  while (cur->kind == Term::Kind::Apply && (cur->name == "S" || cur->name == "P") && cur->args.size() == 1) {
    if (dir.empty()) dir = cur->name;
    if (cur->name != dir) return std::nullopt;
    ++n;
    cur = &cur->args[0];
  }
  if (n == 0 || cur->kind != Term::Kind::Const || cur->name != "0") return std::nullopt;
  return dir == "S" ? n : -n;
}

void print_term(const Term& t, std::string& out) {
  switch (t.kind) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      out += t.name;
      return;
    case Term::Kind::Handle:
      out += "(handle " + std::to_string(t.handle) + ")";
      return;
    case Term::Kind::Apply:
      if (auto n = as_numeral(t)) {
        out += "(lit " + std::to_string(*n) + ")";
        return;
      }
      out += "(" + t.name;
      for (const auto& a : t.args) {
        out += ' ';
        print_term(a, out);
      }
      out += ')';
      return;
  }
}

void print_formula(const Formula& f, std::string& out) {
  auto binary = [&](const char* kw) {
    out += "(";
    out += kw;
    for (const auto& k : f.kids()) {
      out += ' ';
      print_formula(k, out);
    }
    out += ')';
  };
  switch (f.op()) {
    case Op::True: out += "true"; return;
    case Op::False: out += "false"; return;
    case Op::Eq:
      out += "(= ";
      print_term(f.terms()[0], out);
      out += ' ';
      print_term(f.terms()[1], out);
      out += ')';
      return;
    case Op::Rel:
      out += "(" + f.symbol();
      for (const auto& t : f.terms()) {
        out += ' ';
        print_term(t, out);
      }
      out += ')';
      return;
    case Op::Not: binary("not"); return;
    case Op::And: binary("and"); return;
    case Op::Or: binary("or"); return;
    case Op::Implies: binary("implies"); return;
    case Op::Exists:
    case Op::Forall:
      out += f.op() == Op::Exists ? "(exists " : "(forall ";
      out += f.symbol() + ' ';
      print_formula(f.child(), out);
      out += ')';
      return;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::string s;
  print_term(t, s);
  return s;
}

std::string to_string(const Formula& f) {
  std::string s;
  print_formula(f, s);
  return s;
}

// ------------------------------------------------------------------- Parser

namespace {

struct Token {
  enum class Kind { Open, Close, Atom, End } kind;
  std::string text;
  std::size_t offset;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : src_(s) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (pos_ >= src_.size()) return {Token::Kind::End, "", pos_};
    const std::size_t start = pos_;
    if (src_[pos_] == '(') return ++pos_, Token{Token::Kind::Open, "(", start};
    if (src_[pos_] == ')') return ++pos_, Token{Token::Kind::Close, ")", start};
    while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_])) && src_[pos_] != '(' &&
           src_[pos_] != ')')
      ++pos_;
    return {Token::Kind::Atom, std::string(src_.substr(start, pos_ - start)), start};
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
};

const std::set<std::string, std::less<>> kKeywords = {"=",      "not",   "and",  "or",     "implies", "exists",
                                                      "forall", "lit",   "handle", "true", "false"};

bool valid_var_name(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : lex_(text), sig_(sig) { advance(); }

  Formula formula() {
    if (tok_.kind == Token::Kind::Atom) {
      if (tok_.text == "true") return advance(), Formula::truth();
      if (tok_.text == "false") return advance(), Formula::falsity();
      throw ParseError("expected formula, got '" + tok_.text + "'", tok_.offset);
    }
    expect_open("formula");
    const Token head = tok_;
    if (head.kind != Token::Kind::Atom) throw ParseError("expected operator", head.offset);
    advance();
    const std::string& op = head.text;
    Formula result;
    if (op == "=") {
      Term a = term();
      Term b = term();
      result = Formula::eq(std::move(a), std::move(b));
    } else if (op == "not") {
      result = Formula::negate(formula());
    } else if (op == "and" || op == "or") {
      std::vector<Formula> parts;
      while (tok_.kind != Token::Kind::Close) parts.push_back(formula());
      if (parts.size() < 2) throw ParseError("'" + op + "' needs at least two operands", head.offset);
      result = op == "and" ? Formula::conj(parts) : Formula::disj(parts);
    } else if (op == "implies") {
      Formula a = formula();
      Formula b = formula();
      result = Formula::implies(std::move(a), std::move(b));
    } else if (op == "exists" || op == "forall") {
      if (tok_.kind != Token::Kind::Atom || !valid_var_name(tok_.text) || sig_.has_symbol(tok_.text) ||
          kKeywords.count(tok_.text))
        throw ParseError("expected variable after '" + op + "'", tok_.offset);
      std::string var = tok_.text;
      advance();
      Formula body = formula();
      result = op == "exists" ? Formula::exists(var, std::move(body)) : Formula::forall(var, std::move(body));
    } else if (auto arity = sig_.relation_arity(op)) {
      std::vector<Term> args;
      while (tok_.kind != Token::Kind::Close) args.push_back(term());
      if (static_cast<int>(args.size()) != *arity)
        throw SignatureError("relation '" + op + "' expects " + std::to_string(*arity) + " arguments, got " +
                             std::to_string(args.size()) + " (offset " + std::to_string(head.offset) + ")");
      result = Formula::rel(op, std::move(args));
    } else {
      throw SignatureError("unknown relation or operator '" + op + "' (offset " + std::to_string(head.offset) + ")");
    }
    expect_close();
    return result;
  }

  Term term() {
    if (tok_.kind == Token::Kind::Atom) {
      Token t = tok_;
      advance();
      if (sig_.has_constant(t.text)) return Term::constant(t.text);
      if (sig_.function_arity(t.text) || sig_.relation_arity(t.text))
        throw SignatureError("symbol '" + t.text + "' used as a term without arguments (offset " +
                             std::to_string(t.offset) + ")");
      if (kKeywords.count(t.text) || !valid_var_name(t.text))
        throw ParseError("'" + t.text + "' is not a term", t.offset);
      return Term::var(t.text);
    }
    expect_open("term");
    const Token head = tok_;
    if (head.kind != Token::Kind::Atom) throw ParseError("expected function symbol", head.offset);
    advance();
    Term result;
    if (head.text == "lit") {
      if (!sig_.has_numerals()) throw SignatureError("(lit n) requires 0, S and P in the signature");
      result = numeral(integer<long>());
    } else if (head.text == "handle") {
      result = Term::param(integer<HandleId>());
    } else if (auto arity = sig_.function_arity(head.text)) {
      std::vector<Term> args;
      while (tok_.kind != Token::Kind::Close) args.push_back(term());
      if (static_cast<int>(args.size()) != *arity)
        throw SignatureError("function '" + head.text + "' expects " + std::to_string(*arity) +
                             " arguments, got " + std::to_string(args.size()) + " (offset " +
                             std::to_string(head.offset) + ")");
      result = Term::apply(head.text, std::move(args));
    } else {
      throw SignatureError("unknown function symbol '" + head.text + "' (offset " + std::to_string(head.offset) +
                           ")");
    }
    expect_close();
    return result;
  }

  void finish() {
    if (tok_.kind != Token::Kind::End) throw ParseError("trailing input", tok_.offset);
  }

 private:
  template <class Int>
  Int integer() {
    if (tok_.kind != Token::Kind::Atom) throw ParseError("expected integer", tok_.offset);
    Int value{};
    const auto* first = tok_.text.data();
    const auto* last = first + tok_.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) throw ParseError("expected integer, got '" + tok_.text + "'", tok_.offset);
    advance();
    return value;
  }

  void advance() { tok_ = lex_.next(); }
  void expect_open(const char* what) {
    if (tok_.kind != Token::Kind::Open)
      throw ParseError(std::string("expected ") + what + (tok_.kind == Token::Kind::End ? ", got end of input" : ""),
                       tok_.offset);
    advance();
  }
  void expect_close() {
    if (tok_.kind != Token::Kind::Close) throw ParseError("expected ')'", tok_.offset);
    advance();
  }

  Lexer lex_;
  const Signature& sig_;
  Token tok_{Token::Kind::End, "", 0};
};

}  // namespace

Formula parse(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Formula f = p.formula();
  p.finish();
  return f;
}

Term parse_term(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Term t = p.term();
  p.finish();
  return t;
}

// ------------------------------------------------------------ Inspection

namespace {

void check_term(const Term& t, const Signature& sig) {
  switch (t.kind) {
    case Term::Kind::Var:
    case Term::Kind::Handle:
      return;
    case Term::Kind::Const:
      if (!sig.has_constant(t.name)) throw SignatureError("unknown constant '" + t.name + "' for " + sig.name);
      return;
    case Term::Kind::Apply: {
      auto a = sig.function_arity(t.name);
      if (!a) throw SignatureError("unknown function '" + t.name + "' for " + sig.name);
      if (*a != static_cast<int>(t.args.size())) throw SignatureError("arity mismatch for '" + t.name + "'");
      for (const auto& x : t.args) check_term(x, sig);
      return;
    }
  }
}

void collect_term_vars(const Term& t, const std::set<std::string>& bound, std::vector<std::string>& out,
                       std::set<std::string>& seen) {
  if (t.kind == Term::Kind::Var) {
    if (!bound.count(t.name) && seen.insert(t.name).second) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_term_vars(a, bound, out, seen);
}

void collect_free(const Formula& f, std::set<std::string>& bound, std::vector<std::string>& out,
                  std::set<std::string>& seen) {
  for (const auto& t : f.terms()) collect_term_vars(t, bound, out, seen);
  if (f.is_quantifier()) {
    const bool fresh = bound.insert(f.symbol()).second;
    collect_free(f.child(), bound, out, seen);
    if (fresh) bound.erase(f.symbol());
    return;
  }
  for (const auto& k : f.kids()) collect_free(k, bound, out, seen);
}

void term_names(const Term& t, std::set<std::string>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.name);
  for (const auto& a : t.args) term_names(a, out);
}

void term_handles(const Term& t, std::vector<HandleId>& out) {
  if (t.kind == Term::Kind::Handle && std::find(out.begin(), out.end(), t.handle) == out.end())
    out.push_back(t.handle);
  for (const auto& a : t.args) term_handles(a, out);
}

}  // namespace

void check_signature(const Formula& f, const Signature& sig) {
  switch (f.op()) {
    case Op::Rel: {
      auto a = sig.relation_arity(f.symbol());
      if (!a) throw SignatureError("unknown relation '" + f.symbol() + "' for " + sig.name);
      if (*a != static_cast<int>(f.terms().size())) throw SignatureError("arity mismatch for '" + f.symbol() + "'");
      break;
    }
    default:
      break;
  }
  for (const auto& t : f.terms()) check_term(t, sig);
  for (const auto& k : f.kids()) check_signature(k, sig);
}

std::vector<std::string> free_variables(const Formula& f) {
  std::vector<std::string> out;
  std::set<std::string> bound, seen;
  collect_free(f, bound, out, seen);
  return out;
}

std::set<std::string> variable_names(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    for (const auto& t : g.terms()) term_names(t, out);
    if (g.is_quantifier()) out.insert(g.symbol());
    for (const auto& k : g.kids()) walk(k);
  };
  walk(f);
  return out;
}

std::vector<HandleId> handles_in(const Formula& f) {
  std::vector<HandleId> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    for (const auto& t : g.terms()) term_handles(t, out);
    for (const auto& k : g.kids()) walk(k);
  };
  walk(f);
  return out;
}

bool is_quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  return std::all_of(f.kids().begin(), f.kids().end(), [](const Formula& k) { return is_quantifier_free(k); });
}

std::size_t quantifier_count(const Formula& f) {
  std::size_t n = f.is_quantifier() ? 1 : 0;
  for (const auto& k : f.kids()) n += quantifier_count(k);
  return n;
}

std::string fresh_name(const std::string& base, std::set<std::string>& used) {
  for (std::size_t k = 1;; ++k) {
    std::string cand = base + std::to_string(k);
    if (used.insert(cand).second) return cand;
  }
}

// ------------------------------------------------------------ Substitution

Term substitute(const Term& t, const std::map<std::string, Term>& sub) {
  if (t.kind == Term::Kind::Var) {
    auto it = sub.find(t.name);
    return it == sub.end() ? t : it->second;
  }
  if (t.kind != Term::Kind::Apply) return t;
  std::vector<Term> args;
  args.reserve(t.args.size());
  for (const auto& a : t.args) args.push_back(substitute(a, sub));
  return Term::apply(t.name, std::move(args));
}

namespace {

Formula substitute_impl(const Formula& f, const std::map<std::string, Term>& sub, std::set<std::string>& used,
                        const std::set<std::string>& incoming) {
  switch (f.op()) {
    case Op::True:
    case Op::False:
      return f;
    case Op::Eq:
      return Formula::eq(substitute(f.terms()[0], sub), substitute(f.terms()[1], sub));
    case Op::Rel: {
      std::vector<Term> args;
      for (const auto& t : f.terms()) args.push_back(substitute(t, sub));
      return Formula::rel(f.symbol(), std::move(args));
    }
    case Op::Not:
      return Formula::negate(substitute_impl(f.child(), sub, used, incoming));
    case Op::And:
      return Formula::conj(substitute_impl(f.child(0), sub, used, incoming),
                           substitute_impl(f.child(1), sub, used, incoming));
    case Op::Or:
      return Formula::disj(substitute_impl(f.child(0), sub, used, incoming),
                           substitute_impl(f.child(1), sub, used, incoming));
    case Op::Implies:
      return Formula::implies(substitute_impl(f.child(0), sub, used, incoming),
                              substitute_impl(f.child(1), sub, used, incoming));
    case Op::Exists:
    case Op::Forall: {
      std::map<std::string, Term> inner = sub;
      inner.erase(f.symbol());
      std::string var = f.symbol();
      if (incoming.count(var)) {
        // The bound variable would capture a substituted term.
        std::string renamed = fresh_name(var, used);
        inner[var] = Term::var(renamed);
        var = renamed;
      }
      Formula body = substitute_impl(f.child(), inner, used, incoming);
      return f.op() == Op::Exists ? Formula::exists(var, std::move(body)) : Formula::forall(var, std::move(body));
    }
  }
  return f;
}

}  // namespace

Formula substitute(const Formula& f, const std::map<std::string, Term>& sub) {
  std::set<std::string> used = variable_names(f);
  std::set<std::string> incoming;
  for (const auto& [k, t] : sub) {
    used.insert(k);
    term_names(t, incoming);
  }
  used.insert(incoming.begin(), incoming.end());
  return substitute_impl(f, sub, used, incoming);
}

// -------------------------------------------------------------------- Hash

std::uint64_t formula_hash(const Formula& f) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_string(f)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace zchain
