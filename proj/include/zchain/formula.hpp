#pragma once

// First-order terms and formulas over a finite signature, with an
// s-expression reader/printer.
//
//   formula := true | false | (= term term) | (REL term...) | (not f)
//            | (and f f...) | (or f f...) | (implies f f)
//            | (exists var f) | (forall var f)
//   term    := var | CONST | (FN term...) | (lit n) | (handle id)
//
// `(lit n)` is the numeral S^n(0) (P^|n|(0) for negative n) and is only
// available in signatures that have 0, S and P. n-ary `and`/`or` are folded
// to the right; the printer always emits the binary form.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace zchain {

struct Signature {
  std::string name;
  std::vector<std::string> constants;
  std::vector<std::pair<std::string, int>> functions;
  std::vector<std::pair<std::string, int>> relations;

  /// The fixed language {0; S/1, P/1; A/1}.
  static Signature L();

  bool has_constant(std::string_view sym) const;
  std::optional<int> function_arity(std::string_view sym) const;
  std::optional<int> relation_arity(std::string_view sym) const;
  bool has_symbol(std::string_view sym) const;
  /// True when 0, S and P are all present (numerals are available).
  bool has_numerals() const;

  /// Throws SignatureError on duplicate names or negative arities.
  void validate() const;

  bool operator==(const Signature&) const = default;
};

/// Opaque element reference inside a formula. Its meaning depends on the
/// structure the formula is evaluated in (fragment element id, oracle handle).
using HandleId = std::uint64_t;

struct Term {
  enum class Kind : std::uint8_t { Var, Const, Apply, Handle };

  Kind kind = Kind::Var;
  std::string name;
  std::vector<Term> args;
  HandleId handle = 0;

  static Term var(std::string name);
  static Term constant(std::string sym);
  static Term apply(std::string fn, std::vector<Term> args);
  static Term param(HandleId id);

  bool operator==(const Term&) const = default;
};

/// n̄ in L: S^n(0), or P^|n|(0) when n < 0.
Term numeral(long n);
/// t + n̄ in L: S^n(t), or P^|n|(t) when n < 0.
Term shift(Term t, long n);

enum class Op : std::uint8_t { True, False, Eq, Rel, Not, And, Or, Implies, Exists, Forall };

/// Immutable formula tree. Copies share structure.
class Formula {
 public:
  struct Node {
    Op op = Op::True;
    std::string symbol;  // relation name or quantified variable
    std::vector<Term> terms;
    std::vector<Formula> kids;
  };

  Formula();

  static Formula truth();
  static Formula falsity();
  static Formula eq(Term lhs, Term rhs);
  static Formula rel(std::string sym, std::vector<Term> args);
  static Formula negate(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);
  /// Right-folded conjunction; empty list is `true`.
  static Formula conj(const std::vector<Formula>& parts);
  /// Right-folded disjunction; empty list is `false`.
  static Formula disj(const std::vector<Formula>& parts);

  Op op() const { return node_->op; }
  const std::string& symbol() const { return node_->symbol; }
  const std::vector<Term>& terms() const { return node_->terms; }
  const std::vector<Formula>& kids() const { return node_->kids; }
  const Formula& child(std::size_t i = 0) const { return node_->kids.at(i); }

  bool is_quantifier() const { return op() == Op::Exists || op() == Op::Forall; }

  bool operator==(const Formula& other) const;

 private:
  explicit Formula(Node n);
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Term& t);
std::string to_string(const Formula& f);

Term parse_term(std::string_view text, const Signature& sig);
Formula parse(std::string_view text, const Signature& sig);

/// Throws SignatureError if some symbol is unknown or misapplied.
void check_signature(const Formula& f, const Signature& sig);

/// Free variables in order of first occurrence.
std::vector<std::string> free_variables(const Formula& f);
/// Every variable name occurring anywhere (free or bound).
std::set<std::string> variable_names(const Formula& f);
std::vector<HandleId> handles_in(const Formula& f);
bool is_quantifier_free(const Formula& f);
std::size_t quantifier_count(const Formula& f);

/// Capture-avoiding simultaneous substitution of free variables.
Formula substitute(const Formula& f, const std::map<std::string, Term>& sub);
Term substitute(const Term& t, const std::map<std::string, Term>& sub);

/// Stable 64-bit FNV-1a hash of the canonical text.
std::uint64_t formula_hash(const Formula& f);
std::string hash_hex(std::uint64_t h);

/// Returns base, base1, base2, ... skipping anything in `used`; inserts the result.
std::string fresh_name(const std::string& base, std::set<std::string>& used);

}  // namespace zchain
