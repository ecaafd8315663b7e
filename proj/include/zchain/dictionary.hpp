#pragma once

// Definitional dictionaries: the two-way symbol-to-formula maps that witness
// a definitional equivalence between L and some finite L'.
//
// File format (one entry per line, '#' starts a comment):
//
//   name: identity
//   signature: const 0'; func S' 1; func P' 1; rel A' 1
//   forward 0 (x) := (= x 0')
//   forward S (x y) := (= (S' x) y)
//   backward S' (x y) := (= (S x) y)
//   ...
//
// A constant c is defined by a formula in one parameter (x = c), a k-ary
// function f by a formula in k+1 parameters (f(x1..xk) = y), a k-ary relation
// by a formula in k parameters.

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "zchain/formula.hpp"

namespace zchain {

struct Definition {
  std::vector<std::string> params;
  Formula body;
};

struct DefDictionary {
  std::string name;
  Signature source = Signature::L();
  Signature target;
  std::map<std::string, Definition> forward;   // L symbol  -> L'-formula
  std::map<std::string, Definition> backward;  // L' symbol -> L-formula

  /// Every symbol on both sides defined, with the right parameter count, and
  /// every body well-formed in the opposite signature.
  void validate() const;
};

enum class Direction { Forward, Backward };  // Forward: L -> L', Backward: L' -> L

/// Replaces every symbol by its definition. Definitions of the shape
/// `f(x̄) = y` with a term on one side are substituted as terms; any other
/// function or constant occurrence is flattened into fresh existentially
/// bound variables z1, z2, ... (innermost first, left to right).
Formula translate(const Formula& f, const DefDictionary& d, Direction dir);

/// Radius of a prenex L'-formula: the quantifier-free matrix contributes the
/// radius of its prenexed L-translation; each quantifier doubles.
std::size_t radius(const Formula& f, const DefDictionary& d);

DefDictionary parse_dictionary(std::string_view text);
DefDictionary load_dictionary(const std::filesystem::path& path);
std::string to_string(const DefDictionary& d);

/// identity, swap, ashift, relational, exists-succ.
DefDictionary builtin_dictionary(std::string_view name);
std::vector<std::string> builtin_dictionary_names();

/// The L'-definition of an L-symbol as a formula over the given variables.
Formula forward_definition(const DefDictionary& d, const std::string& symbol, const std::vector<std::string>& vars);

}  // namespace zchain
