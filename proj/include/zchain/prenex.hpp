#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "zchain/formula.hpp"

namespace zchain {

/// Rewrites `a -> b` as `(not a) or b` everywhere.
Formula desugar(const Formula& f);

/// Prenex normal form. Implications are desugared first, then quantifiers
/// are pulled out leftmost-outermost; every bound variable `v` is renamed to
/// `v<k>` with one counter shared by the whole formula (k = 0, 1, ...), so
/// the output is a deterministic function of the input text.
Formula to_prenex(const Formula& f);

bool is_prenex(const Formula& f);

struct PrenexParts {
  std::vector<std::pair<Op, std::string>> prefix;  // outermost first
  Formula matrix;
};

/// Throws NotPrenex if `f` is not in prenex form.
PrenexParts split_prenex(const Formula& f);
Formula join_prenex(const PrenexParts& parts);

/// Number of occurrences of the function symbols S and P.
std::size_t successor_symbol_count(const Formula& f);

/// Radius of a prenex L-formula: S/P count of the matrix, doubled per
/// quantifier. Throws NotPrenex otherwise.
std::size_t radius(const Formula& f);

}  // namespace zchain
