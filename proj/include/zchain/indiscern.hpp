#pragma once

// Tuples with the same r-type (r = radius of the formula) satisfy the same
// L-formulas. The checker tests this on a fragment; satisfying_rtypes and
// rtype_to_formula turn it into quantifier elimination.
//
// Quantifiers range over the given window. Only tuples whose r-windows lie
// inside the window are tested, and 0's r-window must lie inside it too.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "zchain/error.hpp"
#include "zchain/eval.hpp"
#include "zchain/formula.hpp"
#include "zchain/model.hpp"

namespace zchain {

struct IndiscernOptions {
  /// Evaluate every tested tuple when there are at most this many;
  /// otherwise evaluate a seeded selection of about this many, spread over
  /// the realized r-types.
  std::size_t max_evals = 4000;
  std::uint64_t seed = 1;
};

struct Violation {
  std::vector<ElementId> a, b;
  bool value_a = false, value_b = false;
};

struct IndiscernReport {
  Formula formula;
  std::vector<std::string> vars;
  long r = 0;
  std::size_t tuples_tested = 0;
  std::size_t tuples_evaluated = 0;
  std::size_t types_seen = 0;
  std::size_t pairs_checked = 0;  // same-type pairs whose truth values were compared
  bool sampled = false;
  std::vector<Violation> violations;
  std::vector<std::string> warnings;

  bool ok() const { return violations.empty(); }
};

/// `f` must be a prenex L-formula. Free variables in order of first occurrence.
IndiscernReport check_indiscernability(const ModelFragment& m, const Formula& f, const Window& window,
                                       const IndiscernOptions& opt = {});

class IndiscernabilityAbort : public Error {
 public:
  IndiscernabilityAbort(const std::string& what, Violation v) : Error(what), violation_(std::move(v)) {}
  const Violation& violation() const { return violation_; }

 private:
  Violation violation_;
};

/// Elements whose r-window lies inside the window.
std::vector<ElementId> deep_points(const ModelFragment& m, const Window& window, long r);

/// The r-types (r = radius(f)) of tested tuples that satisfy f, sorted.
/// Every tested tuple is evaluated; a same-type disagreement throws
/// IndiscernabilityAbort.
std::vector<RType> satisfying_rtypes(const ModelFragment& m, const Formula& f, const std::vector<std::string>& vars,
                                     const Window& window);

/// Conjunction of literals x_i = k, x_j = x_i + k, A(x_i + k) and their
/// negations, true exactly of the tuples of type t. vars.size() == t.n.
Formula rtype_to_formula(const RType& t, const std::vector<std::string>& vars);

/// Disjunction of rtype_to_formula over the given types.
Formula rtypes_to_formula(const std::vector<RType>& types, const std::vector<std::string>& vars);

}  // namespace zchain
