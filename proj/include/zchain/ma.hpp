#pragma once

// Mutual algebraicity on a finite fragment. A formula is mutually algebraic
// with bound k when fixing any nonempty proper subset of its free variables
// leaves at most k completions. On a finite window every formula has some
// bound, so the useful questions are "is the bound at most k" and "does the
// least bound stay put when the window grows" (ma_stable).

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "zchain/eval.hpp"
#include "zchain/formula.hpp"
#include "zchain/model.hpp"

namespace zchain {

struct MACounterexample {
  std::vector<std::size_t> fixed;        // positions of the fixed sub-tuple
  std::vector<ElementId> fixed_values;   // their values
  std::size_t completions = 0;
};

struct MAWitness {
  Formula formula;
  std::vector<std::string> vars;
  std::size_t k = 0;  // least bound on this window
  bool verdict = true;  // least bound <= the requested bound (always true when none requested)
  std::optional<std::size_t> requested;
  std::optional<MACounterexample> counterexample;  // a projection with more than `requested` completions
  std::size_t satisfying = 0;
};

/// Quantifiers and the tuples range over `window`. At most one free
/// variable is vacuously mutually algebraic (k = 0 is reported then).
MAWitness is_mutually_algebraic(const ModelFragment& m, const Formula& f, const std::vector<std::string>& vars,
                                const Window& window, std::optional<std::size_t> k = std::nullopt);

struct MAStability {
  std::size_t k_small = 0, k_large = 0;
  bool stable = false;
};

/// Compares least bounds on a window and on a strictly larger one.
MAStability ma_stable(const ModelFragment& m, const Formula& f, const std::vector<std::string>& vars,
                      const Window& small, const Window& large);

struct DisjointFamilyReport {
  std::size_t satisfying = 0;
  std::size_t family = 0;     // greedy pairwise-disjoint subfamily, lexicographic order
  std::size_t k = 0;
  std::size_t arity = 0;
  std::size_t threshold = 0;  // factor * k * arity
  bool meets_threshold = false;
};

DisjointFamilyReport disjoint_family(const ModelFragment& m, const Formula& f, const std::vector<std::string>& vars,
                                     const Window& window, std::size_t factor = 3);

struct QeDisjunct {
  std::vector<Formula> positives;  // alpha_{i,j}
  std::vector<Formula> negatives;  // beta_{i,k}
};

struct Qe1Result {
  Formula gamma;
  std::vector<Formula> gamma_parts;
  std::vector<bool> finite_case;
  std::vector<std::size_t> part_k;  // least MA bound of each gamma_i
  std::size_t k_gamma = 0;
  bool implication_ok = false;  // every tuple satisfying the dnf satisfies gamma
  bool ma_ok = false;           // k_gamma <= sum of part_k
  std::vector<std::string> notes;  // gamma_i whose alpha_i came out with a large bound
};

/// The gamma construction: a disjunct whose satisfying set has a small
/// disjoint family (below factor * k * arity) is replaced by the equality
/// disjunction over its satisfying tuples, written with element handles;
/// otherwise by the conjunction of its positive parts.
Qe1Result qe1_construct(const ModelFragment& m, const std::vector<QeDisjunct>& dnf,
                        const std::vector<std::string>& vars, const Window& window, std::size_t factor = 3);

/// The disjunct as one formula.
Formula disjunct_formula(const QeDisjunct& d);

}  // namespace zchain
