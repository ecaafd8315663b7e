#pragma once

// Computable binary trees, the L-axioms they induce, and guessers with an
// explicit C*n^2 budget.
//
// Tree file, either
//
//   table
//   level 0: -
//   level 1: 0 1
//   level 2: 00 01 10
//
// (members past the last listed level are all extensions of its strings), or
// a single rule line:
//
//   rule full
//   rule single-path 1011
//   rule periodic 10
//   rule diagonal depth=10 guessers=zeros,alternating

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "zchain/error.hpp"
#include "zchain/formula.hpp"
#include "zchain/model.hpp"

namespace zchain {

using Bits = std::string;  // '0'/'1'

class BinaryTree {
 public:
  using Membership = std::function<bool(const Bits&)>;

  /// `member` must be downward closed.
  BinaryTree(std::string description, Membership member);

  static BinaryTree full();
  /// The single path `bits` followed by zeros.
  static BinaryTree single_path(Bits bits);
  /// The single path repeating `pattern`.
  static BinaryTree periodic(Bits pattern);
  /// levels[n] lists the members of length n; past the last level every
  /// extension of a last-level member belongs.
  static BinaryTree table(std::vector<std::vector<Bits>> levels);

  bool contains(const Bits& s) const { return member_(s); }
  /// Members of length n in lexicographic order (cached).
  std::vector<Bits> level(std::size_t n) const;
  /// Lexicographically least member of length n, by depth-first search.
  /// Throws Error if the tree dies before n.
  Bits leftmost(std::size_t n) const;
  const std::string& description() const { return description_; }

 private:
  struct Cache {
    std::mutex mu;
    std::vector<std::vector<Bits>> levels;
  };
  std::string description_;
  Membership member_;
  std::shared_ptr<Cache> cache_;
};

struct Guesser {
  std::string name;
  std::size_t C = 1;
  std::function<std::vector<Bits>(std::size_t n)> generate;  // strings of length n
};

/// zeros, ones, alternating, one-flip (0^n and its single-bit flips).
Guesser builtin_guesser(std::string_view name);
std::vector<std::string> builtin_guesser_names();

struct GuessVerdict {
  bool hit = false;
  std::size_t count = 0;
  std::size_t budget = 0;  // C * max(n,1)^2
  bool within_budget = true;
};

GuessVerdict check_guesser(const Guesser& g, const Bits& p);

class DiagonalFailure : public Error {
 public:
  explicit DiagonalFailure(std::size_t level)
      : Error("diagonal construction died at level " + std::to_string(level)), level_(level) {}
  std::size_t level() const { return level_; }

 private:
  std::size_t level_;
};

/// Level n holds the one-bit extensions of level n-1 that no guesser lists
/// at n; past `depth` every extension is kept. Throws DiagonalFailure when a
/// level comes out empty.
BinaryTree diagonal_tree(const std::vector<Guesser>& guessers, std::size_t depth);

/// The sentence saying the labels of 0..n-1 follow some member of level n.
/// Throws PreconditionError if the level is empty.
Formula axiom_for_level(const BinaryTree& t, std::size_t n);

/// Labels of positions 0..n on the zero chain (n+1 bits).
Bits extract_path(const ModelFragment& m, std::size_t n);

BinaryTree parse_tree(std::string_view text);
BinaryTree load_tree(const std::filesystem::path& path);

}  // namespace zchain
