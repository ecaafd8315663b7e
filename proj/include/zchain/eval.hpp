#pragma once

// Tarskian evaluation of L-formulas on a fragment. Terms are evaluated
// strictly: S or P stepping off the end of a chain raises InteriorViolation.
// Quantifiers range over a window (a subset of the fragment); terms and
// labels are read from the whole fragment. Handle terms denote ElementIds.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "zchain/formula.hpp"
#include "zchain/model.hpp"

namespace zchain {

class Window {
 public:
  Window() = default;
  Window(const ModelFragment& m, std::vector<ElementId> elems);
  static Window full(const ModelFragment& m);

  const std::vector<ElementId>& elements() const { return elems_; }
  std::size_t size() const { return elems_.size(); }
  bool contains(ElementId id) const { return id < member_.size() && member_[id] != 0; }

 private:
  std::vector<ElementId> elems_;  // sorted, distinct
  std::vector<std::uint8_t> member_;
};

using Assignment = std::map<std::string, ElementId>;

/// PreconditionError if `f` has quantifiers.
bool eval_qf(const ModelFragment& m, const Formula& f, const Assignment& asg);
bool eval_windowed(const ModelFragment& m, const Formula& f, const Assignment& asg, const Window& w);

/// An L-formula compiled against a fixed argument order, for repeated use.
class CompiledFormula {
 public:
  CompiledFormula() = default;
  /// `vars` must contain every free variable of `f`.
  CompiledFormula(const Formula& f, std::vector<std::string> vars);

  std::size_t arity() const { return arity_; }
  bool eval(const ModelFragment& m, std::span<const ElementId> args, const Window& w) const;

  struct CTerm {
    enum class Base : std::uint8_t { Slot, Zero, Handle };
    Base base = Base::Slot;
    std::uint64_t value = 0;
    long off = 0, lo = 0, hi = 0;  // net shift and the extreme intermediate shifts
  };
  struct Node {
    Op op = Op::True;
    std::uint32_t a = 0, b = 0;  // child node indices
    std::uint32_t slot = 0;      // quantified slot
    CTerm t1, t2;
  };

 private:
  std::uint32_t compile(const Formula& f, std::map<std::string, std::uint32_t>& env);
  CTerm compile_term(const Term& t, const std::map<std::string, std::uint32_t>& env) const;
  bool run(std::uint32_t node, const ModelFragment& m, std::vector<ElementId>& slots, const Window& w) const;

  std::vector<Node> nodes_;
  std::uint32_t root_ = 0;
  std::size_t arity_ = 0;
  std::size_t slots_ = 0;
};

/// Every tuple over `domain`^|vars| (lexicographic in domain order) satisfying f.
std::vector<std::vector<ElementId>> satisfying_tuples(const ModelFragment& m, const Formula& f,
                                                      const std::vector<std::string>& vars,
                                                      const std::vector<ElementId>& domain, const Window& w);

}  // namespace zchain
