#pragma once

// An L'-structure presented only through opaque handles: enumerate the
// universe, compare handles, and evaluate quantifier-free L'-formulas.
// Positions, chains and the L-symbols stay hidden; the `harness` namespace
// below is the test/CLI back door for comparing against ground truth.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "zchain/dictionary.hpp"
#include "zchain/eval.hpp"
#include "zchain/formula.hpp"
#include "zchain/model.hpp"

namespace zchain {

using Handle = HandleId;

/// Line-oriented record of oracle calls: `ENUM i -> h` and
/// `EVAL <formula-hash> h1 h2 ... -> 0|1`.
class CallLog {
 public:
  void add(std::string line);
  std::vector<std::string> lines() const;
  std::string text() const;

 private:
  mutable std::mutex mu_;
  std::vector<std::string> lines_;
};

class OracleModel;

namespace harness {
ElementId element_of(const OracleModel& o, Handle h);
Handle handle_of(const OracleModel& o, ElementId e);
const ModelFragment& fragment(const OracleModel& o);
const DefDictionary& dictionary(const OracleModel& o);
}  // namespace harness

class OracleModel {
 public:
  /// Validates the dictionary on the fragment: every L'-function and constant
  /// must be functional and total on interior arguments, and translating the
  /// L-symbols there and back must preserve their meaning on a sample.
  /// Throws DictionaryError otherwise.
  OracleModel(ModelFragment m, DefDictionary d, std::uint64_t seed);

  std::size_t size() const { return order_.size(); }
  Handle enumerate(std::size_t i) const;
  const Signature& signature() const { return dict_.target; }

  /// A quantifier-free L'-formula compiled against a variable order. Handle
  /// terms inside the formula are parameters.
  class Query {
   public:
    bool operator()(std::span<const Handle> args) const;
    std::size_t arity() const { return arity_; }

   private:
    friend class OracleModel;
    const OracleModel* owner_ = nullptr;
    std::shared_ptr<const CompiledFormula> compiled_;
    std::string hash_;
    std::size_t arity_ = 0;
  };

  Query prepare(const Formula& qf, const std::vector<std::string>& vars) const;
  bool holds(const Formula& qf, const std::map<std::string, Handle>& binding) const;

  /// Attach (or detach with nullptr) a call log. Not owned.
  void set_log(CallLog* log) const { log_ = log; }
  /// Number of quantifier-free evaluations answered so far.
  std::uint64_t eval_count() const { return evals_.load(); }

 private:
  friend ElementId harness::element_of(const OracleModel&, Handle);
  friend Handle harness::handle_of(const OracleModel&, ElementId);
  friend const ModelFragment& harness::fragment(const OracleModel&);
  friend const DefDictionary& harness::dictionary(const OracleModel&);

  ElementId resolve(Handle h) const;
  void validate() const;

  ModelFragment frag_;
  DefDictionary dict_;
  Window full_;
  std::vector<Handle> handle_of_;  // by ElementId
  std::unordered_map<Handle, ElementId> element_of_;
  std::vector<Handle> order_;  // enumeration order
  mutable CallLog* log_ = nullptr;
  mutable std::atomic<std::uint64_t> evals_{0};
};

/// Deterministic Fisher-Yates permutation of 0..n-1 driven by mt19937_64.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

/// Replaces handle terms via `map`; throws UnknownElement for unmapped handles.
Formula map_handles(const Formula& f, const std::map<HandleId, HandleId>& map);

}  // namespace zchain
