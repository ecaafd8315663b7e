#pragma once

// Guessing the labels A(0), ..., A(n) of the hidden L-structure from an
// oracle for its L'-reduct, with O(n^2) candidates.
//
//   guess_succ_pred    lists of possible successors/predecessors of a handle
//   guess_neighborhood candidate windows a-n .. a+n, one per piece of extra
//                      information (i, m)
//   guess_A            one bit string per window guess
//
// Everything the algorithms may hard-code (the exception table, witness
// kits) is assembled harness-side by build_guess_config.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zchain/eval.hpp"
#include "zchain/formula.hpp"
#include "zchain/model.hpp"
#include "zchain/oracle.hpp"
#include "zchain/satisfaction.hpp"

namespace zchain {

/// Oracle evaluations the algorithms may spend. Shared across calls.
class Fuel {
 public:
  explicit Fuel(std::uint64_t budget);
  /// False (and nothing spent) once the budget is gone.
  bool spend(std::uint64_t steps = 1);
  std::uint64_t budget() const { return budget_; }
  std::uint64_t used() const { return used_; }
  bool exhausted() const { return used_ >= budget_; }

 private:
  std::uint64_t budget_;
  std::uint64_t used_ = 0;
};

struct SuccessorApprox {
  Formula psi;  // existential L'-formula in x y, possibly with parameters
  long r = 1;
  std::vector<Handle> exceptions;  // sorted
  std::map<Handle, Handle> succ, pred;  // true neighbours of the exceptions, where they exist
  bool excepted(Handle h) const;
};

/// Elements that are an endpoint of a pair satisfying psi at distance more
/// than r, plus the r-neighbourhoods of psi's parameters. `psi` is over the
/// L'-signature of `d` and is read through the backward translation; pairs
/// and witnesses range over `window`, pairs whose evaluation leaves the
/// fragment are ignored.
std::vector<ElementId> exception_set(const ModelFragment& m, const DefDictionary& d, const Formula& psi, long r,
                                     const Window& window);

struct ApproxOptions {
  std::size_t max_k = 8;  // least MA bound accepted for psi on the fragment
};

/// Checks phi_S -> psi on the fragment and that psi is mutually algebraic
/// with bound at most max_k, then computes the exception table. r is the
/// radius of psi (at least 1). Throws PreconditionError on a failed check.
SuccessorApprox build_successor_approx(const OracleModel& o, const Formula& psi, const ApproxOptions& opt = {});

/// The default psi: the forward definition of S when it is existential.
Formula default_psi(const DefDictionary& d);

struct SuccPredLists {
  std::vector<Handle> succ, pred;
  bool complete = true;
};

SuccPredLists guess_succ_pred(const OracleModel& o, const SuccessorApprox& sa, Handle a, Fuel& fuel);

struct GuessConfig {
  SuccessorApprox sa;
  SatProgram succ;  // phi_S(x, y)
  SatProgram zero;  // phi_0(x)
  SatProgram a;     // phi_A(x)
  long r1 = 1, r2 = 0, r_a = 0;
};

/// Harness-side: psi (default_psi when absent), satisfaction programs and
/// radii, with kits over `window`.
GuessConfig build_guess_config(const OracleModel& o, const Window& window,
                               const std::optional<Formula>& psi = std::nullopt, const ApproxOptions& opt = {});

struct Alg1Call {
  Handle source = 0;
  SuccPredLists lists;
};

struct NeighborhoodGuesses {
  std::size_t n = 0;
  long N = 0;                                 // r1 * n + r2
  std::vector<std::vector<Handle>> guesses;   // a-n .. a+n, deduplicated, first-emission order
  std::size_t pre_dedup = 0;
  std::vector<std::pair<long, std::size_t>> tried;  // every (i, m) considered, in order
  std::vector<std::pair<long, std::size_t>> emitted;  // (i, m) branches that produced a guess
  std::vector<std::vector<Handle>> u;         // final U_i, index i + N
  std::vector<Alg1Call> alg1;                 // every alg1 run of phase 1
  bool trace_complete = true;                 // phase 1 finished within fuel
  std::uint64_t bound = 0;                    // r1 (2N+1)^2
};

NeighborhoodGuesses guess_neighborhood(const OracleModel& o, const GuessConfig& cfg, Handle a, std::size_t n,
                                       Fuel& fuel);

struct GuessBatch {
  std::size_t n = 0;
  std::vector<std::string> guesses;  // bit strings of length n+1, deduplicated
  std::size_t pre_dedup = 0;
  std::vector<std::pair<long, std::size_t>> extra_info_log;
  Handle zero = 0;
  long r1 = 0, r2 = 0, r_a = 0;
  long N = 0;         // r1 * n + r2
  long N_run = 0;     // r1 * (n + r_a) + r2, the window guess_neighborhood actually used
  std::uint64_t C = 0;            // r1 (2 r1 + 2 r2 + 1)^2
  std::uint64_t bound_alg2 = 0;   // r1 (2N+1)^2
  std::uint64_t bound_batch = 0;  // C * max(n + r_a, 1)^2
  std::uint64_t oracle_evals = 0;
  std::uint64_t fuel_used = 0;
  bool complete = true;
  NeighborhoodGuesses windows;
};

/// Throws Error when no element satisfies phi_0.
GuessBatch guess_A(const OracleModel& o, const GuessConfig& cfg, std::size_t n, Fuel& fuel);

}  // namespace zchain
