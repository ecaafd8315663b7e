#pragma once

// Deciding L'-formulas against an oracle from finite extra data: a witness
// kit per radius, a decomposition of the formula into a Boolean combination
// of existential formulas, and a working set U of handles.
//
// Windows: kits and ground truth are taken relative to an evaluation window
// D of the hidden fragment. Witness representatives are chosen by their
// extended neighborhood type, which also records which positions fall
// outside D ('a'/'b' for labels 0/1) or outside the fragment ('#').

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zchain/dictionary.hpp"
#include "zchain/eval.hpp"
#include "zchain/formula.hpp"
#include "zchain/model.hpp"
#include "zchain/oracle.hpp"

namespace zchain {

struct WitnessKit {
  long r = 0;
  std::size_t quota = 0;        // (2r+1)(n+m+1) representatives per type
  std::vector<ElementId> v;        // representatives plus 0, sorted
  std::vector<ElementId> v_prime;  // r-neighborhoods of v inside the window, sorted
};

/// Representatives are taken lowest id first. `window` defaults to the
/// whole fragment. Throws PreconditionError on an empty window.
WitnessKit build_witness_kit(const ModelFragment& m, long r, std::size_t n, std::size_t m_bound,
                             const Window* window = nullptr);

std::string extended_type(const ModelFragment& m, const Window& window, ElementId e, long r);

/// A kit as the oracle-side algorithm sees it: hard-coded handles.
struct HandleKit {
  long r = 0;
  std::vector<Handle> v;
  std::vector<Handle> v_prime;  // sorted by handle id
};

/// Harness privilege: translate element ids to the oracle's handles.
HandleKit hardcode(const OracleModel& o, const WitnessKit& k);
std::vector<Handle> hardcode(const OracleModel& o, const std::vector<ElementId>& els);

struct SatStats {
  std::uint64_t evaluations = 0;
  std::uint64_t skipped = 0;  // tuples whose evaluation left the hidden fragment
};

/// `f` is prenex existential (possibly quantifier-free) over the oracle's
/// signature, `vars` lists its free variables and `args` their handles.
/// Scans every tuple over U u V' in handle order; true iff some tuple
/// satisfies the matrix.
bool sat_existential(const OracleModel& o, const Formula& f, const std::vector<std::string>& vars,
                     const std::vector<Handle>& args, const std::vector<Handle>& U, const HandleKit& kit,
                     SatStats* stats = nullptr);

struct SatLiteral {
  std::size_t component = 0;
  bool positive = true;
};

struct SatRadius {
  long value = 0;
  std::vector<Formula> components;          // existential L'-formulas
  std::vector<std::vector<std::string>> component_vars;
  std::vector<long> component_radii;
  std::vector<std::vector<SatLiteral>> dnf;  // f <-> OR of ANDs of literals
  std::vector<std::string> vars;             // free variables of f
  std::string method;                        // "existential", "universal" or "rtype"
};

enum class Decomposition {
  Auto,   // existential or universal prenex formulas as themselves, else r-types
  RType,  // always through satisfying r-types of the L-translation
};

/// Decomposes f. The r-type route needs a parameter-free f and a dictionary
/// whose forward definitions of S, P and 0 are terms (otherwise the
/// translated literals carry impractically many quantifiers); it throws
/// PreconditionError otherwise.
SatRadius satisfaction_radius(const Formula& f, const ModelFragment& m, const DefDictionary& d,
                              const Window& window, Decomposition mode = Decomposition::Auto);

/// Everything sat_general needs: the decomposition, one kit per component
/// and the hard-coded neighborhoods of f's parameters.
struct SatProgram {
  SatRadius sr;
  std::vector<HandleKit> kits;
  std::vector<Handle> parameter_support;
};

/// Harness-side construction from the hidden fragment.
SatProgram build_sat_program(const OracleModel& o, const Formula& f, const Window& window,
                             Decomposition mode = Decomposition::Auto);

bool sat_general(const OracleModel& o, const SatProgram& prog, const std::vector<Handle>& args,
                 const std::vector<Handle>& U, SatStats* stats = nullptr);

/// Harness privilege: U = union of the k-neighborhoods of the arguments,
/// clipped to the fragment.
std::vector<Handle> neighborhood_handles(const OracleModel& o, const std::vector<Handle>& args, long k);

struct WarmupConfig {
  Formula phi_zero;  // in x
  Formula phi_succ;  // quantifier-free, in x y
  Formula phi_a;     // in x
  SatProgram prog_a;
};

/// Harness-side: definitions read from the dictionary, kits from the fragment.
WarmupConfig build_warmup(const OracleModel& o, const Window& window);

struct WarmupResult {
  std::string bits;                // A(0) .. A(n)
  std::vector<Handle> walk;        // handles of -r .. n+r
  long r = 0;
  std::uint64_t oracle_evals = 0;
};

/// Finds 0, walks successors and predecessors by scanning the enumeration,
/// and decides A at 0..n with sat_general. Throws Error when the enumeration
/// runs out before a successor is found.
WarmupResult warmup_compute_A(const OracleModel& o, const WarmupConfig& cfg, std::size_t n);

}  // namespace zchain
