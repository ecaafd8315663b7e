#pragma once

// Fragment builders for tests, the CLI and the demos.

#include <cstddef>
#include <cstdint>
#include <string>

#include "zchain/model.hpp"
#include "zchain/rng.hpp"

namespace zchain {

/// `chains` chains with uniformly random labels. The zero chain spans
/// [-half, half]; the others span [0, other_len - 1].
ModelFragment random_fragment(Rng& rng, std::size_t chains, long half, long other_len);

/// Labels of positions 0..|path|-1 on the zero chain are `path`; the `margin`
/// positions on either side get random labels, as do `extra_chains` chains
/// of length `extra_len`.
ModelFragment path_fragment(const std::string& path, long margin, std::uint64_t seed, std::size_t extra_chains = 1,
                            long extra_len = 24);

/// Binary de Bruijn sequence of order k (length 2^k, cyclic).
std::string de_bruijn(int k);

/// Fragment whose labels repeat a de Bruijn sequence, so every label window
/// of length <= k occurs many times, far apart, on every chain.
ModelFragment generic_fragment(int k, std::size_t chains, long half, std::uint64_t seed);

}  // namespace zchain
