#include "zchain/generate.hpp"

#include <functional>

#include "zchain/error.hpp"

namespace zchain {

namespace {

std::string random_bits(Rng& rng, std::size_t n) {
  std::string s(n, '0');
  for (auto& c : s) c = rng.coin() ? '1' : '0';
  return s;
}

std::string chain_name(std::size_t i) { return i == 0 ? "z" : "c" + std::to_string(i); }

}  // namespace

ModelFragment random_fragment(Rng& rng, std::size_t chains, long half, long other_len) {
  if (chains == 0 || half < 0 || other_len < 1) throw PreconditionError("bad fragment shape");
  std::vector<ChainInterval> cs;
  cs.push_back({chain_name(0), -half, half, random_bits(rng, static_cast<std::size_t>(2 * half + 1))});
  for (std::size_t i = 1; i < chains; ++i)
    cs.push_back({chain_name(i), 0, other_len - 1, random_bits(rng, static_cast<std::size_t>(other_len))});
  return ModelFragment(std::move(cs), 0, 0);
}

ModelFragment path_fragment(const std::string& path, long margin, std::uint64_t seed, std::size_t extra_chains,
                            long extra_len) {
  Rng rng(seed);
  const long len = static_cast<long>(path.size());
  std::string labels = random_bits(rng, static_cast<std::size_t>(margin)) + path +
                       random_bits(rng, static_cast<std::size_t>(margin));
  std::vector<ChainInterval> cs;
  cs.push_back({chain_name(0), -margin, len + margin - 1, labels});
  for (std::size_t i = 1; i <= extra_chains; ++i)
    cs.push_back({chain_name(i), 0, extra_len - 1, random_bits(rng, static_cast<std::size_t>(extra_len))});
  return ModelFragment(std::move(cs), 0, 0);
}

std::string de_bruijn(int k) {
  if (k < 1 || k > 16) throw PreconditionError("de Bruijn order must be in 1..16");
  // standard Lyndon-word construction
  std::string seq;
  std::vector<int> a(static_cast<std::size_t>(2 * k), 0);
  std::function<void(int, int)> db = [&](int t, int p) {
    if (t > k) {
      if (k % p == 0)
        for (int j = 1; j <= p; ++j) seq.push_back(static_cast<char>('0' + a[static_cast<std::size_t>(j)]));
      return;
    }
    a[static_cast<std::size_t>(t)] = a[static_cast<std::size_t>(t - p)];
    db(t + 1, p);
    for (int j = a[static_cast<std::size_t>(t - p)] + 1; j < 2; ++j) {
      a[static_cast<std::size_t>(t)] = j;
      db(t + 1, t);
    }
  };
  db(1, 1);
  return seq;
}

ModelFragment generic_fragment(int k, std::size_t chains, long half, std::uint64_t seed) {
  const std::string db = de_bruijn(k);
  Rng rng(seed);
  std::vector<ChainInterval> cs;
  for (std::size_t i = 0; i < chains; ++i) {
    const std::size_t shift = rng.below(db.size());
    std::string labels;
    for (long p = 0; p < 2 * half + 1; ++p) labels.push_back(db[(shift + static_cast<std::size_t>(p)) % db.size()]);
    cs.push_back({chain_name(i), -half, half, labels});
  }
  return ModelFragment(std::move(cs), 0, 0);
}

}  // namespace zchain
