#pragma once

// Finite fragments of Z-chain structures: a handful of labeled chain
// intervals, one of which carries 0. Elements are addressed either as
// (chain index, position) or by a dense ElementId.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zchain {

struct ChainInterval {
  std::string id;
  long lo = 0;
  long hi = 0;
  std::string labels;  // '0'/'1' per position lo..hi
};

struct Element {
  std::size_t chain = 0;
  long pos = 0;

  auto operator<=>(const Element&) const = default;
};

using ElementId = std::uint32_t;

struct SignedDistance {
  std::optional<long> k;  // nullopt is infinity

  static SignedDistance finite(long k) { return {k}; }
  static SignedDistance infinite() { return {}; }
  bool is_finite() const { return k.has_value(); }
  bool operator==(const SignedDistance&) const = default;
};

std::string to_string(const SignedDistance& d);

class ModelFragment {
 public:
  ModelFragment() = default;
  /// Throws FragmentError on bad labels, duplicate chain ids, or a zero
  /// outside its chain.
  ModelFragment(std::vector<ChainInterval> chains, std::size_t zero_chain, long zero_pos);

  const std::vector<ChainInterval>& chains() const { return chains_; }
  std::size_t size() const { return chain_of_.size(); }
  Element zero() const { return zero_; }
  ElementId zero_id() const { return id_of(zero_); }

  bool contains(const Element& e) const;
  /// Throws UnknownElement.
  ElementId id_of(const Element& e) const;
  Element element(ElementId id) const;
  std::size_t chain_of(ElementId id) const { return chain_of_.at(id); }
  long position(ElementId id) const { return element(id).pos; }

  bool label(ElementId id) const;
  /// Label at a position, throwing InteriorViolation outside the chain.
  bool label(const Element& e) const;

  /// id + k on the same chain, or nullopt when that leaves the chain.
  std::optional<ElementId> offset(ElementId id, long k) const;

  /// True when [pos-k, pos+k] lies inside the element's chain.
  bool interior(ElementId id, long k) const;

  /// First id of each chain; ids of chain c are [chain_start(c), chain_start(c)+len).
  ElementId chain_start(std::size_t c) const { return starts_.at(c); }
  std::size_t chain_index(std::string_view id) const;

  bool operator==(const ModelFragment& o) const;

 private:
  std::vector<ChainInterval> chains_;
  Element zero_;
  std::vector<ElementId> starts_;
  std::vector<std::uint32_t> chain_of_;
  std::vector<std::uint8_t> bits_;
};

SignedDistance signed_distance(const ModelFragment& m, const Element& a, const Element& b);
SignedDistance signed_distance(const ModelFragment& m, ElementId a, ElementId b);

/// The 2k+1 elements a-k..a+k in position order; InteriorViolation if the
/// window leaves the chain.
std::vector<Element> neighborhood(const ModelFragment& m, const Element& a, long k);
std::vector<ElementId> neighborhood(const ModelFragment& m, ElementId a, long k);

/// Labels of a-r..a+r as a '0'/'1' string.
std::string neighborhood_type(const ModelFragment& m, ElementId a, long r);

struct RType {
  long r = 0;
  std::size_t n = 0;  // tuple length; row/column 0 is the point 0
  std::vector<std::optional<long>> table;  // (n+1)x(n+1), row-major
  std::vector<std::string> nbhd_types;     // n+1 entries of length 2r+1

  std::optional<long> at(std::size_t i, std::size_t j) const { return table.at(i * (n + 1) + j); }
  auto operator<=>(const RType&) const = default;
};

std::string to_string(const RType& t);

/// Throws InteriorViolation unless every coordinate and 0 have interior r-windows.
RType r_type(const ModelFragment& m, const std::vector<ElementId>& tuple, long r);

/// Elements whose margin-window lies inside their chain, in id order.
std::vector<ElementId> interior_window(const ModelFragment& m, long margin);

ModelFragment parse_fragment(std::string_view text);
ModelFragment load_fragment(const std::filesystem::path& path);
std::string to_string(const ModelFragment& m);
std::string to_string(const ModelFragment& m, ElementId id);  // "chain:pos"

}  // namespace zchain
