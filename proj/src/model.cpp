#include "zchain/model.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "zchain/error.hpp"

namespace zchain {

std::string to_string(const SignedDistance& d) { return d.k ? std::to_string(*d.k) : "inf"; }

ModelFragment::ModelFragment(std::vector<ChainInterval> chains, std::size_t zero_chain, long zero_pos)
    : chains_(std::move(chains)), zero_{zero_chain, zero_pos} {
  if (chains_.empty()) throw FragmentError("fragment has no chains");
  std::set<std::string> ids;
  for (std::size_t c = 0; c < chains_.size(); ++c) {
    const auto& ch = chains_[c];
    if (!ids.insert(ch.id).second) throw FragmentError("duplicate chain id '" + ch.id + "'");
    if (ch.lo > ch.hi) throw FragmentError("chain '" + ch.id + "' has lo > hi");
    const auto len = static_cast<std::size_t>(ch.hi - ch.lo + 1);
    if (ch.labels.size() != len)
      throw FragmentError("chain '" + ch.id + "' declares " + std::to_string(len) + " positions but has " +
                          std::to_string(ch.labels.size()) + " labels");
    starts_.push_back(static_cast<ElementId>(chain_of_.size()));
    for (char bit : ch.labels) {
      if (bit != '0' && bit != '1') throw FragmentError("chain '" + ch.id + "' has a label other than 0/1");
      chain_of_.push_back(static_cast<std::uint32_t>(c));
      bits_.push_back(bit == '1');
    }
  }
  if (!contains(zero_)) throw FragmentError("zero lies outside its chain");
}

bool ModelFragment::contains(const Element& e) const {
  return e.chain < chains_.size() && e.pos >= chains_[e.chain].lo && e.pos <= chains_[e.chain].hi;
}

ElementId ModelFragment::id_of(const Element& e) const {
  if (!contains(e)) throw UnknownElement("no element at chain " + std::to_string(e.chain) + " position " +
                                         std::to_string(e.pos));
  return starts_[e.chain] + static_cast<ElementId>(e.pos - chains_[e.chain].lo);
}

Element ModelFragment::element(ElementId id) const {
  if (id >= size()) throw UnknownElement("no element with id " + std::to_string(id));
  const std::size_t c = chain_of_[id];
  return {c, chains_[c].lo + static_cast<long>(id - starts_[c])};
}

bool ModelFragment::label(ElementId id) const {
  if (id >= size()) throw UnknownElement("no element with id " + std::to_string(id));
  return bits_[id] != 0;
}

bool ModelFragment::label(const Element& e) const {
  if (!contains(e)) throw InteriorViolation("label read outside the fragment at position " + std::to_string(e.pos));
  return bits_[id_of(e)] != 0;
}

std::optional<ElementId> ModelFragment::offset(ElementId id, long k) const {
  const Element e = element(id);
  const Element t{e.chain, e.pos + k};
  if (!contains(t)) return std::nullopt;
  return static_cast<ElementId>(static_cast<long>(id) + k);
}

bool ModelFragment::interior(ElementId id, long k) const {
  const Element e = element(id);
  const auto& ch = chains_[e.chain];
  return e.pos - k >= ch.lo && e.pos + k <= ch.hi;
}

std::size_t ModelFragment::chain_index(std::string_view id) const {
  for (std::size_t c = 0; c < chains_.size(); ++c)
    if (chains_[c].id == id) return c;
  throw FragmentError("unknown chain '" + std::string(id) + "'");
}

bool ModelFragment::operator==(const ModelFragment& o) const {
  if (chains_.size() != o.chains_.size() || zero_ != o.zero_) return false;
  for (std::size_t c = 0; c < chains_.size(); ++c) {
    const auto &a = chains_[c], &b = o.chains_[c];
    if (a.id != b.id || a.lo != b.lo || a.hi != b.hi || a.labels != b.labels) return false;
  }
  return true;
}

SignedDistance signed_distance(const ModelFragment& m, const Element& a, const Element& b) {
  m.id_of(a);
  m.id_of(b);
  if (a.chain != b.chain) return SignedDistance::infinite();
  return SignedDistance::finite(b.pos - a.pos);
}

SignedDistance signed_distance(const ModelFragment& m, ElementId a, ElementId b) {
  return signed_distance(m, m.element(a), m.element(b));
}

std::vector<Element> neighborhood(const ModelFragment& m, const Element& a, long k) {
  const ElementId id = m.id_of(a);
  if (!m.interior(id, k))
    throw InteriorViolation("the " + std::to_string(k) + "-neighborhood of " + to_string(m, id) +
                            " leaves the fragment");
  std::vector<Element> out;
  for (long d = -k; d <= k; ++d) out.push_back({a.chain, a.pos + d});
  return out;
}

std::vector<ElementId> neighborhood(const ModelFragment& m, ElementId a, long k) {
  if (!m.interior(a, k))
    throw InteriorViolation("the " + std::to_string(k) + "-neighborhood of " + to_string(m, a) +
                            " leaves the fragment");
  std::vector<ElementId> out;
  for (long d = -k; d <= k; ++d) out.push_back(static_cast<ElementId>(static_cast<long>(a) + d));
  return out;
}

std::string neighborhood_type(const ModelFragment& m, ElementId a, long r) {
  std::string out;
  for (ElementId e : neighborhood(m, a, r)) out.push_back(m.label(e) ? '1' : '0');
  return out;
}

std::string to_string(const RType& t) {
  std::ostringstream os;
  os << "r=" << t.r << " n=" << t.n << " table=[";
  for (std::size_t i = 0; i <= t.n; ++i) {
    os << (i ? "; " : "");
    for (std::size_t j = 0; j <= t.n; ++j) {
      auto v = t.at(i, j);
      os << (j ? " " : "") << (v ? std::to_string(*v) : "inf");
    }
  }
  os << "] nbhd=";
  for (std::size_t i = 0; i < t.nbhd_types.size(); ++i) os << (i ? "," : "") << t.nbhd_types[i];
  return os.str();
}

RType r_type(const ModelFragment& m, const std::vector<ElementId>& tuple, long r) {
  RType t;
  t.r = r;
  t.n = tuple.size();
  std::vector<ElementId> pts{m.zero_id()};
  pts.insert(pts.end(), tuple.begin(), tuple.end());
  for (ElementId a : pts) t.nbhd_types.push_back(neighborhood_type(m, a, r));
  for (ElementId a : pts)
    for (ElementId b : pts) {
      auto d = signed_distance(m, a, b);
      t.table.push_back(d.k && *d.k >= -r && *d.k <= r ? d.k : std::nullopt);
    }
  return t;
}

std::vector<ElementId> interior_window(const ModelFragment& m, long margin) {
  std::vector<ElementId> out;
  for (ElementId id = 0; id < m.size(); ++id)
    if (m.interior(id, margin)) out.push_back(id);
  return out;
}

namespace {

std::string field(const std::string& tok, const std::string& key, std::size_t lineno) {
  if (tok.rfind(key + "=", 0) != 0)
    throw FragmentError("line " + std::to_string(lineno) + ": expected " + key + "=..., got '" + tok + "'");
  return tok.substr(key.size() + 1);
}

long to_long(const std::string& s, std::size_t lineno) {
  try {
    std::size_t used = 0;
    long v = std::stol(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw FragmentError("line " + std::to_string(lineno) + ": bad integer '" + s + "'");
}

}  // namespace

ModelFragment parse_fragment(std::string_view text) {
  std::vector<ChainInterval> chains;
  std::optional<std::pair<std::string, long>> zero;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::istringstream line(raw.substr(0, raw.find('#')));
    std::vector<std::string> toks;
    for (std::string t; line >> t;) toks.push_back(t);
    if (toks.empty()) continue;
    if (toks[0] == "chain") {
      if (toks.size() != 5) throw FragmentError("line " + std::to_string(lineno) + ": chain needs id, lo, hi, labels");
      chains.push_back({toks[1], to_long(field(toks[2], "lo", lineno), lineno),
                        to_long(field(toks[3], "hi", lineno), lineno), field(toks[4], "labels", lineno)});
    } else if (toks[0].rfind("zero=", 0) == 0 && toks.size() == 1) {
      if (zero) throw FragmentError("line " + std::to_string(lineno) + ": duplicate zero");
      const std::string spec = toks[0].substr(5);
      const auto colon = spec.rfind(':');
      if (colon == std::string::npos) throw FragmentError("line " + std::to_string(lineno) + ": zero=<chain>:<pos>");
      zero.emplace(spec.substr(0, colon), to_long(spec.substr(colon + 1), lineno));
    } else {
      throw FragmentError("line " + std::to_string(lineno) + ": unrecognised '" + toks[0] + "'");
    }
  }
  if (!zero) throw FragmentError("fragment has no zero= line");
  std::size_t zc = chains.size();
  for (std::size_t c = 0; c < chains.size(); ++c)
    if (chains[c].id == zero->first) zc = c;
  if (zc == chains.size()) throw FragmentError("zero refers to unknown chain '" + zero->first + "'");
  return ModelFragment(std::move(chains), zc, zero->second);
}

ModelFragment load_fragment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read fragment file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fragment(ss.str());
}

std::string to_string(const ModelFragment& m) {
  std::string out;
  for (const auto& ch : m.chains())
    out += "chain " + ch.id + " lo=" + std::to_string(ch.lo) + " hi=" + std::to_string(ch.hi) + " labels=" +
           ch.labels + "\n";
  out += "zero=" + m.chains()[m.zero().chain].id + ":" + std::to_string(m.zero().pos) + "\n";
  return out;
}

std::string to_string(const ModelFragment& m, ElementId id) {
  const Element e = m.element(id);
  return m.chains()[e.chain].id + ":" + std::to_string(e.pos);
}

}  // namespace zchain
