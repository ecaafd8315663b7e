#include "zchain/tree.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace zchain {

BinaryTree::BinaryTree(std::string description, Membership member)
    : description_(std::move(description)), member_(std::move(member)), cache_(std::make_shared<Cache>()) {}

BinaryTree BinaryTree::full() {
  return BinaryTree("rule full", [](const Bits&) { return true; });
}

BinaryTree BinaryTree::single_path(Bits bits) {
  const std::string desc = "rule single-path " + (bits.empty() ? std::string("0") : bits);
  return BinaryTree(desc, [bits = std::move(bits)](const Bits& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] != (i < bits.size() ? bits[i] : '0')) return false;
    return true;
  });
}

BinaryTree BinaryTree::periodic(Bits pattern) {
  if (pattern.empty()) throw PreconditionError("periodic tree needs a nonempty pattern");
  const std::string desc = "rule periodic " + pattern;
  return BinaryTree(desc, [pattern = std::move(pattern)](const Bits& s) {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (s[i] != pattern[i % pattern.size()]) return false;
    return true;
  });
}

namespace {

// Membership for an explicit list of levels; past the last level, anything
// extending a last-level string.
BinaryTree::Membership level_membership(std::vector<std::vector<Bits>> levels) {
  for (auto& l : levels) std::sort(l.begin(), l.end());
  return [levels = std::move(levels)](const Bits& s) {
    if (levels.empty()) return false;
    const std::size_t n = std::min(s.size(), levels.size() - 1);
    const auto& lv = levels[n];
    return std::binary_search(lv.begin(), lv.end(), s.substr(0, n));
  };
}

std::string table_text(const std::vector<std::vector<Bits>>& levels) {
  std::string out = "table";
  for (std::size_t n = 0; n < levels.size(); ++n) {
    out += "\nlevel " + std::to_string(n) + ":";
    if (n == 0) {
      out += levels[0].empty() ? "" : " -";
      continue;
    }
    for (const auto& s : levels[n]) out += " " + s;
  }
  return out;
}

}  // namespace

BinaryTree BinaryTree::table(std::vector<std::vector<Bits>> levels) {
  for (std::size_t n = 0; n < levels.size(); ++n) {
    for (const auto& s : levels[n]) {
      if (s.size() != n || s.find_first_not_of("01") != std::string::npos)
        throw PreconditionError("table level " + std::to_string(n) + " has a malformed string '" + s + "'");
      if (n > 0 && std::find(levels[n - 1].begin(), levels[n - 1].end(), s.substr(0, n - 1)) == levels[n - 1].end())
        throw PreconditionError("table is not downward closed at '" + s + "'");
    }
  }
  const std::string desc = table_text(levels);
  return BinaryTree(desc, level_membership(std::move(levels)));
}

std::vector<Bits> BinaryTree::level(std::size_t n) const {
  std::lock_guard lock(cache_->mu);
  auto& lv = cache_->levels;
  if (lv.empty()) lv.push_back(member_("") ? std::vector<Bits>{""} : std::vector<Bits>{});
  while (lv.size() <= n) {
    std::vector<Bits> next;
    for (const auto& s : lv.back())
      for (char b : {'0', '1'})
        if (member_(s + b)) next.push_back(s + b);
    lv.push_back(std::move(next));
  }
  return lv[n];
}

Bits BinaryTree::leftmost(std::size_t n) const {
  if (!member_("")) throw Error("tree is empty");
  Bits cur;
  while (cur.size() < n) {
    if (member_(cur + '0')) {
      cur += '0';
      continue;
    }
    if (member_(cur + '1')) {
      cur += '1';
      continue;
    }
    // dead end: backtrack to the last 0 that can become a 1
    for (;;) {
      while (!cur.empty() && cur.back() == '1') cur.pop_back();
      if (cur.empty()) throw Error("tree has no member of length " + std::to_string(n));
      cur.back() = '1';
      if (member_(cur)) break;
    }
  }
  return cur;
}

Guesser builtin_guesser(std::string_view name) {
  if (name == "zeros") return {"zeros", 1, [](std::size_t n) { return std::vector<Bits>{Bits(n, '0')}; }};
  if (name == "ones") return {"ones", 1, [](std::size_t n) { return std::vector<Bits>{Bits(n, '1')}; }};
  if (name == "alternating")
    return {"alternating", 1, [](std::size_t n) {
              Bits s(n, '0');
              for (std::size_t i = 1; i < n; i += 2) s[i] = '1';
              return std::vector<Bits>{s};
            }};
  if (name == "one-flip")
    return {"one-flip", 2, [](std::size_t n) {
              std::vector<Bits> out{Bits(n, '0')};
              for (std::size_t i = 0; i < n; ++i) {
                out.emplace_back(n, '0');
                out.back()[i] = '1';
              }
              return out;
            }};
  throw Error("unknown guesser '" + std::string(name) + "'");
}

std::vector<std::string> builtin_guesser_names() { return {"zeros", "ones", "alternating", "one-flip"}; }

GuessVerdict check_guesser(const Guesser& g, const Bits& p) {
  const auto list = g.generate(p.size());
  GuessVerdict v;
  v.count = list.size();
  const std::size_t n = std::max<std::size_t>(p.size(), 1);
  v.budget = g.C * n * n;
  v.within_budget = v.count <= v.budget;
  v.hit = std::find(list.begin(), list.end(), p) != list.end();
  return v;
}

BinaryTree diagonal_tree(const std::vector<Guesser>& guessers, std::size_t depth) {
  auto banned = std::make_shared<std::vector<std::set<Bits>>>(depth + 1);
  for (std::size_t n = 1; n <= depth; ++n)
    for (const auto& g : guessers)
      for (auto& s : g.generate(n)) (*banned)[n].insert(std::move(s));
  auto member = [banned, depth](const Bits& s) {
    for (std::size_t k = 1; k <= std::min(s.size(), depth); ++k)
      if ((*banned)[k].count(s.substr(0, k))) return false;
    return true;
  };
  // deepest level reachable below `s`, stopping at depth
  std::function<std::size_t(const Bits&)> deepest = [&](const Bits& s) {
    if (s.size() == depth) return depth;
    std::size_t best = s.size();
    for (char b : {'0', '1'}) {
      const Bits t = s + b;
      if (!(*banned)[t.size()].count(t)) best = std::max(best, deepest(t));
      if (best == depth) break;
    }
    return best;
  };
  const std::size_t reached = deepest("");
  if (reached < depth) throw DiagonalFailure(reached + 1);
  std::string desc = "rule diagonal depth=" + std::to_string(depth) + " guessers=";
  for (std::size_t i = 0; i < guessers.size(); ++i) desc += (i ? "," : "") + guessers[i].name;
  return BinaryTree(desc, member);
}

Formula axiom_for_level(const BinaryTree& t, std::size_t n) {
  const auto members = t.level(n);
  if (members.empty()) throw PreconditionError("tree has no members at level " + std::to_string(n));
  std::vector<Formula> disjuncts;
  for (const auto& sigma : members) {
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < n; ++i) {
      Formula a = Formula::rel("A", {numeral(static_cast<long>(i))});
      lits.push_back(sigma[i] == '1' ? a : Formula::negate(a));
    }
    disjuncts.push_back(Formula::conj(lits));
  }
  return Formula::disj(disjuncts);
}

Bits extract_path(const ModelFragment& m, std::size_t n) {
  Bits out;
  const Element z = m.zero();
  for (std::size_t i = 0; i <= n; ++i) out.push_back(m.label(Element{z.chain, z.pos + static_cast<long>(i)}) ? '1' : '0');
  return out;
}

BinaryTree parse_tree(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::vector<std::string>> lines;
  for (std::string raw; std::getline(in, raw);) {
    std::istringstream ls(raw.substr(0, raw.find('#')));
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (!toks.empty()) lines.push_back(std::move(toks));
  }
  if (lines.empty()) throw Error("empty tree file");
  const auto& head = lines[0];
  if (head[0] == "table") {
    std::vector<std::vector<Bits>> levels;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto& l = lines[i];
      if (l.size() < 2 || l[0] != "level" || l[1].empty() || l[1].back() != ':')
        throw Error("tree table: expected 'level <n>: ...'");
      const std::size_t n = std::stoul(l[1].substr(0, l[1].size() - 1));
      if (n != levels.size()) throw Error("tree table: levels must be listed in order from 0");
      std::vector<Bits> members;
      for (std::size_t j = 2; j < l.size(); ++j) members.push_back(l[j] == "-" ? "" : l[j]);
      levels.push_back(std::move(members));
    }
    return BinaryTree::table(std::move(levels));
  }
  if (head[0] != "rule" || head.size() < 2) throw Error("tree file must start with 'table' or 'rule'");
  const std::string& kind = head[1];
  if (kind == "full") return BinaryTree::full();
  if (kind == "single-path" && head.size() == 3) return BinaryTree::single_path(head[2]);
  if (kind == "periodic" && head.size() == 3) return BinaryTree::periodic(head[2]);
  if (kind == "diagonal") {
    std::size_t depth = 8;
    std::vector<Guesser> gs;
    for (std::size_t i = 2; i < head.size(); ++i) {
      const auto& tok = head[i];
      if (tok.rfind("depth=", 0) == 0) {
        depth = std::stoul(tok.substr(6));
      } else if (tok.rfind("guessers=", 0) == 0) {
        std::stringstream names(tok.substr(9));
        for (std::string nm; std::getline(names, nm, ',');)
          if (!nm.empty()) gs.push_back(builtin_guesser(nm));
      } else {
        throw Error("unknown diagonal option '" + tok + "'");
      }
    }
    return diagonal_tree(gs, depth);
  }
  throw Error("unknown tree rule '" + kind + "'");
}

BinaryTree load_tree(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read tree file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_tree(ss.str());
}

}  // namespace zchain
