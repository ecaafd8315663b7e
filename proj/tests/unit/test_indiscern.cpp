#include <doctest.h>

#include "../support/gen.hpp"
#include "../support/reference.hpp"
#include "zchain/indiscern.hpp"
#include "zchain/prenex.hpp"

using namespace zchain;

namespace {

ModelFragment chain_with(const std::string& labels, long lo) {
  return parse_fragment("chain z lo=" + std::to_string(lo) + " hi=" + std::to_string(lo + long(labels.size()) - 1) +
                        " labels=" + labels + "\nzero=z:0\n");
}

// Brute force: tuples over deep points with equal rtype keys get equal truth.
std::size_t disagreements(const ModelFragment& m, const Formula& f, const std::vector<std::string>& vars, long r,
                          const Window& w) {
  std::vector<Element> dom;
  for (ElementId e : w.elements()) dom.push_back(m.element(e));
  const auto deep = deep_points(m, w, r);
  std::map<std::string, bool> seen;
  std::size_t bad = 0;
  std::vector<std::size_t> idx(vars.size(), 0);
  if (deep.empty()) return 0;
  for (;;) {
    std::vector<Element> t;
    std::map<std::string, Element> env;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      t.push_back(m.element(deep[idx[i]]));
      env[vars[i]] = t.back();
    }
    const std::string key = ref::rtype_key(m, t, r);
    const bool v = ref::holds(m, f, env, dom);
    auto [it, fresh] = seen.emplace(key, v);
    if (!fresh && it->second != v) ++bad;
    std::size_t k = vars.size();
    while (k > 0 && ++idx[k - 1] == deep.size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return bad;
}

}  // namespace

TEST_CASE("labels decide atomic A") {
  const ModelFragment m = chain_with("1101000111010010", -6);
  const Formula f = parse("(A x)", Signature::L());
  const IndiscernReport rep = check_indiscernability(m, f, Window::full(m));
  CHECK(rep.r == 0);
  CHECK(rep.ok());
  CHECK(rep.types_seen >= 2);
  CHECK(disagreements(m, f, {"x"}, 0, Window::full(m)) == 0);
}

TEST_CASE("successor existence is uniform on a long chain") {
  const ModelFragment m = chain_with(std::string(41, '0'), -20);
  const Formula f = parse("(exists y (= (S x) y))", Signature::L());
  const Window w(m, interior_window(m, 2));
  CHECK(check_indiscernability(m, f, w).ok());
  CHECK(disagreements(m, f, {"x"}, 2, w) == 0);
  const auto deep = deep_points(m, w, 2);
  for (ElementId e : deep) CHECK(ref::holds(m, f, {{"x", m.element(e)}}, ref::all_elements(m)));
}

TEST_CASE("periodic labels and A(S x)") {
  const ModelFragment m = chain_with(gen::repeat_to("10", 30), -15);
  const Formula f = parse("(A (S x))", Signature::L());
  const IndiscernReport rep = check_indiscernability(m, f, Window::full(m));
  CHECK(rep.r == 1);
  CHECK(rep.ok());
  CHECK(disagreements(m, f, {"x"}, 1, Window::full(m)) == 0);
}

TEST_CASE("satisfying r-types") {
  const ModelFragment m = chain_with("0110100110010110011010", -10);
  const Window w(m, interior_window(m, 1));

  const auto zero = satisfying_rtypes(m, parse("(= x 0)", Signature::L()), {"x"}, w);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].at(0, 1) == 0);

  const auto labelled = satisfying_rtypes(m, parse("(A x)", Signature::L()), {"x"}, w);
  REQUIRE_FALSE(labelled.empty());
  for (const auto& t : labelled) CHECK(t.nbhd_types[1] == "1");

  const Formula g = parse("(exists y (and (= (S x) y) (A y)))", Signature::L());
  const long r = static_cast<long>(radius(to_prenex(g)));
  const auto ts = satisfying_rtypes(m, to_prenex(g), {"x"}, Window(m, interior_window(m, r)));
  REQUIRE_FALSE(ts.empty());
  for (const auto& t : ts) CHECK(t.nbhd_types[1][static_cast<std::size_t>(r + 1)] == '1');
  // complement: every deep point whose successor is labelled has one of these types
  const Window wr(m, interior_window(m, r));
  for (ElementId e : deep_points(m, wr, r)) {
    const bool want = ref::label_at(m, Element{0, m.element(e).pos + 1});
    const RType t = r_type(m, {e}, r);
    CHECK(std::binary_search(ts.begin(), ts.end(), t) == want);
  }
}

TEST_CASE("r-type formulas") {
  const ModelFragment m = chain_with("0101100", -3);
  const RType t = r_type(m, {m.zero_id()}, 1);
  const std::string s = to_string(rtype_to_formula(t, {"x"}));
  CHECK(s.find("(= x 0)") != std::string::npos);

  const ModelFragment m2 = chain_with("0000000000000", -6);
  const RType pair = r_type(m2, {m2.id_of({0, 0}), m2.id_of({0, 3})}, 3);
  const std::string ps = to_string(rtype_to_formula(pair, {"x1", "x2"}));
  CHECK(ps.find("(= x2 (S (S (S x1))))") != std::string::npos);
  const ModelFragment m3 = chain_with("0100000", -3);
  const RType one = r_type(m3, {m3.id_of({0, 0})}, 1);
  CHECK(to_string(rtype_to_formula(one, {"x"})).find("(not (A (P x)))") != std::string::npos);
}

TEST_CASE("randomized: no same-type disagreements, and r-type QE is exact") {
  Rng rng(2024);
  for (int c = 0; c < 30; ++c) {
    const ModelFragment m = gen::random_structured_fragment(rng, 2, 12);
    const std::vector<std::string> free = c % 3 == 0 ? std::vector<std::string>{"x", "y"} : std::vector<std::string>{"x"};
    const Formula f = to_prenex(gen::random_prenex(rng, free, static_cast<int>(rng.below(2)), 4));
    const long r = static_cast<long>(radius(f));
    const Window w(m, interior_window(m, std::max<long>(r, 1)));
    const auto vars = free_variables(f);
    CAPTURE(to_string(f));
    CHECK(check_indiscernability(m, f, w).ok());
    CHECK(disagreements(m, f, vars, r, w) == 0);

    const auto types = satisfying_rtypes(m, f, vars, w);
    const Formula qe = rtypes_to_formula(types, vars);
    std::vector<Element> dom;
    for (ElementId e : w.elements()) dom.push_back(m.element(e));
    const auto deep = deep_points(m, w, r);
    for (std::size_t i = 0; i < deep.size(); i += 3) {
      std::map<std::string, Element> env;
      env[vars[0]] = m.element(deep[i]);
      if (vars.size() > 1) env[vars[1]] = m.element(deep[(i * 7) % deep.size()]);
      CHECK(ref::holds(m, f, env, dom) == ref::holds(m, qe, env, dom));
    }
  }
}
