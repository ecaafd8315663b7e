#include <doctest.h>

#include <random>

#include "../support/reference.hpp"
#include "zchain/error.hpp"
#include "zchain/eval.hpp"
#include "zchain/model.hpp"

using namespace zchain;

namespace {

ModelFragment two_chains() {
  return parse_fragment(
      "# zero chain first\n"
      "chain a lo=-4 hi=4 labels=101010101\n"
      "chain b lo=0 hi=5 labels=110011\n"
      "zero=a:0\n");
}

}  // namespace

TEST_CASE("fragments parse, validate and print") {
  ModelFragment m = parse_fragment("chain a lo=-4 hi=4 labels=101010101\nzero=a:0\n");
  CHECK(m.size() == 9);
  CHECK(m.label(m.zero_id()));
  CHECK(parse_fragment(to_string(m)) == m);
  CHECK_THROWS_AS(parse_fragment("chain a lo=0 hi=3 labels=101\nzero=a:0\n"), FragmentError);
  CHECK_THROWS_AS(parse_fragment("chain a lo=0 hi=2 labels=101\nzero=a:0\nzero=a:1\n"), FragmentError);
  CHECK_THROWS_AS(parse_fragment("chain a lo=0 hi=2 labels=121\nzero=a:0\n"), FragmentError);
  CHECK_THROWS_AS(parse_fragment("chain a lo=0 hi=2 labels=101\n"), FragmentError);
}

TEST_CASE("signed distance") {
  ModelFragment m = two_chains();
  Element a{0, -1}, b{0, 2}, c{1, 3};
  CHECK(signed_distance(m, a, a) == SignedDistance::finite(0));
  CHECK(signed_distance(m, a, b) == SignedDistance::finite(3));
  CHECK(signed_distance(m, b, a) == SignedDistance::finite(-3));
  CHECK_FALSE(signed_distance(m, a, c).is_finite());
  CHECK_THROWS_AS(signed_distance(m, a, Element{1, 9}), UnknownElement);
}

TEST_CASE("neighborhoods respect the interior") {
  ModelFragment m = two_chains();
  CHECK(neighborhood(m, Element{0, 0}, 0) == std::vector<Element>{{0, 0}});
  auto nb = neighborhood(m, Element{0, 0}, 2);
  REQUIRE(nb.size() == 5);
  CHECK(nb.front().pos == -2);
  CHECK(nb.back().pos == 2);
  CHECK_THROWS_AS(neighborhood(m, Element{0, 4}, 2), InteriorViolation);
}

TEST_CASE("r-types") {
  ModelFragment m = parse_fragment("chain a lo=-8 hi=8 labels=00000001010000000\nzero=a:0\n");
  RType t = r_type(m, {m.zero_id()}, 1);
  CHECK(t.table == std::vector<std::optional<long>>{0, 0, 0, 0});
  CHECK(t.nbhd_types == std::vector<std::string>{"101", "101"});

  ModelFragment big = parse_fragment("chain a lo=-10 hi=10 labels=110100100010100101011\nzero=a:0\n");
  for (long gap : {2L, 5L}) {
    std::vector<ElementId> tuple{big.id_of({0, -3}), big.id_of({0, -3 + gap})};
    RType rt = r_type(big, tuple, 2);
    std::vector<Element> els{{0, -3}, {0, -3 + gap}};
    CHECK(ref::rtype_key(big, els, 2).find(gap <= 2 ? "2," : "inf,") != std::string::npos);
    if (gap == 2) {
      CHECK(rt.at(1, 2) == 2);
      CHECK(rt.at(2, 1) == -2);
    } else {
      CHECK_FALSE(rt.at(1, 2).has_value());
    }
  }
  CHECK_THROWS_AS(r_type(big, {big.id_of({0, 10})}, 1), InteriorViolation);
}

TEST_CASE("r_type equality matches the reference key") {
  ModelFragment m = parse_fragment(
      "chain a lo=-12 hi=12 labels=1011001110001011010011101\n"
      "chain b lo=0 hi=9 labels=1001101100\nzero=a:0\n");
  auto inner = interior_window(m, 2);
  std::vector<std::pair<RType, std::string>> seen;
  for (ElementId x : inner)
    for (ElementId y : inner) {
      RType t = r_type(m, {x, y}, 2);
      std::string k = ref::rtype_key(m, {m.element(x), m.element(y)}, 2);
      for (const auto& [t2, k2] : seen) CHECK((t == t2) == (k == k2));
      if (seen.size() < 40) seen.emplace_back(t, k);
    }
}

TEST_CASE("quantifier-free evaluation") {
  ModelFragment m = two_chains();
  const Signature L = Signature::L();
  ElementId z = m.zero_id();
  ElementId one = m.id_of({0, 1});
  ElementId other = m.id_of({1, 2});
  CHECK(eval_qf(m, parse("(A 0)", L), {}));
  CHECK(eval_qf(m, parse("(= (S a) b)", L), {{"a", z}, {"b", one}}));
  CHECK_FALSE(eval_qf(m, parse("(= (P a) b)", L), {{"a", one}, {"b", other}}));
  CHECK_THROWS_AS(eval_qf(m, parse("(A (S a))", L), {{"a", m.id_of({0, 4})}}), InteriorViolation);
  CHECK_THROWS_AS(eval_qf(m, parse("(exists y (A y))", L), {}), PreconditionError);
}

TEST_CASE("windowed evaluation") {
  ModelFragment m = two_chains();
  const Signature L = Signature::L();
  Formula f = parse("(exists x (A x))", L);
  CHECK(eval_windowed(m, f, {}, Window(m, {m.id_of({0, 0})})));
  CHECK_FALSE(eval_windowed(m, f, {}, Window(m, {m.id_of({0, 1}), m.id_of({1, 2})})));
  CHECK_FALSE(eval_windowed(m, f, {}, Window()));
}

TEST_CASE("compiled evaluation agrees with the reference evaluator") {
  ModelFragment m = parse_fragment(
      "chain a lo=-6 hi=6 labels=1011001110001\nchain b lo=0 hi=4 labels=10011\nzero=a:0\n");
  const Signature L = Signature::L();
  auto all = ref::all_elements(m);
  Window full = Window::full(m);
  for (const char* s : {"(exists y (and (= (S x) y) (A y)))", "(forall y (or (A y) (not (= (P y) x))))",
                        "(exists y (forall z (or (= z y) (not (= (S z) (S y))))))",
                        "(and (A (S (P x))) (not (= x 0)))", "(exists y (and (not (= y x)) (A (S y))))"}) {
    CAPTURE(s);
    Formula f = parse(s, L);
    CompiledFormula cf(f, {"x"});
    for (ElementId x = 0; x < m.size(); ++x) {
      bool ok_ref = true, want = false;
      try {
        want = ref::holds(m, f, {{"x", m.element(x)}}, all);
      } catch (const ref::Escape&) {
        ok_ref = false;
      }
      if (ok_ref) {
        CHECK(cf.eval(m, std::vector<ElementId>{x}, full) == want);
      } else {
        CHECK_THROWS_AS(cf.eval(m, std::vector<ElementId>{x}, full), InteriorViolation);
      }
    }
  }
}
