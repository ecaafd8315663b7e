#include <doctest.h>

#include "zchain/error.hpp"
#include "zchain/formula.hpp"
#include "zchain/prenex.hpp"

using namespace zchain;

namespace {
const Signature L = Signature::L();
Formula p(const char* s) { return parse(s, L); }
}  // namespace

TEST_CASE("parse builds the expected nodes") {
  Formula f = p("(= (S x) y)");
  CHECK(f == Formula::eq(Term::apply("S", {Term::var("x")}), Term::var("y")));

  Formula g = p("(A (S (S 0)))");
  CHECK(g == Formula::rel("A", {numeral(2)}));
  CHECK(p("(A (lit 2))") == g);

  Formula h = p("(exists y (= (S x) y))");
  REQUIRE(h.op() == Op::Exists);
  CHECK(h.symbol() == "y");
  CHECK(h.child() == f);
}

TEST_CASE("printer round-trips") {
  for (const char* s : {"(= (S x) y)", "(A (lit 2))", "(A (lit -3))", "(exists y (and (A y) (not (= y x))))",
                        "(forall x (implies (A x) (or (A (S x)) false)))", "(= (S (P x)) (handle 17))", "true"}) {
    CAPTURE(s);
    Formula f = p(s);
    CHECK(to_string(f) == s);
    CHECK(p(to_string(f).c_str()) == f);
  }
  CHECK(to_string(p("(and (A x) (A y) (A z))")) == "(and (A x) (and (A y) (A z)))");
  CHECK(to_string(Term::apply("S", {Term::var("x")})) == "(S x)");
}

TEST_CASE("parse errors carry positions") {
  CHECK_THROWS_AS(p("(= x"), ParseError);
  CHECK_THROWS_AS(p("(B x)"), SignatureError);
  CHECK_THROWS_AS(p("(S x y)"), Error);
  CHECK_THROWS_AS(p("(A x y)"), SignatureError);
  try {
    p("(and (A x) )x");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() > 0);
  }
}

TEST_CASE("free variables and substitution avoid capture") {
  Formula f = p("(exists y (= (S x) y))");
  CHECK(free_variables(f) == std::vector<std::string>{"x"});
  Formula g = substitute(f, {{"x", Term::var("y")}});
  REQUIRE(g.op() == Op::Exists);
  CHECK(g.symbol() != "y");
  CHECK(free_variables(g) == std::vector<std::string>{"y"});
}

TEST_CASE("prenex form") {
  CHECK(to_prenex(p("(A x)")) == p("(A x)"));
  CHECK(to_prenex(p("(not (exists x (A x)))")) == p("(forall x0 (not (A x0)))"));
  CHECK(to_prenex(p("(and (exists x (A x)) (exists x (not (A x))))")) ==
        p("(exists x0 (exists x1 (and (A x0) (not (A x1)))))"));
  Formula q = to_prenex(p("(implies (forall y (A y)) (A x))"));
  CHECK(is_prenex(q));
  CHECK(q == p("(exists y0 (or (not (A y0)) (A x)))"));
}

TEST_CASE("radius") {
  CHECK(radius(p("(= x y)")) == 0);
  CHECK(radius(p("(= (S (S x)) y)")) == 2);
  CHECK(radius(p("(exists y (and (= (S x) y) (= (P y) x)))")) == 4);
  CHECK_THROWS_AS(radius(p("(and (A x) (exists y (A y)))")), NotPrenex);
  // bound-variable names do not matter
  CHECK(radius(p("(forall u (= (S u) (P x)))")) == radius(p("(forall v (= (S v) (P x)))")));
}
