#include <doctest.h>

#include <set>

#include "../support/gen.hpp"
#include "../support/reference.hpp"
#include "zchain/error.hpp"
#include "zchain/generate.hpp"
#include "zchain/indiscern.hpp"
#include "zchain/prenex.hpp"
#include "zchain/satisfaction.hpp"
#include "zchain/tree.hpp"

using namespace zchain;

namespace {

std::size_t count_label(const ModelFragment& m, bool one) {
  std::size_t c = 0;
  for (ElementId e = 0; e < m.size(); ++e) c += m.label(e) == one;
  return c;
}

bool ground_truth(const OracleModel& o, const Formula& f, const std::vector<std::string>& vars,
                  const std::vector<Handle>& args, const Window& w) {
  const ModelFragment& m = harness::fragment(o);
  std::map<HandleId, HandleId> to_el;
  for (HandleId h : handles_in(f)) to_el[h] = harness::element_of(o, h);
  const Formula in_l = translate(map_handles(f, to_el), harness::dictionary(o), Direction::Backward);
  std::map<std::string, Element> env;
  for (std::size_t i = 0; i < vars.size(); ++i) env[vars[i]] = m.element(harness::element_of(o, args[i]));
  std::vector<Element> dom;
  for (ElementId e : w.elements()) dom.push_back(m.element(e));
  return ref::holds(m, in_l, env, dom);
}

}  // namespace

TEST_CASE("witness kits at radius 0") {
  const ModelFragment m = parse_fragment("chain z lo=-10 hi=10 labels=110100010000100000001\nzero=z:0\n");
  const WitnessKit kit = build_witness_kit(m, 0, 1, 1);
  CHECK(kit.quota == 3);
  const std::size_t ones = std::min<std::size_t>(3, count_label(m, true));
  const std::size_t zeros = std::min<std::size_t>(3, count_label(m, false));
  const bool zero_extra = kit.v.size() == ones + zeros + 1;
  CHECK((kit.v.size() == ones + zeros || zero_extra));
  CHECK(kit.v_prime == kit.v);
  CHECK(std::binary_search(kit.v.begin(), kit.v.end(), m.zero_id()));
}

TEST_CASE("witness kits on a uniform chain") {
  const ModelFragment m = parse_fragment("chain z lo=-30 hi=30 labels=" + std::string(61, '0') + "\nzero=z:0\n");
  const WitnessKit kit = build_witness_kit(m, 1, 2, 0);
  // the deep points share one type; the two ends each have their own
  CHECK(kit.v.size() <= 3 * kit.quota + 1);
  std::set<std::string> deep_types;
  for (ElementId e : kit.v)
    if (m.interior(e, 1)) deep_types.insert(extended_type(m, Window::full(m), e, 1));
  CHECK(deep_types.size() == 1);
}

TEST_CASE("a large quota takes every point of a type") {
  const ModelFragment m = parse_fragment("chain z lo=-3 hi=3 labels=0100100\nzero=z:0\n");
  const WitnessKit kit = build_witness_kit(m, 0, 5, 5);
  CHECK(kit.v.size() == m.size());
  const Window empty(m, {});
  CHECK_THROWS_AS(build_witness_kit(m, 1, 1, 1, &empty), PreconditionError);
}

TEST_CASE("existential satisfaction against the hidden fragment") {
  const ModelFragment m = path_fragment("1011001", 12, 3);
  OracleModel o(m, builtin_dictionary("identity"), 8);
  const Formula f = parse("(exists y (and (= (S' x) y) (A' y)))", o.signature());
  const Window w(m, interior_window(m, 2));
  const HandleKit kit = hardcode(o, build_witness_kit(m, 2, 1, 1, &w));
  for (ElementId e : deep_points(m, w, 2)) {
    const Handle h = harness::handle_of(o, e);
    const auto U = neighborhood_handles(o, {h}, 2);
    CHECK(sat_existential(o, f, {"x"}, {h}, U, kit) == ground_truth(o, f, {"x"}, {h}, w));
  }
}

TEST_CASE("witnesses in V' need no U") {
  const ModelFragment m = path_fragment("0000000", 10, 3);
  OracleModel o(m, builtin_dictionary("identity"), 8);
  // some element is labelled 1; every chain end-free point sees it through V'
  const Formula f = parse("(exists y (A' y))", o.signature());
  const Window w = Window::full(m);
  const HandleKit kit = hardcode(o, build_witness_kit(m, 0, 1, 1, &w));
  const bool truth = count_label(m, true) > 0;
  CHECK(sat_existential(o, f, {"x"}, {o.enumerate(0)}, {}, kit) == truth);
}

TEST_CASE("satisfaction radii") {
  const DefDictionary id = builtin_dictionary("identity");
  const ModelFragment m = path_fragment("10110", 10, 1);
  const Window w(m, interior_window(m, 4));
  const Formula qf = parse("(= (S' (S' x)) y)", id.target);
  const SatRadius a = satisfaction_radius(qf, m, id, w);
  CHECK(a.components.size() == 1);
  CHECK(a.value == 2);
  CHECK(a.method == "existential");

  const Formula ex = parse("(exists y (= (S' x) y))", id.target);
  const SatRadius b = satisfaction_radius(ex, m, id, w);
  CHECK(b.value == 2 * static_cast<long>(radius(parse("(= (S x) y)", Signature::L()))));

  const DefDictionary ash = builtin_dictionary("ashift");
  const SatRadius c = satisfaction_radius(parse("(A' x)", ash.target), m, ash, w);
  CHECK(c.value >= 2);

  const Formula mixed = parse("(forall u (exists v (and (= (S' u) v) (A' x))))", id.target);
  const SatRadius d = satisfaction_radius(mixed, m, id, w);
  CHECK(d.method == "rtype");
  CHECK_THROWS_AS(satisfaction_radius(parse("(forall u (exists v (= (P' u) v)))", builtin_dictionary("exists-succ").target),
                                      m, builtin_dictionary("exists-succ"), w),
                  PreconditionError);
}

TEST_CASE("negated existentials are complements") {
  const ModelFragment m = path_fragment("0110100", 12, 5);
  OracleModel o(m, builtin_dictionary("swap"), 2);
  const Window w(m, interior_window(m, 2));
  const Formula pos = parse("(exists y (and (= (P' x) y) (A' y)))", o.signature());
  const Formula neg = parse("(not (exists y (and (= (P' x) y) (A' y))))", o.signature());
  const SatProgram pp = build_sat_program(o, pos, w), np = build_sat_program(o, neg, w);
  for (ElementId e : deep_points(m, w, 4)) {
    const Handle h = harness::handle_of(o, e);
    const auto U = neighborhood_handles(o, {h}, 4);
    CHECK(sat_general(o, pp, {h}, U) != sat_general(o, np, {h}, U));
  }
}

TEST_CASE("randomized sat_general matches the hidden fragment") {
  Rng rng(77);
  const std::vector<std::string> dicts{"identity", "swap", "ashift"};
  std::size_t cases = 0;
  for (int c = 0; c < 24; ++c) {
    const ModelFragment m = gen::random_structured_fragment(rng, 2, 14);
    const DefDictionary d = builtin_dictionary(dicts[c % 3]);
    OracleModel o(m, d, 100 + c);
    const Formula l = gen::random_prenex(rng, {"x"}, static_cast<int>(rng.below(2)), 4);
    const Formula f = translate(l, d, Direction::Forward);
    CAPTURE(to_string(f));
    const long depth = static_cast<long>(radius(to_prenex(translate(f, d, Direction::Backward))));
    const Window w(m, interior_window(m, std::max<long>(depth, 1)));
    SatProgram prog;
    try {
      prog = build_sat_program(o, f, w);
    } catch (const PreconditionError&) {
      continue;
    }
    const long r = prog.sr.value;
    for (ElementId e : deep_points(m, w, r)) {
      const Handle h = harness::handle_of(o, e);
      const auto U = neighborhood_handles(o, {h}, r);
      const std::vector<Handle> args(prog.sr.vars.size(), h);
      CHECK(sat_general(o, prog, args, U) == ground_truth(o, f, prog.sr.vars, args, w));
      ++cases;
    }
  }
  CHECK(cases > 100);
}

TEST_CASE("warm-up recovers the labels") {
  for (const std::string name : {"identity", "swap", "relational"}) {
    const ModelFragment m = path_fragment("101", 8, 4);
    OracleModel o(m, builtin_dictionary(name), 6);
    const WarmupConfig cfg = build_warmup(o, Window(m, interior_window(m, 1)));
    CHECK(warmup_compute_A(o, cfg, 2).bits == extract_path(m, 2));
    CHECK(warmup_compute_A(o, cfg, 0).bits == extract_path(m, 0));
  }
}
