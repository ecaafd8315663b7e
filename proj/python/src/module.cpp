// Python bindings. Formulas cross the boundary as s-expression text,
// elements as "chain:pos", handles as integers; reports come back as dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "zchain/dictionary.hpp"
#include "zchain/error.hpp"
#include "zchain/eval.hpp"
#include "zchain/formula.hpp"
#include "zchain/generate.hpp"
#include "zchain/guessing.hpp"
#include "zchain/indiscern.hpp"
#include "zchain/ma.hpp"
#include "zchain/model.hpp"
#include "zchain/oracle.hpp"
#include "zchain/prenex.hpp"
#include "zchain/satisfaction.hpp"
#include "zchain/tree.hpp"

namespace py = pybind11;
using namespace zchain;

namespace {

DefDictionary dictionary_arg(const std::string& name_or_text) {
  const auto names = builtin_dictionary_names();
  if (std::find(names.begin(), names.end(), name_or_text) != names.end()) return builtin_dictionary(name_or_text);
  return parse_dictionary(name_or_text);
}

ElementId element_arg(const ModelFragment& m, const std::string& tok) {
  const auto colon = tok.rfind(':');
  if (colon == std::string::npos) throw PreconditionError("element '" + tok + "' is not chain:pos");
  return m.id_of({m.chain_index(tok.substr(0, colon)), std::stol(tok.substr(colon + 1))});
}

py::list elements(const ModelFragment& m, const std::vector<ElementId>& ids) {
  py::list out;
  for (ElementId e : ids) out.append(to_string(m, e));
  return out;
}

struct PyOracle {
  PyOracle(const ModelFragment& m, const std::string& dict, std::uint64_t seed) : o(m, dictionary_arg(dict), seed) {}
  OracleModel o;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Z-chain structures, definitional dictionaries and oracle guessing";

  static py::exception<Error> base(m, "ZchainError");
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<InteriorViolation>(m, "InteriorViolation", base.ptr());
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseError&) {
      throw;
    } catch (const InteriorViolation&) {
      throw;
    } catch (const PreconditionError&) {
      throw;
    } catch (const Error& e) {
      base(e.what());
    }
  });

  m.def("dictionary_names", &builtin_dictionary_names);

  m.def(
      "parse",
      [](const std::string& text, const std::optional<std::string>& dict) {
        return to_string(parse(text, dict ? dictionary_arg(*dict).target : Signature::L()));
      },
      py::arg("text"), py::arg("dict") = py::none(), "Canonical form; the L' signature of `dict` when given.");
  m.def(
      "to_prenex", [](const std::string& text) { return to_string(to_prenex(parse(text, Signature::L()))); },
      py::arg("text"));
  m.def(
      "radius", [](const std::string& text) { return radius(to_prenex(parse(text, Signature::L()))); },
      py::arg("text"));
  m.def(
      "translate",
      [](const std::string& text, const std::string& dict, const std::string& direction) {
        const DefDictionary d = dictionary_arg(dict);
        const bool fwd = direction == "forward";
        if (!fwd && direction != "backward") throw PreconditionError("direction is forward or backward");
        return to_string(translate(parse(text, fwd ? d.source : d.target), d, fwd ? Direction::Forward : Direction::Backward));
      },
      py::arg("text"), py::arg("dict"), py::arg("direction") = "forward");

  py::class_<ModelFragment>(m, "Fragment")
      .def(py::init(&parse_fragment), py::arg("text"))
      .def_static(
          "path",
          [](const std::string& bits, long margin, std::uint64_t seed, std::size_t extra_chains) {
            return path_fragment(bits, margin, seed, extra_chains);
          },
          py::arg("bits"), py::arg("margin") = 40, py::arg("seed") = 1, py::arg("extra_chains") = 1)
      .def_property_readonly("size", &ModelFragment::size)
      .def_property_readonly("text", [](const ModelFragment& f) { return to_string(f); })
      .def("extract_path", &extract_path, py::arg("n"))
      .def(
          "eval",
          [](const ModelFragment& f, const std::string& text, const std::map<std::string, std::string>& assignment,
             std::optional<long> interior) {
            Assignment asg;
            for (const auto& [v, e] : assignment) asg[v] = element_arg(f, e);
            const Window w = interior ? Window(f, interior_window(f, *interior)) : Window::full(f);
            return eval_windowed(f, parse(text, Signature::L()), asg, w);
          },
          py::arg("formula"), py::arg("assignment") = std::map<std::string, std::string>{},
          py::arg("interior") = py::none())
      .def("__repr__", [](const ModelFragment& f) { return "<Fragment size=" + std::to_string(f.size()) + ">"; });

  m.def(
      "check_indiscernability",
      [](const ModelFragment& f, const std::string& text, std::size_t max_evals, std::uint64_t seed) {
        const Formula p = to_prenex(parse(text, Signature::L()));
        const long r = static_cast<long>(radius(p));
        const IndiscernReport ir =
            check_indiscernability(f, p, Window(f, interior_window(f, std::max<long>(r, 1))), {max_evals, seed});
        py::list vs;
        for (const auto& v : ir.violations) vs.append(py::make_tuple(elements(f, v.a), elements(f, v.b)));
        py::dict d;
        d["r"] = ir.r;
        d["tuples_tested"] = ir.tuples_tested;
        d["tuples_evaluated"] = ir.tuples_evaluated;
        d["types_seen"] = ir.types_seen;
        d["pairs_checked"] = ir.pairs_checked;
        d["violations"] = vs;
        d["ok"] = ir.ok();
        return d;
      },
      py::arg("fragment"), py::arg("formula"), py::arg("max_evals") = 4000, py::arg("seed") = 1);

  m.def(
      "is_mutually_algebraic",
      [](const ModelFragment& f, const std::string& text, std::optional<std::vector<std::string>> vars,
         std::optional<std::size_t> k) {
        const Formula g = parse(text, Signature::L());
        const auto vs = vars ? *vars : free_variables(g);
        const MAWitness w = is_mutually_algebraic(f, g, vs, Window::full(f), k);
        py::dict d;
        d["k"] = w.k;
        d["verdict"] = w.verdict;
        d["satisfying"] = w.satisfying;
        if (w.counterexample) {
          py::dict c;
          c["fixed"] = w.counterexample->fixed;
          c["values"] = elements(f, w.counterexample->fixed_values);
          c["completions"] = w.counterexample->completions;
          d["counterexample"] = c;
        } else {
          d["counterexample"] = py::none();
        }
        return d;
      },
      py::arg("fragment"), py::arg("formula"), py::arg("vars") = py::none(), py::arg("k") = py::none());

  py::class_<PyOracle>(m, "Oracle")
      .def(py::init<const ModelFragment&, const std::string&, std::uint64_t>(), py::arg("fragment"),
           py::arg("dict"), py::arg("seed") = 1)
      .def_property_readonly("size", [](const PyOracle& p) { return p.o.size(); })
      .def_property_readonly("eval_count", [](const PyOracle& p) { return p.o.eval_count(); })
      .def("enumerate", [](const PyOracle& p, std::size_t i) { return p.o.enumerate(i); }, py::arg("i"))
      .def(
          "holds",
          [](const PyOracle& p, const std::string& text, const std::map<std::string, Handle>& binding) {
            return p.o.holds(parse(text, p.o.signature()), binding);
          },
          py::arg("formula"), py::arg("binding") = std::map<std::string, Handle>{})
      .def(
          "handle_of",
          [](const PyOracle& p, const std::string& e) {
            return harness::handle_of(p.o, element_arg(harness::fragment(p.o), e));
          },
          py::arg("element"), "Harness access: the handle of a chain:pos element.");

  m.def(
      "guess",
      [](const PyOracle& p, std::size_t n, std::uint64_t fuel, const std::optional<std::string>& psi) {
        const ModelFragment& f = harness::fragment(p.o);
        std::optional<Formula> ps;
        if (psi) ps = parse(*psi, p.o.signature());
        const GuessConfig cfg = build_guess_config(p.o, Window(f, interior_window(f, 1)), ps);
        Fuel fu(fuel);
        const GuessBatch b = guess_A(p.o, cfg, n, fu);
        py::dict d;
        d["guesses"] = b.guesses;
        d["pre_dedup"] = b.pre_dedup;
        d["r1"] = b.r1;
        d["r2"] = b.r2;
        d["r_A"] = b.r_a;
        d["N"] = b.N;
        d["C"] = b.C;
        d["bound_alg2"] = b.bound_alg2;
        d["bound_batch"] = b.bound_batch;
        d["fuel_used"] = b.fuel_used;
        d["oracle_evals"] = b.oracle_evals;
        d["complete"] = b.complete;
        return d;
      },
      py::arg("oracle"), py::arg("n"), py::arg("fuel") = std::uint64_t{1} << 32, py::arg("psi") = py::none());

  m.def(
      "warmup",
      [](const PyOracle& p, std::size_t n) {
        const ModelFragment& f = harness::fragment(p.o);
        const WarmupConfig cfg = build_warmup(p.o, Window(f, interior_window(f, 1)));
        return warmup_compute_A(p.o, cfg, n).bits;
      },
      py::arg("oracle"), py::arg("n"));

  m.def(
      "tree_leftmost", [](const std::string& text, std::size_t n) { return parse_tree(text).leftmost(n); },
      py::arg("tree"), py::arg("n"));
  m.def(
      "tree_contains", [](const std::string& text, const std::string& bits) { return parse_tree(text).contains(bits); },
      py::arg("tree"), py::arg("bits"));
}
