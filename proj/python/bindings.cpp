#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "coderoute/compilers.hpp"
#include "coderoute/errors.hpp"
#include "coderoute/evaluators.hpp"
#include "coderoute/formula.hpp"
#include "coderoute/io.hpp"
#include "coderoute/qsim.hpp"
#include "coderoute/random_tapes.hpp"

namespace py = pybind11;
using namespace coderoute;

namespace {

// Tapes cross the boundary validated, so every method can rely on the tree.
struct PyTape {
  ProtocolTree tree;

  explicit PyTape(ProtocolTape tape) : tree(validate_and_build_tree(std::move(tape))) {}
};

std::uint8_t owner_of(const PyTape& t, const std::string& x, const std::string& y, const std::string& evaluator,
                      std::optional<std::uint32_t> p) {
  const Bits xb = parse_bits(x);
  const Bits yb = parse_bits(y);
  if (evaluator == "getowner") return get_owner(t.tree, xb, yb).owner;
  if (evaluator == "modp") return eval_modp(t.tree, xb, yb, p.value_or(t.tree.base()));
  if (evaluator == "depthfirst") return eval_depth_first(t.tree, xb, yb).owner;
  throw ValidationError("unknown evaluator '" + evaluator + "' (expected getowner, modp or depthfirst)");
}

}  // namespace

PYBIND11_MODULE(_coderoute, m) {
  m.doc() = "Code-routing protocols: span programs, protocol tapes, evaluators and a qudit simulator.";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<CapabilityError>(m, "CapabilityError", base.ptr());
  py::register_exception<InternalError>(m, "InternalError", base.ptr());

  py::class_<SpanProgram>(m, "SpanProgram")
      .def_static("from_json", &span_program_from_json, py::arg("text"))
      .def_static("library", &library_program, py::arg("name"))
      .def("to_json", &span_program_to_json)
      .def_property_readonly("modulus", &SpanProgram::modulus)
      .def_property_readonly("num_inputs", &SpanProgram::num_inputs)
      .def_property_readonly("size", &SpanProgram::size)
      .def_property_readonly("is_monotone", &SpanProgram::is_monotone)
      .def("evaluate", [](const SpanProgram& sp, const std::string& z) { return evaluate(sp, parse_bits(z)); })
      .def("truth_table",
           [](const SpanProgram& sp) {
             const auto t = truth_table(sp);
             return std::vector<int>(t.begin(), t.end());
           })
      .def("decompose", [](const SpanProgram& sp) {
        auto r = decompose(sp);
        std::vector<std::pair<std::size_t, bool>> g;
        for (const auto& b : r.g_map) g.emplace_back(b.source, b.negated);
        return py::make_tuple(std::move(r.msp), g);
      });

  m.def("library_names", &library_names);

  py::class_<PyTape>(m, "Tape")
      .def_static("from_json", [](const std::string& text) { return PyTape(tape_from_json(text)); })
      .def_static("from_formula", [](const std::string& expr) { return PyTape(compile_formula(parse_formula(expr))); })
      .def_static(
          "general", [](const SpanProgram& sp, std::size_t left, std::size_t right) {
            return PyTape(compile_theorem2(sp, left, right));
          },
          py::arg("program"), py::arg("left"), py::arg("right"))
      .def_static(
          "garden_hose",
          [](const std::string& fn, int x, int y) {
            return PyTape(compile_garden_hose_example(parse_garden_hose_function(fn), static_cast<std::uint8_t>(x),
                                                      static_cast<std::uint8_t>(y)));
          },
          py::arg("function"), py::arg("x"), py::arg("y"))
      .def_static("random", [](std::uint64_t seed) {
        std::mt19937_64 rng(seed);
        return PyTape(random_tape(rng));
      })
      .def("to_json", [](const PyTape& t) { return tape_to_json(t.tree.tape()); })
      .def_property_readonly("left_bits", [](const PyTape& t) { return t.tree.tape().left_bits; })
      .def_property_readonly("right_bits", [](const PyTape& t) { return t.tree.tape().right_bits; })
      .def_property_readonly("depth", [](const PyTape& t) { return t.tree.depth(); })
      .def("size_h", [](const PyTape& t) { return size_h(t.tree); })
      .def("weighted_size", [](const PyTape& t) { return weighted_size(t.tree); })
      .def("cost", [](const PyTape& t, const std::string& x,
                      const std::string& y) { return entanglement_cost(t.tree, parse_bits(x), parse_bits(y)); })
      .def("owner", &owner_of, py::arg("x"), py::arg("y"), py::arg("evaluator") = "getowner",
           py::arg("p") = py::none())
      .def(
          "simulate",
          [](const PyTape& t, const std::string& x, const std::string& y, std::uint64_t seed) {
            QsimOptions options;
            options.seed = seed;
            const auto r = run_quantum_tape(t.tree, parse_bits(x), parse_bits(y), options);
            py::dict d;
            d["owner"] = r.owner;
            d["success_prob"] = r.success_prob;
            d["wrong_side_trace_distance"] = r.wrong_side_trace_distance;
            d["epr_pairs_used"] = r.epr_pairs_used;
            return d;
          },
          py::arg("x"), py::arg("y"), py::arg("seed") = QsimOptions{}.seed);

  m.def("count_transform", &lemma3_transform, py::arg("f0"), py::arg("f0bar"), py::arg("p"));
}
