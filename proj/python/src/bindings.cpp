#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "shaderevo/codegen.hpp"
#include "shaderevo/rest_api.hpp"
#include "shaderevo/simulation.hpp"

namespace py = pybind11;
using namespace shaderevo;

namespace {

// Store, service and router bundled so Python owns one object.
struct Server {
    explicit Server(const std::string& db_path) : store(db_path), service(store), api(service) {}

    Store store;
    Service service;
    RestApi api;
};

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Interactive evolution of vertex-shader displacement expressions";

    auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    auto validation = py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", validation.ptr());
    py::register_exception<NotFoundError>(m, "NotFoundError", error.ptr());
    py::register_exception<StaleCandidateError>(m, "StaleCandidateError", error.ptr());
    py::register_exception<StorageError>(m, "StorageError", error.ptr());

    py::class_<Rng>(m, "Rng")
        .def(py::init<std::uint64_t>(), py::arg("seed") = 0)
        .def("uniform01", &Rng::uniform01)
        .def("index", &Rng::index, py::arg("n"));

    py::class_<Expression>(m, "Expression")
        .def_property_readonly("depth", &Expression::depth)
        .def_property_readonly("node_count", &Expression::size)
        .def("__len__", &Expression::size)
        .def("__eq__", [](const Expression& a, const Expression& b) { return a == b; })
        .def("__hash__", [](const Expression& e) { return py::hash(py::str(serialize(e))); })
        .def("__str__", [](const Expression& e) { return serialize(e); })
        .def("__repr__", [](const Expression& e) { return "Expression('" + serialize(e) + "')"; });

    m.def("parse", &parse, py::arg("text"));
    m.def("serialize", &serialize, py::arg("expr"));
    m.def(
        "evaluate",
        [](const Expression& e, double x, double y, double z, double time) { return evaluate(e, Env{x, y, z, time}); },
        py::arg("expr"), py::arg("x") = 0.0, py::arg("y") = 0.0, py::arg("z") = 0.0, py::arg("time") = 0.0);
    m.def(
        "metrics",
        [](const Expression& e) {
            const auto r = metrics(e);
            return py::dict(py::arg("depth") = r.depth, py::arg("node_count") = r.node_count);
        },
        py::arg("expr"));

    py::class_<GrowthParams>(m, "GrowthParams")
        .def(py::init<>())
        .def_readwrite("min_init_depth", &GrowthParams::min_init_depth)
        .def_readwrite("max_init_depth", &GrowthParams::max_init_depth)
        .def_readwrite("hard_max_depth", &GrowthParams::hard_max_depth)
        .def_readwrite("terminal_probability", &GrowthParams::terminal_probability)
        .def("validate", &GrowthParams::validate);

    m.def("random_expression", &random_expression, py::arg("params"), py::arg("rng"));
    m.def("crossover", &crossover, py::arg("a"), py::arg("b"), py::arg("hard_max_depth"), py::arg("rng"));
    m.def("mutate", &mutate, py::arg("expr"), py::arg("params"), py::arg("rng"));

    py::class_<EvolutionConfig>(m, "EvolutionConfig")
        .def(py::init<>())
        .def_readwrite("population_size", &EvolutionConfig::population_size)
        .def_readwrite("display_count", &EvolutionConfig::display_count)
        .def_readwrite("crossover_prob", &EvolutionConfig::crossover_prob)
        .def_readwrite("mutation_prob", &EvolutionConfig::mutation_prob)
        .def_readwrite("tournament_size", &EvolutionConfig::tournament_size)
        .def_readwrite("growth", &EvolutionConfig::growth)
        .def_readwrite("grid_points_per_axis", &EvolutionConfig::grid_points_per_axis)
        .def_readwrite("grid_lo", &EvolutionConfig::grid_lo)
        .def_readwrite("grid_hi", &EvolutionConfig::grid_hi)
        .def_readwrite("per_point_cap", &EvolutionConfig::per_point_cap)
        .def("validate", &EvolutionConfig::validate);

    py::class_<SampleGrid>(m, "SampleGrid")
        .def_readonly("axis_values", &SampleGrid::axis_values)
        .def_readonly("per_point_cap", &SampleGrid::per_point_cap)
        .def_property_readonly("point_count", [](const SampleGrid& g) { return g.points.size(); });

    m.def("build_sample_grid", &build_sample_grid, py::arg("config") = EvolutionConfig{});
    m.def("evaluate_on_grid", &evaluate_on_grid, py::arg("expr"), py::arg("grid"));
    m.def("expression_distance", &expression_distance, py::arg("a"), py::arg("b"), py::arg("grid"));

    py::class_<ShaderArtifact>(m, "ShaderArtifact")
        .def_readonly("glsl_source", &ShaderArtifact::glsl_source)
        .def_readonly("expression_text", &ShaderArtifact::expression_text)
        .def_readonly("artifact_id", &ShaderArtifact::artifact_id);

    m.def("emit_expression", &emit_expression, py::arg("expr"));
    m.def("emit_vertex_shader", &emit_vertex_shader, py::arg("expr"));
    m.def(
        "lint_shader",
        [](std::string_view source) {
            py::list out;
            for (const auto& v : lint_shader(source).violations) {
                out.append(py::make_tuple(v.offset, v.message));
            }
            return out;
        },
        py::arg("source"));

    py::class_<TraceRow>(m, "TraceRow")
        .def_readonly("generation", &TraceRow::generation)
        .def_readonly("chosen_best_distance", &TraceRow::chosen_best_distance)
        .def_readonly("population_min_distance", &TraceRow::population_min_distance)
        .def_readonly("chosen_expression", &TraceRow::chosen_expression);

    m.def(
        "run_simulation",
        [](const std::string& target, int generations, std::uint64_t seed, const EvolutionConfig& config,
           int pick_top_k) {
            SimulationOptions options;
            options.config = config;
            options.pick_top_k = pick_top_k;
            py::gil_scoped_release release;
            return run_simulation(target, generations, seed, options);
        },
        py::arg("target"), py::arg("generations"), py::arg("seed"), py::arg("config") = EvolutionConfig{},
        py::arg("pick_top_k") = 1);

    py::class_<Server>(m, "Server")
        .def(py::init<const std::string&>(), py::arg("db_path") = ":memory:")
        .def(
            "request",
            [](Server& s, const std::string& method, const std::string& path, const std::string& body,
               const std::map<std::string, std::string>& query) {
                HttpResponse r;
                {
                    py::gil_scoped_release release;
                    r = s.api.handle({method, path, query, body});
                }
                return py::make_tuple(r.status, py::bytes(r.body), r.content_type);
            },
            py::arg("method"), py::arg("path"), py::arg("body") = "", py::arg("query") = std::map<std::string, std::string>{});
}
