#include "skelmetric/error.hpp"
#include "skelmetric/generate.hpp"
#include "skelmetric/io.hpp"
#include "skelmetric/padic.hpp"
#include "skelmetric/pipeline.hpp"
#include "skelmetric/reconstruct.hpp"
#include "skelmetric/tate.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace skelmetric;

// Rationals cross the boundary as "num/den" strings; the Python package turns
// them into fractions.Fraction.

namespace {

Val parse_val(const std::string& text) { return text == "inf" ? Val::infinity() : Val(parse_rational(text)); }

py::dict interval(const tate::SplitInterval& i) {
    py::dict d;
    d["lo"] = to_string(i.lo);
    d["hi"] = to_string(i.hi);
    d["points"] = std::vector<long long>(i.integer_points.begin(), i.integer_points.end());
    return d;
}

std::map<std::string, std::string> named_lengths(const MetricGraph& m) {
    std::map<std::string, std::string> out;
    for (EdgeIndex e = 0; e < m.graph().edge_count(); ++e)
        out[m.graph().edge(e).id] = to_string(m.length(e));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Metric graphs recovered from splitting data";

    static py::exception<Error> error(m, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p)
                std::rethrow_exception(p);
        } catch (const Error& e) {
            PyErr_SetString(error.ptr(), ("[" + e.name() + "] " + e.what()).c_str());
        }
    });

    m.def("split_threshold", [](unsigned p, unsigned e) { return to_string(padic::split_threshold(p, e)); },
          py::arg("p"), py::arg("e"));
    m.def("preimage_exponent",
          [](unsigned p, unsigned e, const std::string& v) { return padic::preimage_exponent({p, e, parse_val(v)}); },
          py::arg("p"), py::arg("e"), py::arg("v"));
    m.def("is_split_ball",
          [](unsigned p, unsigned e, const std::string& v) { return padic::is_split_ball({p, e, parse_val(v)}); },
          py::arg("p"), py::arg("e"), py::arg("v"));

    m.def(
        "distinguish",
        [](const std::string& va, const std::string& vb, unsigned p) {
            const auto r = tate::distinguish(parse_rational(va), parse_rational(vb), p);
            py::dict d;
            d["n"] = r.params.alpha.n;
            d["l"] = r.params.alpha.l;
            d["m"] = r.params.alpha.m;
            d["i1_alpha"] = interval(r.i1_alpha);
            d["i1_beta"] = interval(r.i1_beta);
            d["i2_alpha"] = interval(tate::interval_I2(r.params.alpha));
            d["i2_beta"] = interval(tate::interval_I2(r.params.beta));
            d["sets_differ"] = r.sets_differ;
            d["length_gap"] = to_string(r.length_gap);
            return d;
        },
        py::arg("valpha"), py::arg("vbeta"), py::arg("p"));
    m.def(
        "thm43_witness",
        [](const std::string& va, const std::string& vb, unsigned p) {
            const auto w = tate::thm43_witness(parse_rational(va), parse_rational(vb), p);
            return py::make_tuple(w.e, w.alpha.str(), w.beta.str());
        },
        py::arg("valpha"), py::arg("vbeta"), py::arg("p"));
    m.def("p1_edge_length", [](const std::string& v) { return to_string(tate::p1_edge_length(parse_rational(v))); },
          py::arg("vlambda"));

    m.def(
        "verify_prop_a1",
        [](const std::string& graph_json, unsigned max_degree) {
            reconstruct::VerifyOptions opt;
            opt.max_degree = max_degree;
            const auto r = reconstruct::verify_prop_a1(io::parse_graph(graph_json).graph, opt);
            py::dict d;
            d["full_rank"] = r.full_rank;
            d["rank"] = r.rank;
            d["edges"] = r.edges;
            d["min_valency"] = r.min_valency;
            d["degree_used"] = r.degree_used;
            d["null_space_dim"] = r.null_space.size();
            return d;
        },
        py::arg("graph_json"), py::arg("max_degree") = 3);
    m.def(
        "reconstruct",
        [](const std::string& graph_json) {
            const auto doc = io::parse_graph(graph_json);
            auto system = reconstruct::constraint_matrix(doc.graph, reconstruct::VerifyOptions{});
            const MetricGraph hidden = doc.metric();
            reconstruct::measure_rhs(system, hidden);
            return named_lengths(MetricGraph(doc.graph, reconstruct::solve_lengths(system)));
        },
        py::arg("graph_json"),
        "Edge lengths solved from the loop lengths of the graph and its covers (lengths in the file are the hidden metric).");
    m.def(
        "recover",
        [](const std::string& graph_json, unsigned p, unsigned e_max, std::size_t i_max, long long denom_bound) {
            const auto doc = io::parse_graph(graph_json);
            pipeline::SplitOracle oracle(doc.metric(), p);
            pipeline::RecoveryOptions opt;
            opt.e_max = e_max;
            opt.i_max = i_max;
            opt.denom_bound = denom_bound;
            return named_lengths(pipeline::recover_all(doc.graph, oracle, opt).recovered);
        },
        py::arg("graph_json"), py::arg("p"), py::arg("e_max") = 64, py::arg("i_max") = 256, py::arg("denom_bound") = 16,
        "Edge lengths recovered from split-oracle answers alone; the file's lengths stay hidden behind the oracle.");
    m.def(
        "gen_graph",
        [](std::uint64_t seed, std::size_t max_edges, long long max_den) {
            generate::Rng rng(seed);
            const auto g = generate::with_random_lengths(rng, generate::min_valency3_graph(rng, max_edges), max_den);
            return io::write_graph(g, "random" + std::to_string(seed));
        },
        py::arg("seed"), py::arg("max_edges") = 9, py::arg("max_den") = 4);
}
