#pragma once

// Graph files: UTF-8 JSON
//   {"name": str (optional),
//    "vertices": [str],
//    "edges": [{"id": str, "ends": [str, str], "length": "p/q" (optional)}],
//    "cusps": [{"id": str, "end": str}]}
// Length maps: {"<edge id>": "p/q", ...}

#include "skelmetric/graph.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace skelmetric::io {

struct GraphDocument {
    std::string name;
    Graph graph;
    std::vector<std::optional<Rational>> lengths;  // per edge index

    bool has_all_lengths() const;
    /// Throws io::MissingLength unless every edge carries a length.
    MetricGraph metric() const;
};

GraphDocument parse_graph(const std::string& json_text);
GraphDocument read_graph(const std::string& path);

std::string write_graph(const Graph& g, const std::string& name = {});
std::string write_graph(const MetricGraph& m, const std::string& name = {});

std::map<std::string, Rational> parse_lengths(const std::string& json_text);
std::map<std::string, Rational> read_lengths(const std::string& path);
std::string write_lengths(const MetricGraph& m);

/// Lengths keyed by edge id applied to `g`; throws io::MissingLength.
MetricGraph attach_lengths(const Graph& g, const std::map<std::string, Rational>& lengths);

std::string read_file(const std::string& path);

}  // namespace skelmetric::io
