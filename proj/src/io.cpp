#include "skelmetric/io.hpp"

#include "skelmetric/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace skelmetric::io {

using nlohmann::json;

bool GraphDocument::has_all_lengths() const {
    for (const auto& l : lengths)
        if (!l)
            return false;
    return true;
}

MetricGraph GraphDocument::metric() const {
    std::vector<Rational> values;
    values.reserve(lengths.size());
    for (EdgeIndex e = 0; e < lengths.size(); ++e) {
        if (!lengths[e])
            throw Error("io", "MissingLength", "edge '" + graph.edge(e).id + "' has no length");
        values.push_back(*lengths[e]);
    }
    return MetricGraph(graph, std::move(values));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("io", "Read", "cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

namespace {

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error("io", "Parse", e.what());
    }
}

const json& member(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key))
        throw Error("io", "Parse", std::string("missing key '") + key + "'");
    return obj.at(key);
}

std::string string_of(const json& j, const char* what) {
    if (!j.is_string())
        throw Error("io", "Parse", std::string(what) + " must be a string");
    return j.get<std::string>();
}

}  // namespace

GraphDocument parse_graph(const std::string& json_text) {
    const json doc = parse_json(json_text);
    GraphDocument out;
    if (doc.is_object() && doc.contains("name"))
        out.name = string_of(doc.at("name"), "name");
    for (const auto& v : member(doc, "vertices"))
        out.graph.add_vertex(string_of(v, "vertex id"));
    for (const auto& e : member(doc, "edges")) {
        const json& ends = member(e, "ends");
        if (!ends.is_array() || ends.size() != 2)
            throw Error("io", "Parse", "edge 'ends' must hold two vertex ids");
        out.graph.add_edge(string_of(member(e, "id"), "edge id"), string_of(ends[0], "end"),
                           string_of(ends[1], "end"));
        if (e.contains("length"))
            out.lengths.emplace_back(parse_rational(string_of(e.at("length"), "length")));
        else
            out.lengths.emplace_back(std::nullopt);
    }
    if (doc.contains("cusps"))
        for (const auto& c : doc.at("cusps"))
            out.graph.add_cusp(string_of(member(c, "id"), "cusp id"),
                               out.graph.vertex_index(string_of(member(c, "end"), "cusp end")));
    return out;
}

GraphDocument read_graph(const std::string& path) { return parse_graph(read_file(path)); }

namespace {

json graph_json(const Graph& g, const std::string& name, const std::vector<Rational>* lengths) {
    json doc = json::object();
    if (!name.empty())
        doc["name"] = name;
    doc["vertices"] = g.vertices();
    json edges = json::array();
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
        const Edge& edge = g.edge(e);
        json je = {{"id", edge.id}, {"ends", {g.vertices()[edge.u], g.vertices()[edge.v]}}};
        if (lengths)
            je["length"] = to_string((*lengths)[e]);
        edges.push_back(std::move(je));
    }
    doc["edges"] = std::move(edges);
    json cusps = json::array();
    for (const auto& c : g.cusps())
        cusps.push_back({{"id", c.id}, {"end", g.vertices()[c.end]}});
    doc["cusps"] = std::move(cusps);
    return doc;
}

}  // namespace

std::string write_graph(const Graph& g, const std::string& name) {
    return graph_json(g, name, nullptr).dump(2) + "\n";
}

std::string write_graph(const MetricGraph& m, const std::string& name) {
    return graph_json(m.graph(), name, &m.lengths()).dump(2) + "\n";
}

std::map<std::string, Rational> parse_lengths(const std::string& json_text) {
    const json doc = parse_json(json_text);
    if (!doc.is_object())
        throw Error("io", "Parse", "length map must be a JSON object");
    std::map<std::string, Rational> out;
    for (const auto& [key, value] : doc.items())
        out.emplace(key, parse_rational(string_of(value, "length")));
    return out;
}

std::map<std::string, Rational> read_lengths(const std::string& path) { return parse_lengths(read_file(path)); }

std::string write_lengths(const MetricGraph& m) {
    json doc = json::object();
    for (EdgeIndex e = 0; e < m.graph().edge_count(); ++e)
        doc[m.graph().edge(e).id] = to_string(m.length(e));
    return doc.dump(2) + "\n";
}

MetricGraph attach_lengths(const Graph& g, const std::map<std::string, Rational>& lengths) {
    std::vector<Rational> values;
    for (const auto& edge : g.edges()) {
        const auto it = lengths.find(edge.id);
        if (it == lengths.end())
            throw Error("io", "MissingLength", "no length for edge '" + edge.id + "'");
        values.push_back(it->second);
    }
    return MetricGraph(g, std::move(values));
}

}  // namespace skelmetric::io
