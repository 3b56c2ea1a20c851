// skel: command-line front end to the skelmetric library.
//
// Exit status: 0 on success (or exact match, per subcommand), 1 on a domain
// error or a failed verdict, 2 on bad flags or unreadable input.

#include "skelmetric/covering.hpp"
#include "skelmetric/error.hpp"
#include "skelmetric/generate.hpp"
#include "skelmetric/io.hpp"
#include "skelmetric/padic.hpp"
#include "skelmetric/pipeline.hpp"
#include "skelmetric/reconstruct.hpp"
#include "skelmetric/tate.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace skelmetric;

// Input problems map to status 2, like flag errors.
bool is_parse_error(const Error& err) {
    return err.kind() == "Parse" || err.kind() == "Read" || err.name() == "cli::InvalidEnvironment";
}

std::size_t max_loops_from_env() {
    const char* raw = std::getenv("SKEL_MAX_LOOPS");
    if (!raw || !*raw)
        return kDefaultMaxLoops;
    try {
        std::size_t used = 0;
        const unsigned long long n = std::stoull(raw, &used);
        if (used == std::string(raw).size() && n > 0)
            return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
    throw Error("cli", "InvalidEnvironment", std::string("SKEL_MAX_LOOPS must be a positive integer, got '") + raw + "'");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw Error("cli", "Write", "cannot write " + path);
}

std::string point_set(const std::set<long long>& points) {
    std::string out = "{";
    for (auto it = points.begin(); it != points.end(); ++it)
        out += (it == points.begin() ? "" : ",") + std::to_string(*it);
    return out + "}";
}

std::string interval(const tate::SplitInterval& i) { return "[" + to_string(i.lo) + ", " + to_string(i.hi) + "]"; }

std::string name_or(const io::GraphDocument& doc, const std::string& fallback) {
    return doc.name.empty() ? fallback : doc.name;
}

// Table of hidden vs recovered lengths; true iff they all agree.
bool print_comparison(std::ostream& out, const Graph& g, const std::vector<Rational>& hidden,
                      const std::vector<Rational>& recovered) {
    bool exact = true;
    out << "edge hidden recovered match\n";
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        const bool same = hidden[e] == recovered[e];
        exact = exact && same;
        out << g.edge(e).id << ' ' << to_string(hidden[e]) << ' ' << to_string(recovered[e]) << ' '
            << (same ? "yes" : "no") << '\n';
    }
    out << "exact=" << (exact ? "true" : "false") << '\n';
    return exact;
}

void print_rank_report(std::ostream& out, const reconstruct::RankReport& r) {
    out << "edges=" << r.edges << " rank=" << r.rank << " full_rank=" << (r.full_rank ? "true" : "false") << '\n'
        << "rows_examined=" << r.rows_examined << " distinct_rows=" << r.distinct_rows << '\n'
        << "min_valency=" << r.min_valency << " valency_hypothesis=" << (r.valency_hypothesis ? "true" : "false")
        << '\n'
        << "degree_used=" << r.degree_used << " triple_covers_examined=" << r.triple_covers_examined << '\n';
    for (const auto& v : r.null_space) {
        out << "kernel";
        for (const auto& x : v)
            out << ' ' << to_string(x);
        out << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Skeleton metrics, Kummer splitting and metric recovery from loop lengths"};
    app.require_subcommand(1);

    // kummer
    auto* kummer = app.add_subcommand("kummer", "Preimages of B(1, p^-v) under z -> z^(p^e)");
    unsigned k_p = 0, k_e = 0;
    std::string k_v;
    kummer->add_option("--p", k_p, "prime")->required();
    kummer->add_option("--e", k_e, "exponent")->required();
    kummer->add_option("--v", k_v, "valuation NUM/DEN or inf")->required();

    // tate
    auto* tate_cmd = app.add_subcommand("tate", "Distinguish two Tate curves by their split intervals");
    std::string t_alpha, t_beta, t_report = "text";
    unsigned t_p = 0;
    tate_cmd->add_option("--valpha", t_alpha)->required();
    tate_cmd->add_option("--vbeta", t_beta)->required();
    tate_cmd->add_option("--p", t_p)->required();
    tate_cmd->add_option("--report", t_report)->check(CLI::IsMember({"text", "csv"}));

    // p1
    auto* p1 = app.add_subcommand("p1", "Edge length of P^1 minus {0, 1, inf, lambda}");
    std::string p1_v;
    p1->add_option("--vlambda", p1_v)->required();

    // covers
    auto* covers = app.add_subcommand("covers", "Connected coverings of a graph");
    std::string c_graph, c_dot;
    unsigned c_degree = 2;
    std::size_t c_limit = 1000;
    bool c_list = false;
    covers->add_option("graph", c_graph)->required();
    covers->add_option("--degree", c_degree)->check(CLI::IsMember({2, 3}));
    covers->add_option("--limit", c_limit, "most degree-3 covers to visit");
    covers->add_flag("--list", c_list);
    covers->add_option("--dot", c_dot, "write the covers as DOT");

    // reconstruct
    auto* recon = app.add_subcommand("reconstruct", "Edge lengths from loop lengths on coverings");
    std::string r_graph, r_lengths, r_dot;
    unsigned r_degree = 3;
    recon->add_option("graph", r_graph)->required();
    recon->add_option("--lengths", r_lengths, "hidden lengths JSON")->required();
    recon->add_option("--max-degree", r_degree)->check(CLI::IsMember({2, 3}));
    recon->add_option("--dot", r_dot, "write the recovered metric graph as DOT");

    // pipeline
    auto* pipe = app.add_subcommand("pipeline", "Recover a hidden metric from split-oracle answers");
    std::string q_graph, q_dot;
    unsigned q_p = 0;
    pipeline::RecoveryOptions q_opts;
    pipe->add_option("graph", q_graph, "graph with hidden lengths")->required();
    pipe->add_option("--p", q_p)->required();
    pipe->add_option("--e-max", q_opts.e_max)->check(CLI::PositiveNumber);
    pipe->add_option("--i-max", q_opts.i_max)->check(CLI::PositiveNumber);
    pipe->add_option("--denom-bound", q_opts.denom_bound)->check(CLI::PositiveNumber);
    pipe->add_option("--max-degree", q_opts.max_degree)->check(CLI::IsMember({1, 2, 3}));
    pipe->add_option("--dot", q_dot, "write the recovered metric graph as DOT");

    // verify-a1
    auto* verify = app.add_subcommand("verify-a1", "Rank of the loop-length system over double covers");
    std::string v_graph;
    reconstruct::VerifyOptions v_opts;
    verify->add_option("graph", v_graph)->required();
    verify->add_option("--max-degree", v_opts.max_degree)->check(CLI::IsMember({2, 3}));
    verify->add_option("--max-triple-covers", v_opts.max_triple_covers);

    // gen-graph
    auto* gen = app.add_subcommand("gen-graph", "Random connected graph of min valency 3 with lengths");
    std::uint64_t g_seed = 0;
    std::size_t g_edges = 9;
    std::int64_t g_den = 4;
    std::string g_dot;
    gen->add_option("--seed", g_seed)->required();
    gen->add_option("--max-edges", g_edges)->check(CLI::Range(2, 64));
    gen->add_option("--max-den", g_den)->check(CLI::Range(1, 1000));
    gen->add_option("--dot", g_dot);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::ostringstream out;
    int status = 0;
    try {
        if (*kummer) {
            padic::KummerQuery q{k_p, k_e, k_v == "inf" ? Val::infinity() : Val(parse_rational(k_v))};
            q.validate();
            out << "i=" << padic::preimage_exponent(q) << " preimages=" << padic::preimage_count(q)
                << " split=" << (padic::is_split_ball(q) ? "true" : "false") << '\n';
        } else if (*tate_cmd) {
            const auto r = tate::distinguish(parse_rational(t_alpha), parse_rational(t_beta), t_p);
            const auto i2a = tate::interval_I2(r.params.alpha);
            const auto i2b = tate::interval_I2(r.params.beta);
            if (t_report == "csv") {
                out << "side,v,p,n,l,m,i1_lo,i1_hi,i1_points,i2_lo,i2_hi,i2_points\n";
                auto row = [&](const char* side, const tate::TateParams& t, const tate::SplitInterval& i1,
                               const tate::SplitInterval& i2) {
                    out << side << ',' << to_string(t.v) << ',' << t.p << ',' << t.n << ',' << t.l << ',' << t.m << ','
                        << to_string(i1.lo) << ',' << to_string(i1.hi) << ",\"" << point_set(i1.integer_points)
                        << "\"," << to_string(i2.lo) << ',' << to_string(i2.hi) << ",\""
                        << point_set(i2.integer_points) << "\"\n";
                };
                row("alpha", r.params.alpha, r.i1_alpha, i2a);
                row("beta", r.params.beta, r.i1_beta, i2b);
            } else {
                const auto& a = r.params.alpha;
                out << "n=" << a.n << " l=" << a.l << " m=" << a.m << '\n'
                    << "I1(alpha)=" << interval(r.i1_alpha) << " points=" << point_set(r.i1_alpha.integer_points)
                    << '\n'
                    << "I1(beta)=" << interval(r.i1_beta) << " points=" << point_set(r.i1_beta.integer_points) << '\n'
                    << "I2(alpha)=" << interval(i2a) << " points=" << point_set(i2a.integer_points) << '\n'
                    << "I2(beta)=" << interval(i2b) << " points=" << point_set(i2b.integer_points) << '\n'
                    << "sets_differ=" << (r.sets_differ ? "true" : "false") << " length_gap=" << to_string(r.length_gap)
                    << '\n';
            }
        } else if (*p1) {
            const Rational length = tate::p1_edge_length(parse_rational(p1_v));
            out << "edge_length=" << to_string(length) << '\n';
        } else if (*covers) {
            const auto doc = io::read_graph(c_graph);
            const std::string base = name_or(doc, "G");
            std::vector<covering::Covering> found;
            if (c_degree == 2) {
                found = covering::enumerate_connected_double_covers(doc.graph, base);
            } else {
                covering::for_each_connected_triple_cover(
                    doc.graph,
                    [&](const covering::Covering& c) {
                        found.push_back(c);
                        return found.size() < c_limit;
                    },
                    base);
            }
            out << "degree=" << c_degree << " connected_covers=" << found.size() << '\n';
            if (c_list)
                for (const auto& c : found)
                    out << c.label << " vertices=" << c.total.vertex_count() << " edges=" << c.total.edge_count()
                        << " betti=" << betti(c.total) << '\n';
            if (!c_dot.empty()) {
                std::string dot;
                for (const auto& c : found)
                    dot += doc.has_all_lengths() ? to_dot(c.lift(doc.metric()), c.label) : to_dot(c.total, c.label);
                write_text(c_dot, dot);
            }
        } else if (*recon) {
            const auto doc = io::read_graph(r_graph);
            const MetricGraph hidden = io::attach_lengths(doc.graph, io::read_lengths(r_lengths));
            reconstruct::VerifyOptions opts;
            opts.max_degree = r_degree;
            opts.max_loops = max_loops_from_env();
            print_rank_report(out, reconstruct::verify_prop_a1(doc.graph, opts));
            auto system = reconstruct::constraint_matrix(doc.graph, opts, name_or(doc, "G"));
            reconstruct::measure_rhs(system, hidden);
            const auto recovered = reconstruct::solve_lengths(system);
            out << "rows=" << system.rows.size() << " coverings=" << system.coverings.size() << '\n';
            if (!print_comparison(out, doc.graph, hidden.lengths(), recovered))
                status = 1;
            if (!r_dot.empty())
                write_text(r_dot, to_dot(MetricGraph(doc.graph, recovered), name_or(doc, "G")));
        } else if (*pipe) {
            const auto doc = io::read_graph(q_graph);
            const MetricGraph hidden = doc.metric();
            q_opts.max_loops = max_loops_from_env();
            if (!padic::is_prime(q_p))
                throw Error("pipeline", "InvalidArgument", "p must be prime");
            pipeline::SplitOracle oracle(hidden, q_p);
            const auto report = pipeline::recover_all(doc.graph, oracle, q_opts);
            out << "p=" << q_p << " e_max=" << q_opts.e_max << " i_max=" << q_opts.i_max
                << " denom_bound=" << q_opts.denom_bound << '\n'
                << "loops_attempted=" << report.loops_attempted << " loops_recovered=" << report.loops_recovered
                << " loops_skipped=" << report.loops_skipped
                << " resolved_jointly=" << report.loops_resolved_jointly << '\n'
                << "rows=" << report.rows_used << " coverings=" << report.coverings_used
                << " degree_used=" << report.degree_used << '\n';
            if (!print_comparison(out, doc.graph, hidden.lengths(), report.recovered.lengths()))
                status = 1;
            if (!q_dot.empty())
                write_text(q_dot, to_dot(report.recovered, name_or(doc, "G")));
        } else if (*verify) {
            const auto doc = io::read_graph(v_graph);
            v_opts.max_loops = max_loops_from_env();
            const auto report = reconstruct::verify_prop_a1(doc.graph, v_opts);
            print_rank_report(out, report);
            const bool verdict = report.full_rank && report.valency_hypothesis;
            out << "verdict=" << (verdict ? "true" : "false") << '\n';
            if (!verdict)
                status = 1;
        } else if (*gen) {
            generate::Rng rng(g_seed);
            const auto g = generate::with_random_lengths(rng, generate::min_valency3_graph(rng, g_edges), g_den);
            const std::string name = "random" + std::to_string(g_seed);
            out << io::write_graph(g, name);
            if (!g_dot.empty())
                write_text(g_dot, to_dot(g, name));
        }
    } catch (const Error& err) {
        std::cout << out.str();
        std::cerr << "error [" << err.name() << "]: " << err.what() << '\n';
        return is_parse_error(err) ? 2 : 1;
    }
    std::cout << out.str();
    return status;
}
