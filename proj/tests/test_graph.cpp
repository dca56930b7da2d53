#include <doctest.h>

#include <sstream>

#include "lcr/errors.hpp"
#include "lcr/graph.hpp"
#include "lcr/model.hpp"
#include "lcr/rng.hpp"

using namespace lcr;
using graph::DirectedGraph;

TEST_CASE("empty graph") {
    const auto g = DirectedGraph::from_edge_list({}, 5);
    CHECK(g.n() == 5);
    CHECK(g.edge_type_count(EdgeType::e00) == 20);
    CHECK(g.edge_type_count(EdgeType::e11) == 0);
    const auto d = g.degrees();
    CHECK(d.d_max == 0);
    for (int i = 0; i < 5; ++i) CHECK(d.in_deg[i] == 0);
}

TEST_CASE("edge list collapse rules") {
    const auto both = DirectedGraph::from_edge_list({{0, 1}, {1, 0}}, 3);
    CHECK(both.state(0, 1) == EdgeType::e11);
    CHECK(both.state(1, 0) == EdgeType::e11);
    CHECK(both.edge_type_count(EdgeType::e11) == 2);

    const auto dup = DirectedGraph::from_edge_list({{0, 1}, {0, 1}}, 3);
    CHECK(dup.state(0, 1) == EdgeType::e10);
    CHECK(dup.state(1, 0) == EdgeType::e01);
    CHECK(dup.duplicate_count() == 1);

    const auto loops = DirectedGraph::from_edge_list({{2, 2}, {0, 1}}, 3);
    CHECK(loops.selfloop_count() == 1);
    CHECK(loops.directed_edges() == 1);

    CHECK_THROWS_AS(DirectedGraph::from_edge_list({{0, 7}}, 3), ParseError);
}

TEST_CASE("degrees of a single one-way dyad") {
    const auto g = DirectedGraph::from_edge_list({{0, 1}}, 4);
    const auto d = g.degrees();
    CHECK(d.out_deg[0] == 1);
    CHECK(d.in_deg[1] == 1);
    CHECK(d.out_deg[1] == 0);
    CHECK(d.recip_deg[0] == 0);
    CHECK(d.d_max == 1);
}

TEST_CASE("edge type counts match a dense enumeration on a sampled graph") {
    const int n = 50;
    model::ModelParams p(n, 0.5, -1.5, std::vector<double>(n, 0.0),
                         std::vector<double>(n, 0.0));
    const auto g = model::sample(p, 321);
    std::int64_t c00 = 0, c10 = 0, c01 = 0, c11 = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            switch (g.state(i, j)) {
                case EdgeType::e00: ++c00; break;
                case EdgeType::e10: ++c10; break;
                case EdgeType::e01: ++c01; break;
                case EdgeType::e11: ++c11; break;
            }
        }
    CHECK(g.edge_type_count(EdgeType::e00) == c00);
    CHECK(g.edge_type_count(EdgeType::e10) == c10);
    CHECK(g.edge_type_count(EdgeType::e01) == c01);
    CHECK(g.edge_type_count(EdgeType::e11) == c11);
    CHECK(c10 == c01);
    CHECK(c00 + c10 + c01 + c11 == static_cast<std::int64_t>(n) * (n - 1));

    const auto d = g.degrees();
    for (int i = 0; i < n; ++i) {
        int out = 0, in = 0, rec = 0;
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (g.state(i, j) == EdgeType::e10) ++out;
            if (g.state(i, j) == EdgeType::e01) ++in;
            if (g.state(i, j) == EdgeType::e11) ++rec;
        }
        CHECK(d.out_deg[i] == out);
        CHECK(d.in_deg[i] == in);
        CHECK(d.recip_deg[i] == rec);
    }
}

TEST_CASE("edge list round trip") {
    const int n = 40;
    model::ModelParams p(n, 0.2, -1.0, std::vector<double>(n, 0.0),
                         std::vector<double>(n, 0.0));
    const auto g = model::sample(p, 99);
    const auto h = DirectedGraph::from_edge_list(g.to_edge_list(), n);
    CHECK(g.to_edge_list() == h.to_edge_list());
    CHECK(g.edge_type_count(EdgeType::e11) == h.edge_type_count(EdgeType::e11));
}

TEST_CASE("edge list file parsing: integers, comments, errors") {
    std::istringstream in("# comment\n0\t1\n2\t0\n\n1\t2\n");
    const auto f = graph::read_edge_list(in);
    CHECK_FALSE(f.label_mode);
    CHECK(f.graph.n() == 3);
    CHECK(f.graph.directed_edges() == 3);

    std::istringstream bad("0\t1\n5\n");
    CHECK_THROWS_AS(graph::read_edge_list(bad), ParseError);

    std::istringstream over("0\t9\n");
    CHECK_THROWS_AS(graph::read_edge_list(over, 3), ParseError);
}

TEST_CASE("edge list file parsing: labels map by first appearance") {
    std::istringstream in("alice\tbob\nbob\talice\ncarol\talice\n");
    const auto f = graph::read_edge_list(in);
    CHECK(f.label_mode);
    REQUIRE(f.labels.size() == 3);
    CHECK(f.labels[0] == "alice");
    CHECK(f.labels[1] == "bob");
    CHECK(f.labels[2] == "carol");
    CHECK(f.graph.state(0, 1) == EdgeType::e11);
    CHECK(f.graph.state(2, 0) == EdgeType::e10);
}

TEST_CASE("edge list writer emits tab-separated sorted pairs") {
    const auto g = DirectedGraph::from_edge_list({{1, 0}, {0, 1}, {2, 1}}, 3);
    std::ostringstream out;
    graph::write_edge_list(out, g);
    CHECK(out.str() == "0\t1\n1\t0\n2\t1\n");
}
