#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "quipus/graph.hpp"
#include "quipus/graph_io.hpp"
#include "quipus/measures.hpp"

using namespace quipus;

TEST(LabeledGraph, MergesDuplicatesAndSortsNeighbors) {
    const std::vector<Edge> edges{{2, 0}, {0, 2}, {1, 0}, {0, 1}};
    const LabeledGraph g({0, 0, 1}, {}, 2, edges);
    EXPECT_EQ(g.edge_count(), 2u);
    const auto nb = g.neighbors(0);
    EXPECT_EQ(std::vector<NodeId>(nb.begin(), nb.end()), (std::vector<NodeId>{1, 2}));
    EXPECT_TRUE(g.has_edge(2, 0));
    EXPECT_FALSE(g.has_edge(1, 2));
    EXPECT_EQ(g.row_id(2), 2u);
}

TEST(LabeledGraph, RejectsBadEdges) {
    const std::vector<Edge> loop{{1, 1}};
    const std::vector<Edge> far{{0, 5}};
    EXPECT_THROW(LabeledGraph({0, 0}, {}, 1, loop), GraphError);
    EXPECT_THROW(LabeledGraph({0, 0}, {}, 1, far), GraphError);
    EXPECT_THROW(LabeledGraph({0, 2}, {}, 2, {}), GraphError);
}

TEST(ClassSubgraph, SmallExamples) {
    const std::vector<Edge> edges{{0, 1}};
    const LabeledGraph g({0, 0, 1}, {}, 2, edges);
    const auto zero = class_subgraph(g, 0);
    EXPECT_EQ(zero.graph.node_count(), 2u);
    EXPECT_EQ(zero.graph.edge_count(), 1u);
    const auto one = class_subgraph(g, 1);
    EXPECT_EQ(one.graph.node_count(), 1u);
    EXPECT_EQ(one.graph.edge_count(), 0u);
    EXPECT_EQ(one.to_parent, (std::vector<NodeId>{2}));
    EXPECT_THROW(class_subgraph(g, 2), GraphError);
}

TEST(GraphProperty, DegreeSumIsTwiceEdges) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 50; ++t) {
        const std::size_t n = 2 + t % 15;
        const auto g = oracle::plain_graph(n, oracle::random_graph(n, 0.3, rng));
        std::size_t sum = 0;
        for (NodeId v = 0; v < n; ++v) {
            sum += g.degree(v);
            for (NodeId w : g.neighbors(v)) {
                EXPECT_NE(v, w);
                EXPECT_TRUE(g.has_edge(w, v));
            }
        }
        EXPECT_EQ(sum, 2 * g.edge_count());
        EXPECT_EQ(g.edges().size(), g.edge_count());
    }
}

TEST(GraphProperty, ClassSubgraphEdgesIffSameClassParentEdge) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 3 + t % 12;
        std::vector<ClassId> labels(n);
        std::uniform_int_distribution<int> cls(0, 2);
        for (auto& y : labels) y = cls(rng);
        const LabeledGraph g(labels, {}, 3, oracle::random_graph(n, 0.4, rng));
        const ClassPartition part(g);
        std::size_t nodes = 0;
        for (ClassId c = 0; c < 3; ++c) {
            const auto& sub = part.subgraphs[static_cast<std::size_t>(c)];
            nodes += sub.graph.node_count();
            for (NodeId a = 0; a < sub.graph.node_count(); ++a) {
                EXPECT_EQ(g.label(sub.to_parent[a]), c);
                EXPECT_EQ(part.to_local[sub.to_parent[a]], a);
                for (NodeId b = 0; b < sub.graph.node_count(); ++b) {
                    if (a == b) continue;
                    EXPECT_EQ(sub.graph.has_edge(a, b), g.has_edge(sub.to_parent[a], sub.to_parent[b]));
                }
            }
        }
        EXPECT_EQ(nodes, n);
    }
}

TEST(Overlay, ZeroLinksIsIsolated) {
    const std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
    const LabeledGraph g({0, 0, 0}, {}, 1, tri);
    const OverlayInsertion ov(g, {});
    EXPECT_EQ(ov.node_count(), 4u);
    EXPECT_EQ(ov.degree(ov.new_node()), 0u);
    const auto bc = betweenness(ov);
    const auto base = betweenness(g);
    for (NodeId v = 0; v < 3; ++v) EXPECT_EQ(bc[v], base[v]);
}

TEST(Overlay, LinkEveryNodeOfTriangle) {
    const std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
    const LabeledGraph g({0, 0, 0}, {}, 1, tri);
    const OverlayInsertion ov(g, {0, 1, 2});
    EXPECT_EQ(ov.degree(ov.new_node()), 3u);
    EXPECT_EQ(ov.edge_count(), 6u);
    EXPECT_EQ(ov.materialize().edge_count(), 6u);
}

TEST(Overlay, RejectsDuplicateAndDangling) {
    const LabeledGraph g({0, 0}, {}, 1, {});
    EXPECT_THROW(OverlayInsertion(g, {0, 0}), GraphError);
    EXPECT_THROW(OverlayInsertion(g, {2}), GraphError);
}

TEST(GraphProperty, OverlayDropRestoresBase) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 40; ++t) {
        const std::size_t n = 2 + t % 10;
        const auto g = oracle::plain_graph(n, oracle::random_graph(n, 0.4, rng));
        const LabeledGraph before = g;
        std::vector<NodeId> links;
        for (NodeId v = 0; v < n; ++v) {
            if (rng() % 2) links.push_back(v);
        }
        {
            const OverlayInsertion ov(g, links, 0);
            const LabeledGraph m = ov.materialize();
            for (NodeId v = 0; v < n; ++v) {
                for (NodeId w = 0; w < n; ++w) {
                    if (v != w) {
                        EXPECT_EQ(m.has_edge(v, w), g.has_edge(v, w));
                    }
                }
            }
            EXPECT_EQ(m.degree(ov.new_node()), links.size());
        }
        EXPECT_EQ(g, before);
    }
}

TEST(GraphIo, GraphmlContainsNodesAndEdges) {
    const std::vector<Edge> edges{{0, 1}};
    const LabeledGraph g({0, 1}, {7, 9}, 2, edges);
    const std::vector<std::string> names{"a", "b"};
    std::ostringstream out;
    write_graphml(out, g, names);
    const std::string s = out.str();
    EXPECT_NE(s.find("<graphml"), std::string::npos);
    EXPECT_NE(s.find("edgedefault=\"undirected\""), std::string::npos);
    EXPECT_NE(s.find(">9<"), std::string::npos);
    EXPECT_NE(s.find("<edge"), std::string::npos);
    std::ostringstream dot;
    write_dot(dot, g, names);
    EXPECT_NE(dot.str().find("--"), std::string::npos);
}
