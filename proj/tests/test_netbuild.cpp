#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "quipus/dataset.hpp"
#include "quipus/measures.hpp"
#include "quipus/netbuild.hpp"

using namespace quipus;

namespace {

Network build(const Dataset& ds, std::size_t k, double pct) {
    BuildParams p;
    p.k = k;
    p.epsilon_percentile = pct;
    return build_network(ds.features(), ds.labels(), ds.class_count(), p);
}

Dataset one_dim(std::vector<double> xs, std::vector<ClassId> labels, std::size_t classes) {
    const std::size_t n = xs.size();
    std::vector<std::string> names;
    for (std::size_t c = 0; c < classes; ++c) names.push_back("c" + std::to_string(c));
    return Dataset(FeatureBlock(n, 1, std::move(xs)), std::move(labels), {"x"}, std::move(names));
}

}  // namespace

TEST(BuildNetwork, OneDimensionalExample) {
    const Dataset ds = one_dim({0, 1, 2, 10}, {0, 0, 0, 0}, 1);
    const Network net = build(ds, 2, 0.5);
    std::vector<ClassId> labels(ds.labels().begin(), ds.labels().end());
    EXPECT_EQ(oracle::edge_set(net.graph), oracle::construction(ds.features(), labels, 2, 0.5));
}

TEST(BuildNetwork, TwoPoints) {
    const Network net = build(one_dim({0, 1}, {0, 0}, 1), 1, 0.0);
    EXPECT_EQ(net.graph.edge_count(), 1u);
}

TEST(BuildNetwork, Errors) {
    EXPECT_THROW(build(one_dim({0}, {0}, 1), 1, 0.0), std::invalid_argument);
    EXPECT_THROW(build(one_dim({0, 1}, {0, 0}, 1), 0, 0.0), std::invalid_argument);
}

TEST(BuildNetwork, WineInstanceModularityNearReference) {
    // Measured on the label-blind graph, which is what the ensemble filter uses.
    const Dataset wine = load_csv(std::string(QUIPUS_DATA_DIR) + "/wine.csv");
    BuildParams p;
    p.k = 7;
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const SplitPair s = stratified_split(wine, 0.8, seed);
        const double q = modularity(build_label_blind_graph(s.first.features(), s.first.labels(),
                                                            s.first.class_count(), p));
        EXPECT_NEAR(q, 0.32, 0.10);
        total += q;
    }
    EXPECT_NEAR(total / 5.0, 0.32, 0.10);
}

TEST(NetbuildProperty, ConstructionMatchesLiteralRule) {
    std::mt19937_64 rng(101);
    for (int t = 0; t < 100; ++t) {
        const std::size_t rows = 3 + t % 18;
        const std::size_t cols = 1 + t % 3;
        const std::size_t classes = 2 + t % 2;
        const Dataset ds = oracle::random_dataset(rows, cols, classes, rng);
        const std::size_t k = 1 + rng() % 4;
        const double pct = static_cast<double>(rng() % 11) / 10.0;
        std::vector<ClassId> labels(ds.labels().begin(), ds.labels().end());
        const Network net = build(ds, k, pct);
        EXPECT_EQ(oracle::edge_set(net.graph), oracle::construction(ds.features(), labels, k, pct))
            << "trial " << t;
    }
}

TEST(NetbuildProperty, EdgesJoinSameLabel) {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 30; ++t) {
        const Dataset ds = oracle::random_dataset(20, 2, 3, rng);
        const Network net = build(ds, 1 + t % 5, 0.1 * (t % 10));
        for (auto [u, v] : net.graph.edges()) EXPECT_EQ(net.graph.label(u), net.graph.label(v));
    }
}

TEST(NetbuildProperty, PercentileZeroIsSymmetrizedKnn) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 30; ++t) {
        const Dataset ds = oracle::random_dataset(18, 2, 2, rng, false);
        const std::size_t k = 1 + t % 4;
        const Network net = build(ds, k, 0.0);
        std::vector<ClassId> labels(ds.labels().begin(), ds.labels().end());
        std::set<std::pair<NodeId, NodeId>> knn_only;
        for (NodeId i = 0; i < ds.rows(); ++i) {
            std::vector<std::pair<double, NodeId>> ranked;
            for (NodeId j = 0; j < ds.rows(); ++j) {
                if (j != i && labels[j] == labels[i]) ranked.emplace_back(oracle::euclidean(ds.features(), i, j), j);
            }
            std::sort(ranked.begin(), ranked.end());
            for (std::size_t r = 0; r < std::min(k, ranked.size()); ++r) {
                knn_only.emplace(std::min(i, ranked[r].second), std::max(i, ranked[r].second));
            }
        }
        EXPECT_EQ(oracle::edge_set(net.graph), knn_only);
    }
}

TEST(NetbuildProperty, NeighborhoodNeverSmallerThanKnn) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 30; ++t) {
        const Dataset ds = oracle::random_dataset(16, 2, 3, rng);
        const std::size_t k = 1 + t % 5;
        const Network net = build(ds, k, 0.1 * (t % 11));
        const auto sizes = ds.class_sizes();
        for (NodeId v = 0; v < net.graph.node_count(); ++v) {
            const std::size_t cls = static_cast<std::size_t>(net.graph.label(v));
            EXPECT_GE(net.graph.degree(v), std::min(k, sizes[cls] - 1));
        }
    }
}

TEST(Insertion, IdenticalPointIsNearest) {
    const Dataset ds = one_dim({0, 5, 1, 7}, {0, 1, 0, 1}, 2);
    const Network net = build(ds, 1, 0.0);
    const std::vector<double> p{1.0};
    const auto rep = insertion_links(net, p, {1, 0.0}, InsertionMode::per_class);
    EXPECT_EQ(rep.chosen_neighbors[0], (std::vector<NodeId>{2}));
    EXPECT_EQ(rep.chosen_neighbors[1], (std::vector<NodeId>{1}));
}

TEST(Insertion, PerClassTwoLinksEach) {
    std::mt19937_64 rng(4);
    const Dataset ds = oracle::random_dataset(15, 2, 3, rng, false);
    BuildParams p;
    p.k = 2;
    const Network net = build_network(ds.features(), ds.labels(), 3, p);
    const std::vector<double> point{0.3, -0.2};
    const auto rep = insertion_links(net, point, p, InsertionMode::per_class);
    EXPECT_EQ(rep.links_per_class, (std::vector<std::size_t>{2, 2, 2}));
    EXPECT_EQ(rep.total_links(), 6u);
    for (std::size_t c = 0; c < 3; ++c) {
        std::vector<std::pair<double, NodeId>> scan;
        for (NodeId v = 0; v < ds.rows(); ++v) {
            if (static_cast<std::size_t>(ds.label(v)) != c) continue;
            const double dx = ds.features().at(v, 0) - point[0];
            const double dy = ds.features().at(v, 1) - point[1];
            scan.emplace_back(std::sqrt(dx * dx + dy * dy), v);
        }
        std::sort(scan.begin(), scan.end());
        EXPECT_EQ(rep.chosen_neighbors[c], (std::vector<NodeId>{std::min(scan[0].second, scan[1].second),
                                                                 std::max(scan[0].second, scan[1].second)}));
    }
}

TEST(Insertion, WinePerClassGivesSevenPerClass) {
    const Dataset wine = load_csv(std::string(QUIPUS_DATA_DIR) + "/wine.csv");
    const SplitPair s = stratified_split(wine, 0.8, 0);
    BuildParams p;
    p.k = 7;
    const Network net = build_network(s.first.features(), s.first.labels(), 3, p);
    const auto rep = insertion_links(net, s.second.row(0), p, InsertionMode::per_class);
    EXPECT_EQ(rep.links_per_class, (std::vector<std::size_t>{7, 7, 7}));
}

TEST(Insertion, GlobalTakesKOverall) {
    const Dataset wine = load_csv(std::string(QUIPUS_DATA_DIR) + "/wine.csv");
    const SplitPair s = stratified_split(wine, 0.8, 0);
    BuildParams p;
    p.k = 7;
    const Network net = build_network(s.first.features(), s.first.labels(), 3, p);
    const auto rep = insertion_links(net, s.second.row(0), p, InsertionMode::global);
    EXPECT_EQ(rep.total_links(), 7u);
}

TEST(Insertion, DimensionMismatch) {
    const Network net = build(one_dim({0, 1}, {0, 0}, 1), 1, 0.0);
    const std::vector<double> p{1.0, 2.0};
    EXPECT_THROW(insertion_links(net, p, {}), std::invalid_argument);
}

TEST(NetbuildProperty, InsertionIsPureAndConsistent) {
    std::mt19937_64 rng(10);
    for (int t = 0; t < 30; ++t) {
        const Dataset ds = oracle::random_dataset(20, 2, 3, rng);
        BuildParams p;
        p.k = 1 + t % 4;
        p.epsilon_percentile = 0.1 * (t % 10);
        const Network net = build_network(ds.features(), ds.labels(), 3, p);
        const std::vector<double> point{0.5 * (t % 7), 1.0};
        for (auto mode : {InsertionMode::per_class, InsertionMode::global}) {
            const auto a = insertion_links(net, point, p, mode);
            const auto b = insertion_links(net, point, p, mode);
            EXPECT_EQ(a.links_per_class, b.links_per_class);
            EXPECT_EQ(a.chosen_neighbors, b.chosen_neighbors);
            std::size_t total = 0;
            for (const auto& c : a.chosen_neighbors) total += c.size();
            EXPECT_EQ(a.total_links(), total);
        }
    }
}
