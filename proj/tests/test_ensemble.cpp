#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "quipus/ensemble.hpp"
#include "quipus/model_io.hpp"

using namespace quipus;

namespace {

Dataset load(const char* name) { return load_csv(std::string(QUIPUS_DATA_DIR) + "/" + name); }

PsoParams quick_pso() {
    PsoParams p;
    p.iterations = 60;
    p.swarm_size = 10;
    return p;
}

// Column 0 separates the classes perfectly; column 1 is noise large enough
// to swamp column 0 in the instance distances.
Dataset separable(std::mt19937_64& rng) {
    const std::size_t rows = 60;
    std::uniform_real_distribution<double> noise(0.0, 1.0);
    std::vector<double> data(rows * 2);
    std::vector<ClassId> labels(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        labels[i] = static_cast<ClassId>(i % 3);
        data[i] = 5.0 * labels[i] + 0.5 * noise(rng);
        data[rows + i] = 40.0 * noise(rng);
    }
    return Dataset(FeatureBlock(rows, 2, std::move(data)), std::move(labels), {"good", "noise"}, {"a", "b", "c"});
}

}  // namespace

TEST(Bundle, GraphCounts) {
    EXPECT_EQ(build_bundle(load("iris.csv"), {7, 0.0}).graph_count(), 5u);
    EXPECT_EQ(build_bundle(load("wine.csv"), {7, 0.0}).graph_count(), 14u);
}

TEST(Bundle, DuplicateColumnsGiveIdenticalGraphs) {
    const Dataset iris = load("iris.csv");
    const std::size_t cols[] = {2, 2};
    const Dataset dup(iris.features().select_cols(cols), {iris.labels().begin(), iris.labels().end()}, {"x", "y"},
                      iris.class_names());
    const auto b = build_bundle(dup, {5, 0.0});
    EXPECT_EQ(b.graphs[1].graph, b.graphs[2].graph);
    EXPECT_EQ(b.modularities[1], b.modularities[2]);
}

TEST(Filter, Examples) {
    NetworkBundle b;
    b.modularities = {0.3181, 0.3189, 0.0924, 0.3181, 0.3008};
    b.graphs.resize(5);
    b.active.assign(5, true);
    b.weights.assign(5, 0.5);
    const auto f = filter_by_modularity(b);
    EXPECT_EQ(f.active, (std::vector<bool>{true, true, false, true, false}));
    EXPECT_FALSE(f.weights[2].has_value());
    EXPECT_TRUE(f.weights[1].has_value());

    b.modularities = {0.5, 0.1, 0.2, 0.3, 0.4};
    EXPECT_EQ(filter_by_modularity(b).active_indices(), (std::vector<std::size_t>{0}));
}

TEST(WeightedPredict, Examples) {
    const std::vector<ClassDistribution> one{{0.2, 0.8}};
    const std::vector<double> w1{1.0};
    EXPECT_EQ(weighted_predict(one, w1).distribution, one[0]);

    const std::vector<ClassDistribution> two{{1.0, 0.0}, {0.0, 1.0}};
    const std::vector<double> w2{0.7, 0.3};
    const auto p = weighted_predict(two, w2);
    EXPECT_EQ(p.cls, 0);
    EXPECT_NEAR(p.distribution[0], 0.7, 1e-12);
    EXPECT_NEAR(p.distribution[1], 0.3, 1e-12);

    const std::vector<ClassDistribution> dom{{0.1, 0.9}, {1.0, 0.0}};
    const std::vector<double> wz{1.0, 0.0};
    EXPECT_EQ(weighted_predict(dom, wz).cls, 1);

    const std::vector<double> zero{0.0, 0.0};
    EXPECT_EQ(weighted_predict(two, zero).distribution, (ClassDistribution{0.5, 0.5}));
    EXPECT_THROW(weighted_predict(two, w1), std::invalid_argument);
}

TEST(WeightedPredict, ProductAggregation) {
    const std::vector<ClassDistribution> two{{0.5, 0.5}, {0.2, 0.8}};
    const std::vector<double> w{1.0, 2.0};
    const auto p = weighted_predict(two, w, Aggregation::product);
    EXPECT_EQ(p.cls, 1);
    EXPECT_NEAR(p.distribution[0], 0.02 / (0.02 + 0.32), 1e-12);
}

TEST(Tensor, EmptyOptSet) {
    const Dataset iris = load("iris.csv");
    auto b = build_bundle(iris, {3, 0.0});
    const std::vector<std::size_t> none;
    const auto t = probability_tensor(b, iris.subset(none));
    EXPECT_EQ(t.instances(), 0u);
    EXPECT_EQ(t.graphs(), 5u);
}

TEST(EnsembleProperty, TensorSlicesAreDistributionsAndPure) {
    const Dataset wine = load("wine.csv");
    const SplitPair s = stratified_split(wine, 0.8, 1);
    auto b = filter_by_modularity(build_bundle(s.first, {7, 0.0}));
    b.hlnb_params = {3, 0.5};
    const auto t = probability_tensor(b, s.second);
    for (std::size_t i = 0; i < t.instances(); ++i) {
        for (std::size_t g = 0; g < t.graphs(); ++g) {
            double sum = 0.0;
            for (double v : t.slice(i, g)) sum += v;
            EXPECT_NEAR(sum, 1.0, 1e-9);
        }
    }
    EXPECT_EQ(probability_tensor(b, s.second), t);
}

TEST(EnsembleProperty, CachedObjectiveMatchesFromScratch) {
    const Dataset wine = load("wine.csv");
    const SplitPair s = stratified_split(wine, 0.8, 2);
    auto b = build_bundle(s.first, {7, 0.0});
    b.hlnb_params = {3, 1.0};
    const auto t = probability_tensor(b, s.second);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> w(t.graphs());
        for (double& x : w) x = u(rng);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < s.second.rows(); ++i) {
            const auto per_graph = graph_distributions(b, s.second.row(i));
            if (weighted_predict(per_graph, w).cls == s.second.label(i)) ++correct;
        }
        EXPECT_EQ(tensor_accuracy(t, s.second.labels(), w),
                  static_cast<double>(correct) / static_cast<double>(s.second.rows()));
    }
}

TEST(EnsembleProperty, ModelInvariantsAndObjectiveAtBest) {
    const Dataset wine = load("wine.csv");
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        TrainingOptions opt;
        opt.seed = seed;
        const QuipusModel m = train(wine, {7, 0.0}, {3, 1.0}, quick_pso(), opt);
        const auto& b = m.bundle;
        EXPECT_EQ(b.graph_count(), wine.arity() + 1);
        EXPECT_TRUE(b.active[NetworkBundle::kInstance]);
        const auto slots = b.active_indices();
        ASSERT_EQ(slots.size(), m.weights.size());
        for (std::size_t g = 0; g < b.graph_count(); ++g) {
            EXPECT_EQ(b.weights[g].has_value(), b.active[g]);
            if (b.active[g] && g != NetworkBundle::kInstance) {
                EXPECT_GE(m.filter_modularities[g], m.filter_modularities[NetworkBundle::kInstance]);
            }
        }
        for (double w : m.weights) {
            EXPECT_GE(w, 0.0);
            EXPECT_LE(w, 1.0);
        }

        // Recompute the objective on the same optimization split.
        const SplitPair s = stratified_split(wine, 1.0 - opt.opt_fraction, seed);
        auto staged = filter_by_modularity(build_bundle(s.first, {7, 0.0}));
        staged.hlnb_params = {3, 1.0};
        EXPECT_EQ(staged.active, b.active);
        const auto t = probability_tensor(staged, s.second, opt.ensemble);
        EXPECT_EQ(tensor_accuracy(t, s.second.labels(), m.weights), m.opt_accuracy);
    }
}

TEST(EnsembleProperty, WeightScalingKeepsPredictions) {
    std::mt19937_64 rng(4);
    const Dataset iris = load("iris.csv");
    const SplitPair s = stratified_split(iris, 0.8, 4);
    auto b = build_bundle(s.first, {5, 0.0});
    b.hlnb_params = {2, 0.5};
    const auto t = probability_tensor(b, s.second);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> w(t.graphs());
        for (double& x : w) x = u(rng);
        const double scale = 0.01 + 10.0 * u(rng);
        std::vector<double> scaled = w;
        for (double& x : scaled) x *= scale;
        for (std::size_t i = 0; i < t.instances(); ++i) {
            EXPECT_EQ(weighted_predict(t, i, w).cls, weighted_predict(t, i, scaled).cls);
        }
    }
}

TEST(EnsembleProperty, PredictionLeavesModelUnchanged) {
    const Dataset iris = load("iris.csv");
    const QuipusModel m = train(iris, {5, 0.0}, {2, 0.5}, quick_pso());
    const auto before = model_to_json(m).dump();
    for (std::size_t r = 0; r < iris.rows(); r += 7) predict(m, iris.row(r));
    EXPECT_EQ(model_to_json(m).dump(), before);
}

TEST(EnsembleProperty, InstanceOnlyModelEqualsBaseline) {
    const Dataset wine = load("wine.csv");
    const SplitPair s = stratified_split(wine, 0.8, 5);
    const BuildParams build{7, 0.0};
    const HlnbParams hlnb{3, 1.0};
    QuipusModel m;
    m.bundle = build_bundle(s.first, build);
    m.bundle.hlnb_params = hlnb;
    m.bundle.modularities.assign(m.bundle.graph_count(), -1.0);
    m.bundle.modularities[0] = 1.0;
    m.bundle = filter_by_modularity(std::move(m.bundle));
    m.weights = {0.37};
    m.bundle.weights[0] = 0.37;
    const BaselineModel base = train_baseline(s.first, build, hlnb);
    for (std::size_t i = 0; i < s.second.rows(); ++i) {
        const auto q = predict(m, s.second.row(i));
        const auto p = predict(base, s.second.row(i));
        EXPECT_EQ(q.cls, p.cls);
        for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(q.distribution[c], p.distribution[c], 1e-12);
    }
}

TEST(Train, SeparatingAttributeIsActiveAndPerfect) {
    std::mt19937_64 rng(6);
    const Dataset ds = separable(rng);
    const QuipusModel m = train(ds, {3, 0.0}, {1, 0.0}, quick_pso());
    EXPECT_TRUE(m.bundle.active[1]);
    EXPECT_EQ(m.opt_accuracy, 1.0);
}

TEST(Train, EmptyOptPartRejected) {
    const Dataset iris = load("iris.csv");
    TrainingOptions opt;
    opt.opt_fraction = 0.0;
    EXPECT_THROW(train(iris, {3, 0.0}, {1, 1.0}, quick_pso(), opt), std::invalid_argument);
    opt.opt_fraction = 1.0;
    EXPECT_THROW(train(iris, {3, 0.0}, {1, 1.0}, quick_pso(), opt), std::invalid_argument);
}

TEST(Predict, BlobsRecoverOwnClass) {
    std::mt19937_64 rng(7);
    const Dataset ds = oracle::blobs(20, 3, 2, 0.5, rng);
    const QuipusModel m = train(ds, {3, 0.0}, {2, 0.5}, quick_pso());
    for (std::size_t r = 0; r < ds.rows(); ++r) EXPECT_EQ(predict(m, ds.row(r)).cls, ds.label(r));
}

TEST(Predict, DimensionMismatch) {
    const Dataset iris = load("iris.csv");
    const QuipusModel m = train(iris, {3, 0.0}, {1, 1.0}, quick_pso());
    const std::vector<double> bad{1.0, 2.0};
    EXPECT_THROW(predict(m, bad), std::invalid_argument);
}

TEST(ModelIo, RoundTrip) {
    const Dataset iris = load("iris.csv");
    const QuipusModel m = train(iris, {4, 0.2}, {2, 0.3}, quick_pso());
    const QuipusModel back = model_from_json(model_to_json(m));
    EXPECT_EQ(model_to_json(back), model_to_json(m));
    for (std::size_t r = 0; r < iris.rows(); r += 5) {
        EXPECT_EQ(predict(back, iris.row(r)).distribution, predict(m, iris.row(r)).distribution);
    }
    auto doc = model_to_json(m);
    doc["version"] = 99;
    EXPECT_THROW(model_from_json(doc), std::exception);
}
