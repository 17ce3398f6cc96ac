#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "quipus/pso.hpp"

using namespace quipus;

namespace {

double sphere(std::span<const double> w) {
    double s = 0.0;
    for (double x : w) s += (x - 0.5) * (x - 0.5);
    return -s;
}

}  // namespace

TEST(Pso, SphereReachesOptimum) {
    PsoParams p;
    p.seed = 3;
    const auto r = optimize(sphere, 5, p);
    for (double x : r.best_position) EXPECT_NEAR(x, 0.5, 1e-2);
    EXPECT_EQ(r.best_score, sphere(r.best_position));
}

TEST(Pso, ConstantObjective) {
    const auto r = optimize([](std::span<const double>) { return 4.25; }, 3, PsoParams{});
    EXPECT_EQ(r.best_score, 4.25);
    EXPECT_EQ(r.best_position.size(), 3u);
}

TEST(Pso, MonotoneObjectiveHitsBound) {
    const auto r = optimize([](std::span<const double> w) { return w[0]; }, 1, PsoParams{});
    EXPECT_GE(r.best_position[0], 0.99);
}

TEST(Pso, NonFiniteObjectiveAborts) {
    EXPECT_THROW(optimize([](std::span<const double>) { return std::numeric_limits<double>::quiet_NaN(); }, 2,
                          PsoParams{}),
                 ObjectiveError);
}

TEST(Pso, InvalidParams) {
    PsoParams p;
    p.swarm_size = 1;
    EXPECT_THROW(optimize(sphere, 2, p), std::invalid_argument);
    EXPECT_THROW(optimize(sphere, 0, PsoParams{}), std::invalid_argument);
}

TEST(PsoProperty, TraceNonDecreasingAndPositionsInBox) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        PsoParams p;
        p.seed = seed;
        p.iterations = 100;
        p.inertia = 1.2;  // large steps push particles into the bounds
        bool inside = true;
        const auto r = optimize(
            [](std::span<const double> w) { return std::sin(7 * w[0]) + std::cos(5 * w[1]); }, 2, p,
            [&](std::size_t, std::span<const std::vector<double>> pos) {
                for (const auto& x : pos) {
                    for (double v : x) inside = inside && v >= 0.0 && v <= 1.0;
                }
            });
        EXPECT_TRUE(inside);
        ASSERT_EQ(r.trace.size(), p.iterations + 1);
        for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_GE(r.trace[i], r.trace[i - 1]);
        EXPECT_EQ(r.trace.back(), r.best_score);
        for (double v : r.best_position) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
    }
}

TEST(PsoProperty, SameSeedSameTrajectory) {
    PsoParams p;
    p.seed = 42;
    p.iterations = 50;
    std::vector<std::vector<double>> a, b;
    optimize(sphere, 3, p, [&](std::size_t, std::span<const std::vector<double>> pos) {
        for (const auto& x : pos) a.push_back(x);
    });
    optimize(sphere, 3, p, [&](std::size_t, std::span<const std::vector<double>> pos) {
        for (const auto& x : pos) b.push_back(x);
    });
    EXPECT_EQ(a, b);
    const auto r1 = optimize(sphere, 3, p);
    const auto r2 = optimize(sphere, 3, p);
    EXPECT_EQ(r1.best_position, r2.best_position);
    EXPECT_EQ(r1.trace, r2.trace);
}

TEST(GridSearch, SinglePoint) {
    const ParamGrid g{{3}, {0.0}, {2}, {0.5}};
    const auto r = grid_search(g, [](const GridPoint&) { return 0.7; });
    EXPECT_EQ(r.best, (GridPoint{3, 0.0, 2, 0.5}));
    EXPECT_EQ(r.table.size(), 1u);
}

TEST(GridSearch, PublishedGridSize) {
    const auto g = ParamGrid::published();
    EXPECT_EQ(g.size(), 30u * 5u * 7u * 11u);
    EXPECT_EQ(g.size(), 11550u);
    std::size_t calls = 0;
    const auto r = grid_search(g, [&](const GridPoint&) {
        ++calls;
        return 0.0;
    });
    EXPECT_EQ(calls, 11550u);
    EXPECT_EQ(r.table.size(), 11550u);
}

TEST(GridSearch, TiesGoToSmallerParameters) {
    const ParamGrid g{{5, 2}, {0.2, 0.1}, {3, 1}, {1.0, 0.0}};
    const auto r = grid_search(g, [](const GridPoint&) { return 1.0; });
    EXPECT_EQ(r.best, (GridPoint{2, 0.1, 1, 0.0}));
    const auto s = grid_search(g, [](const GridPoint& p) { return p.k == 5 ? 1.0 : 0.5; });
    EXPECT_EQ(s.best.k, 5u);
    EXPECT_EQ(s.best.epsilon, 0.1);
}

TEST(GridSearch, EmptyGridRejected) {
    const ParamGrid g{{}, {0.0}, {1}, {1.0}};
    EXPECT_THROW(grid_search(g, [](const GridPoint&) { return 0.0; }), std::invalid_argument);
}
