#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace quipus {

/// Global-best particle swarm settings. Defaults are the values used for the
/// ensemble weights; `swarm_size` has no published value and defaults to 20.
struct PsoParams {
    double c1 = 0.5;
    double c2 = 0.1;
    double inertia = 0.9;
    std::size_t iterations = 500;
    std::size_t swarm_size = 20;
    std::uint64_t seed = 0;

    void validate() const;
    bool operator==(const PsoParams&) const = default;
};

struct PsoResult {
    std::vector<double> best_position;
    double best_score = 0.0;
    /// Global-best score after initialization (entry 0) and after every step.
    std::vector<double> trace;
};

class ObjectiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Objective = std::function<double(std::span<const double>)>;

/// Called after initialization (step 0) and after every update with all
/// particle positions.
using PsoObserver = std::function<void(std::size_t step, std::span<const std::vector<double>> positions)>;

/// Maximizes `objective` over the box [0,1]^dims. Positions start uniform in
/// the box with zero velocity and are clamped to the box after each move;
/// velocities are not clamped. Deterministic for a fixed seed.
PsoResult optimize(const Objective& objective, std::size_t dims, const PsoParams& params,
                   const PsoObserver& observer = {});

struct GridPoint {
    std::size_t k = 1;
    double epsilon = 0.0;
    std::size_t b = 1;
    double alpha = 1.0;

    bool operator==(const GridPoint&) const = default;
};

struct ParamGrid {
    std::vector<std::size_t> k;
    std::vector<double> epsilon;
    std::vector<std::size_t> b;
    std::vector<double> alpha;

    std::size_t size() const noexcept { return k.size() * epsilon.size() * b.size() * alpha.size(); }

    /// k in 1..30, epsilon in {0.1..0.5}, b in 1..7, alpha in {0.0, 0.1, ..., 1.0}.
    static ParamGrid published();
};

struct GridEntry {
    GridPoint point;
    double score = 0.0;
};

struct GridResult {
    GridPoint best;
    double best_score = 0.0;
    std::vector<GridEntry> table;  ///< every point, in enumeration order
};

/// Exhaustive search, maximizing. Points are enumerated in ascending
/// (k, epsilon, b, alpha) order and only a strictly better score replaces the
/// incumbent, so ties go to the smaller k, then epsilon, b, alpha.
GridResult grid_search(const ParamGrid& grid, const std::function<double(const GridPoint&)>& evaluate);

}  // namespace quipus
