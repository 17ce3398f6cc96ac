#include "quipus/pso.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace quipus {

void PsoParams::validate() const {
    if (c1 < 0.0 || c2 < 0.0 || inertia < 0.0) throw std::invalid_argument("pso: coefficients must be non-negative");
    if (iterations < 1) throw std::invalid_argument("pso: iterations must be at least 1");
    if (swarm_size < 2) throw std::invalid_argument("pso: swarm size must be at least 2");
}

namespace {

double checked(const Objective& f, std::span<const double> x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        std::string where;
        for (std::size_t i = 0; i < x.size(); ++i) where += (i ? "," : "") + std::to_string(x[i]);
        throw ObjectiveError("pso: objective returned a non-finite value at (" + where + ")");
    }
    return v;
}

}  // namespace

PsoResult optimize(const Objective& objective, std::size_t dims, const PsoParams& params,
                   const PsoObserver& observer) {
    params.validate();
    if (dims < 1) throw std::invalid_argument("pso: dimension must be at least 1");

    const std::size_t n = params.swarm_size;
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::vector<double>> pos(n, std::vector<double>(dims));
    std::vector<std::vector<double>> vel(n, std::vector<double>(dims, 0.0));
    for (auto& p : pos) {
        for (double& x : p) x = unit(rng);
    }
    std::vector<std::vector<double>> pbest = pos;
    std::vector<double> pbest_score(n);

    PsoResult result;
    std::size_t gbest = 0;
    for (std::size_t i = 0; i < n; ++i) {
        pbest_score[i] = checked(objective, pos[i]);
        if (pbest_score[i] > pbest_score[gbest]) gbest = i;
    }
    result.best_position = pbest[gbest];
    result.best_score = pbest_score[gbest];
    result.trace.reserve(params.iterations + 1);
    result.trace.push_back(result.best_score);
    if (observer) observer(0, pos);

    // Random factors for one step are drawn before any evaluation of that step.
    std::vector<double> r1(n * dims);
    std::vector<double> r2(n * dims);
    std::vector<double> scores(n);
    for (std::size_t step = 1; step <= params.iterations; ++step) {
        for (std::size_t j = 0; j < n * dims; ++j) {
            r1[j] = unit(rng);
            r2[j] = unit(rng);
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t d = 0; d < dims; ++d) {
                const std::size_t j = i * dims + d;
                vel[i][d] = params.inertia * vel[i][d] + params.c1 * r1[j] * (pbest[i][d] - pos[i][d]) +
                            params.c2 * r2[j] * (result.best_position[d] - pos[i][d]);
                pos[i][d] = std::clamp(pos[i][d] + vel[i][d], 0.0, 1.0);
            }
        }
        for (std::size_t i = 0; i < n; ++i) scores[i] = checked(objective, pos[i]);
        for (std::size_t i = 0; i < n; ++i) {
            if (scores[i] > pbest_score[i]) {
                pbest_score[i] = scores[i];
                pbest[i] = pos[i];
            }
            if (pbest_score[i] > result.best_score) {
                result.best_score = pbest_score[i];
                result.best_position = pbest[i];
            }
        }
        result.trace.push_back(result.best_score);
        if (observer) observer(step, pos);
    }
    return result;
}

ParamGrid ParamGrid::published() {
    ParamGrid g;
    for (std::size_t k = 1; k <= 30; ++k) g.k.push_back(k);
    g.epsilon = {0.1, 0.2, 0.3, 0.4, 0.5};
    for (std::size_t b = 1; b <= 7; ++b) g.b.push_back(b);
    for (int a = 0; a <= 10; ++a) g.alpha.push_back(a / 10.0);
    return g;
}

GridResult grid_search(const ParamGrid& grid, const std::function<double(const GridPoint&)>& evaluate) {
    if (grid.size() == 0) throw std::invalid_argument("grid_search: empty parameter grid");
    auto sorted = [](auto v) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        return v;
    };
    const auto ks = sorted(grid.k);
    const auto eps = sorted(grid.epsilon);
    const auto bs = sorted(grid.b);
    const auto alphas = sorted(grid.alpha);

    GridResult result;
    result.table.reserve(ks.size() * eps.size() * bs.size() * alphas.size());
    bool first = true;
    for (std::size_t k : ks) {
        for (double e : eps) {
            for (std::size_t b : bs) {
                for (double a : alphas) {
                    const GridPoint p{k, e, b, a};
                    const double score = evaluate(p);
                    result.table.push_back({p, score});
                    if (first || score > result.best_score) {
                        result.best = p;
                        result.best_score = score;
                        first = false;
                    }
                }
            }
        }
    }
    return result;
}

}  // namespace quipus
