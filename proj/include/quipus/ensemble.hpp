#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "quipus/dataset.hpp"
#include "quipus/hlnb.hpp"
#include "quipus/netbuild.hpp"
#include "quipus/pso.hpp"

namespace quipus {

/// How per-graph class distributions are combined with the graph weights.
enum class Aggregation {
    sum,      ///< sum_g w_g * p_g
    product,  ///< prod_g p_g ^ w_g
};

std::string_view to_string(Aggregation a);
Aggregation aggregation_from_string(std::string_view s);

/// The instance network plus one network per attribute. Slot 0 is the
/// instance network; slot 1 + a is attribute a.
struct NetworkBundle {
    static constexpr std::size_t kInstance = 0;

    std::vector<Network> graphs;
    std::vector<double> modularities;
    std::vector<bool> active;
    /// Set for active graphs once weights are known; never set for inactive ones.
    std::vector<std::optional<double>> weights;
    BuildParams build_params;
    HlnbParams hlnb_params;

    std::size_t graph_count() const noexcept { return graphs.size(); }
    std::size_t arity() const noexcept { return graphs.empty() ? 0 : graphs.size() - 1; }
    std::size_t class_count() const noexcept { return graphs.empty() ? 0 : graphs.front().graph.class_count(); }
    std::vector<std::size_t> active_indices() const;
    /// Column slice of a full feature row that graph `slot` consumes.
    std::vector<double> graph_input(std::size_t slot, std::span<const double> row) const;
};

/// Builds all arity + 1 networks. Each modularity is measured on the
/// label-blind graph over the same columns, with the classes as partition.
/// Every graph starts active and unweighted.
NetworkBundle build_bundle(const Dataset& ds, const BuildParams& params);

/// Deactivates every attribute graph whose modularity is strictly lower than
/// the instance graph's. The instance graph always stays active.
NetworkBundle filter_by_modularity(NetworkBundle bundle);

struct EnsembleOptions {
    InsertionMode insertion = InsertionMode::global;
    Aggregation aggregation = Aggregation::sum;

    bool operator==(const EnsembleOptions&) const = default;
};

/// HLNB-BC distributions of every (instance, active graph) pair. Stored as
/// [graph][class][instance] planes so weighted sums vectorize over instances.
class ProbabilityTensor {
public:
    ProbabilityTensor() = default;
    ProbabilityTensor(std::size_t instances, std::vector<std::size_t> graph_slots, std::size_t classes);

    std::size_t instances() const noexcept { return instances_; }
    std::size_t graphs() const noexcept { return slots_.size(); }
    std::size_t classes() const noexcept { return classes_; }
    std::span<const std::size_t> graph_slots() const noexcept { return slots_; }

    double at(std::size_t instance, std::size_t graph, std::size_t cls) const {
        return data_[(graph * classes_ + cls) * instances_ + instance];
    }
    double& at(std::size_t instance, std::size_t graph, std::size_t cls) {
        return data_[(graph * classes_ + cls) * instances_ + instance];
    }
    ClassDistribution slice(std::size_t instance, std::size_t graph) const;
    std::span<const double> raw() const noexcept { return data_; }

    bool operator==(const ProbabilityTensor&) const = default;

private:
    std::size_t instances_ = 0;
    std::vector<std::size_t> slots_;
    std::size_t classes_ = 0;
    std::vector<double> data_;
};

/// Inserts every row of `opt` into every active graph (without modifying the
/// bundle) and records the HLNB-BC distribution.
ProbabilityTensor probability_tensor(const NetworkBundle& bundle, const Dataset& opt,
                                     const EnsembleOptions& options = {});

/// HLNB-BC distribution of one full feature row on each active graph, in
/// active-slot order.
std::vector<ClassDistribution> graph_distributions(const NetworkBundle& bundle, std::span<const double> row,
                                                   InsertionMode mode = InsertionMode::global);

struct Prediction {
    ClassId cls = 0;
    ClassDistribution distribution;
};

/// Combines per-graph distributions; renormalized when the total is
/// positive, uniform otherwise. Ties go to the smaller class index.
Prediction weighted_predict(std::span<const ClassDistribution> per_graph, std::span<const double> weights,
                            Aggregation aggregation = Aggregation::sum);
Prediction weighted_predict(const ProbabilityTensor& tensor, std::size_t instance, std::span<const double> weights,
                            Aggregation aggregation = Aggregation::sum);

/// Fraction of tensor instances whose weighted prediction equals the label.
double tensor_accuracy(const ProbabilityTensor& tensor, std::span<const ClassId> labels,
                       std::span<const double> weights, Aggregation aggregation = Aggregation::sum);

struct TrainingOptions {
    double opt_fraction = 0.2;
    std::uint64_t seed = 0;
    EnsembleOptions ensemble;
};

struct QuipusModel {
    NetworkBundle bundle;  ///< rebuilt on the full training set, weights attached
    std::vector<double> filter_modularities;  ///< modularities the filter decision was made on
    std::vector<double> weights;              ///< optimized weights in active-slot order
    double opt_accuracy = 0.0;                ///< objective value at `weights`
    EnsembleOptions options;
    PsoParams pso_params;
    std::uint64_t seed = 0;
    std::vector<std::string> class_names;
    std::vector<std::string> attribute_names;
};

/// Full training procedure: split off an optimization part, build and filter
/// the networks on the rest, cache the probability tensor of the optimization
/// part, fit the graph weights with PSO against accuracy on that tensor, then
/// rebuild every network on the full training set keeping the filter decision.
QuipusModel train(const Dataset& training, const BuildParams& build, const HlnbParams& hlnb, const PsoParams& pso,
                  const TrainingOptions& options = {});

Prediction predict(const QuipusModel& model, std::span<const double> instance);

/// Instance network only, classified with plain HLNB-BC.
struct BaselineModel {
    Network instance;
    BuildParams build_params;
    HlnbParams hlnb_params;
    InsertionMode insertion = InsertionMode::global;
};

BaselineModel train_baseline(const Dataset& training, const BuildParams& build, const HlnbParams& hlnb,
                             InsertionMode insertion = InsertionMode::global);
Prediction predict(const BaselineModel& model, std::span<const double> instance);

/// Process-wide counts of networks built through this module.
struct BuildCounters {
    std::size_t instance_graphs = 0;
    std::size_t attribute_graphs = 0;
};
BuildCounters build_counters() noexcept;
void reset_build_counters() noexcept;

}  // namespace quipus
