#include "quipus/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "quipus/kernels.hpp"
#include "quipus/measures.hpp"

namespace quipus {

namespace {

std::atomic<std::size_t> g_instance_builds{0};
std::atomic<std::size_t> g_attribute_builds{0};

std::vector<std::size_t> iota_rows(std::size_t n) {
    std::vector<std::size_t> rows(n);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

Network build_instance_network(const Dataset& ds, const BuildParams& params) {
    g_instance_builds.fetch_add(1, std::memory_order_relaxed);
    const auto rows = iota_rows(ds.rows());
    return build_network(ds.features(), ds.labels(), ds.class_count(), params, rows);
}

}  // namespace

std::string_view to_string(Aggregation a) { return a == Aggregation::product ? "product" : "sum"; }

Aggregation aggregation_from_string(std::string_view s) {
    if (s == "sum") return Aggregation::sum;
    if (s == "product") return Aggregation::product;
    throw std::invalid_argument("unknown aggregation '" + std::string(s) + "'");
}

BuildCounters build_counters() noexcept {
    return {g_instance_builds.load(std::memory_order_relaxed), g_attribute_builds.load(std::memory_order_relaxed)};
}

void reset_build_counters() noexcept {
    g_instance_builds.store(0, std::memory_order_relaxed);
    g_attribute_builds.store(0, std::memory_order_relaxed);
}

std::vector<std::size_t> NetworkBundle::active_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t g = 0; g < active.size(); ++g) {
        if (active[g]) out.push_back(g);
    }
    return out;
}

std::vector<double> NetworkBundle::graph_input(std::size_t slot, std::span<const double> row) const {
    if (row.size() != arity()) {
        throw std::invalid_argument("bundle: instance has " + std::to_string(row.size()) + " attributes, expected " +
                                    std::to_string(arity()));
    }
    if (slot == kInstance) return {row.begin(), row.end()};
    return {row[slot - 1]};
}

NetworkBundle build_bundle(const Dataset& ds, const BuildParams& params) {
    NetworkBundle bundle;
    bundle.build_params = params;
    bundle.graphs.reserve(ds.arity() + 1);
    const auto rows = iota_rows(ds.rows());
    bundle.graphs.push_back(build_instance_network(ds, params));
    bundle.modularities.push_back(
        modularity(build_label_blind_graph(ds.features(), ds.labels(), ds.class_count(), params, rows)));
    for (std::size_t a = 0; a < ds.arity(); ++a) {
        g_attribute_builds.fetch_add(1, std::memory_order_relaxed);
        const std::size_t col[] = {a};
        const FeatureBlock column = ds.features().select_cols(col);
        bundle.graphs.push_back(build_network(column, ds.labels(), ds.class_count(), params, rows));
        bundle.modularities.push_back(
            modularity(build_label_blind_graph(column, ds.labels(), ds.class_count(), params, rows)));
    }
    bundle.active.assign(bundle.graphs.size(), true);
    bundle.weights.assign(bundle.graphs.size(), std::nullopt);
    return bundle;
}

NetworkBundle filter_by_modularity(NetworkBundle bundle) {
    const double reference = bundle.modularities.at(NetworkBundle::kInstance);
    for (std::size_t g = 0; g < bundle.graph_count(); ++g) {
        bundle.active[g] = g == NetworkBundle::kInstance || bundle.modularities[g] >= reference;
        if (!bundle.active[g]) bundle.weights[g].reset();
    }
    return bundle;
}

ProbabilityTensor::ProbabilityTensor(std::size_t instances, std::vector<std::size_t> graph_slots, std::size_t classes)
    : instances_(instances),
      slots_(std::move(graph_slots)),
      classes_(classes),
      data_(instances * slots_.size() * classes, 0.0) {}

ClassDistribution ProbabilityTensor::slice(std::size_t instance, std::size_t graph) const {
    ClassDistribution out(classes_);
    for (std::size_t c = 0; c < classes_; ++c) out[c] = at(instance, graph, c);
    return out;
}

std::vector<ClassDistribution> graph_distributions(const NetworkBundle& bundle, std::span<const double> row,
                                                   InsertionMode mode) {
    std::vector<ClassDistribution> out;
    for (std::size_t slot : bundle.active_indices()) {
        const Network& net = bundle.graphs[slot];
        const auto input = bundle.graph_input(slot, row);
        const auto report = insertion_links(net, input, bundle.build_params, mode);
        out.push_back(classify(net, report, bundle.hlnb_params));
    }
    return out;
}

ProbabilityTensor probability_tensor(const NetworkBundle& bundle, const Dataset& opt, const EnsembleOptions& options) {
    if (opt.rows() > 0 && opt.arity() != bundle.arity()) {
        throw std::invalid_argument("probability_tensor: column count does not match the bundle");
    }
    ProbabilityTensor tensor(opt.rows(), bundle.active_indices(), bundle.class_count());
    for (std::size_t i = 0; i < opt.rows(); ++i) {
        const auto per_graph = graph_distributions(bundle, opt.row(i), options.insertion);
        for (std::size_t g = 0; g < per_graph.size(); ++g) {
            for (std::size_t c = 0; c < tensor.classes(); ++c) tensor.at(i, g, c) = per_graph[g][c];
        }
    }
    return tensor;
}

Prediction weighted_predict(std::span<const ClassDistribution> per_graph, std::span<const double> weights,
                            Aggregation aggregation) {
    if (per_graph.size() != weights.size() || per_graph.empty()) {
        throw std::invalid_argument("weighted_predict: " + std::to_string(weights.size()) + " weights for " +
                                    std::to_string(per_graph.size()) + " graphs");
    }
    const std::size_t classes = per_graph.front().size();
    for (const auto& d : per_graph) {
        if (d.size() != classes) throw std::invalid_argument("weighted_predict: class count mismatch");
    }
    Prediction out;
    out.distribution.assign(classes, aggregation == Aggregation::sum ? 0.0 : 1.0);
    for (std::size_t g = 0; g < per_graph.size(); ++g) {
        for (std::size_t c = 0; c < classes; ++c) {
            if (aggregation == Aggregation::sum) {
                out.distribution[c] = out.distribution[c] + weights[g] * per_graph[g][c];
            } else {
                out.distribution[c] *= std::pow(per_graph[g][c], weights[g]);
            }
        }
    }
    // The class is read off the raw scores so it matches tensor_accuracy exactly.
    out.cls = static_cast<ClassId>(argmax(out.distribution));
    const double total = std::accumulate(out.distribution.begin(), out.distribution.end(), 0.0);
    for (double& v : out.distribution) v = total > 0.0 ? v / total : 1.0 / static_cast<double>(classes);
    return out;
}

Prediction weighted_predict(const ProbabilityTensor& tensor, std::size_t instance, std::span<const double> weights,
                            Aggregation aggregation) {
    std::vector<ClassDistribution> per_graph;
    for (std::size_t g = 0; g < tensor.graphs(); ++g) per_graph.push_back(tensor.slice(instance, g));
    return weighted_predict(per_graph, weights, aggregation);
}

double tensor_accuracy(const ProbabilityTensor& tensor, std::span<const ClassId> labels,
                       std::span<const double> weights, Aggregation aggregation) {
    if (labels.size() != tensor.instances()) throw std::invalid_argument("tensor_accuracy: label count mismatch");
    if (weights.size() != tensor.graphs()) throw std::invalid_argument("tensor_accuracy: weight count mismatch");
    const std::size_t n = tensor.instances();
    if (n == 0) return 0.0;
    std::size_t correct = 0;
    if (aggregation == Aggregation::sum) {
        // Renormalizing by a positive total does not move the argmax, and an
        // all-zero row resolves to class 0 either way.
        const std::size_t classes = tensor.classes();
        std::vector<double> scores(classes * n);
        kernels::active().weighted_scores(tensor.raw().data(), tensor.graphs(), classes, n, weights.data(),
                                          scores.data());
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t best = 0;
            for (std::size_t c = 1; c < classes; ++c) {
                if (scores[c * n + i] > scores[best * n + i]) best = c;
            }
            if (static_cast<ClassId>(best) == labels[i]) ++correct;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            if (weighted_predict(tensor, i, weights, aggregation).cls == labels[i]) ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

QuipusModel train(const Dataset& training, const BuildParams& build, const HlnbParams& hlnb, const PsoParams& pso,
                  const TrainingOptions& options) {
    build.validate();
    hlnb.validate();
    pso.validate();
    if (!(options.opt_fraction > 0.0 && options.opt_fraction < 1.0)) {
        throw std::invalid_argument("train: opt_fraction must lie in (0,1) so both parts are non-empty");
    }

    const SplitPair split = stratified_split(training, 1.0 - options.opt_fraction, options.seed);
    const Dataset& net_part = split.first;
    const Dataset& opt_part = split.second;
    if (opt_part.rows() == 0) throw std::invalid_argument("train: optimization part is empty");

    NetworkBundle staged = build_bundle(net_part, build);
    staged.hlnb_params = hlnb;
    staged = filter_by_modularity(std::move(staged));

    const ProbabilityTensor tensor = probability_tensor(staged, opt_part, options.ensemble);
    const auto labels = opt_part.labels();
    PsoParams swarm = pso;
    swarm.seed = pso.seed + options.seed;
    const PsoResult fit = optimize(
        [&](std::span<const double> w) { return tensor_accuracy(tensor, labels, w, options.ensemble.aggregation); },
        tensor.graphs(), swarm);

    QuipusModel model;
    model.filter_modularities = staged.modularities;
    model.weights = fit.best_position;
    model.opt_accuracy = fit.best_score;
    model.options = options.ensemble;
    model.pso_params = swarm;
    model.seed = options.seed;
    model.class_names = training.class_names();
    model.attribute_names = training.attribute_names();

    model.bundle = build_bundle(training, build);
    model.bundle.hlnb_params = hlnb;
    model.bundle.active = staged.active;
    const auto slots = staged.active_indices();
    for (std::size_t i = 0; i < slots.size(); ++i) model.bundle.weights[slots[i]] = fit.best_position[i];
    return model;
}

Prediction predict(const QuipusModel& model, std::span<const double> instance) {
    const auto per_graph = graph_distributions(model.bundle, instance, model.options.insertion);
    return weighted_predict(per_graph, model.weights, model.options.aggregation);
}

BaselineModel train_baseline(const Dataset& training, const BuildParams& build, const HlnbParams& hlnb,
                             InsertionMode insertion) {
    hlnb.validate();
    return BaselineModel{build_instance_network(training, build), build, hlnb, insertion};
}

Prediction predict(const BaselineModel& model, std::span<const double> instance) {
    const auto report = insertion_links(model.instance, instance, model.build_params, model.insertion);
    auto dist = classify(model.instance, report, model.hlnb_params);
    const auto cls = static_cast<ClassId>(argmax(dist));
    return {cls, std::move(dist)};
}

}  // namespace quipus
