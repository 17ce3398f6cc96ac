#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "quipus/dataset.hpp"
#include "quipus/graph.hpp"
#include "quipus/kernels.hpp"

namespace quipus {

struct BuildParams {
    std::size_t k = 1;
    /// Quantile (0..1) of the pooled k-nearest distances that sets the radius.
    double epsilon_percentile = 0.0;
    kernels::Metric metric = kernels::Metric::euclidean;

    void validate() const;
    bool operator==(const BuildParams&) const = default;
};

/// How an unlabeled point is linked into a trained network.
enum class InsertionMode {
    per_class,  ///< run the construction rule once against every class
    global,     ///< run it once against all nodes, ignoring labels
};

std::string_view to_string(InsertionMode mode);
InsertionMode insertion_mode_from_string(std::string_view s);

/// A training graph together with the node features it was built from and
/// the radius the construction rule settled on. Everything needed to insert
/// new points later.
struct Network {
    LabeledGraph graph;
    FeatureBlock features;  ///< node features, rows aligned with node ids
    double radius = 0.0;
    /// Per-class node ids and column-major feature blocks, for insertion.
    std::vector<std::vector<NodeId>> class_members;
    std::vector<FeatureBlock> class_features;
    ClassPartition partition;

    std::size_t dims() const noexcept { return features.cols(); }
};

/// Builds the kNN / epsilon-radius network over the given columns.
///
/// Only same-label nodes are candidates. Every node first takes its k nearest
/// same-label nodes (ties to the smaller node id). The radius is the
/// `epsilon_percentile` linear-interpolation quantile of all those k-nearest
/// distances pooled over the graph. A node whose same-label set
/// {j : d(i,j) < radius} has more than k members links to that set instead.
/// Links are symmetrized (union).
Network build_network(const FeatureBlock& columns, std::span<const ClassId> labels, std::size_t class_count,
                      const BuildParams& params, std::span<const std::size_t> row_ids = {});

/// The same rule with labels ignored: every node is a candidate for every
/// other node, which is how an unlabeled point sees the data. Its label
/// partition modularity measures how well the columns separate the classes.
LabeledGraph build_label_blind_graph(const FeatureBlock& columns, std::span<const ClassId> labels,
                                     std::size_t class_count, const BuildParams& params,
                                     std::span<const std::size_t> row_ids = {});

/// Wraps an existing graph (e.g. one read back from disk) with its node
/// features and radius, recomputing the per-class caches.
Network assemble_network(LabeledGraph graph, FeatureBlock features, double radius);

struct InsertionReport {
    /// Link count per class.
    std::vector<std::size_t> links_per_class;
    /// Chosen node ids grouped by class, each list ascending.
    std::vector<std::vector<NodeId>> chosen_neighbors;

    std::size_t total_links() const;
};

/// Links for an unlabeled point. In per-class mode every class contributes
/// its own k nearest nodes (or its radius set when larger than k), so links
/// cross labels by construction.
InsertionReport insertion_links(const Network& net, std::span<const double> point, const BuildParams& params,
                                InsertionMode mode = InsertionMode::global);

}  // namespace quipus
