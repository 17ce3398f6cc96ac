#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "quipus/graph.hpp"
#include "quipus/netbuild.hpp"

namespace quipus {

struct HlnbParams {
    /// Number of existing nodes with the closest betweenness to compare against.
    std::size_t b = 1;
    /// Weight of the betweenness evidence; 1 - alpha goes to link counts.
    double alpha = 1.0;

    void validate() const;
    bool operator==(const HlnbParams&) const = default;
};

/// Probability per class; non-negative and summing to one.
using ClassDistribution = std::vector<double>;

/// Per-class quantities behind one classification.
struct HlnbEvidence {
    std::vector<double> new_node_bc;    ///< betweenness of the inserted node in each class subgraph
    std::vector<double> bc_difference;  ///< mean |B(new) - B(j)| over the b closest nodes
    std::vector<double> structural;     ///< bc_difference turned into a distribution
    std::vector<double> link_share;     ///< link counts turned into a distribution
};

/// Inverse-difference normalization: (1/(w+guard)) / sum_d (1/(w_d+guard)).
/// A zero difference dominates without dividing by zero.
std::vector<double> bc_difference_scores(std::span<const double> differences, double guard = 1e-12);

/// Proportional link counts; uniform when no class received a link.
std::vector<double> link_count_scores(std::span<const std::size_t> links);

HlnbEvidence hlnb_evidence(const LabeledGraph& g, const ClassPartition& partition, const InsertionReport& report,
                           std::size_t b);

ClassDistribution mix_evidence(const HlnbEvidence& ev, double alpha);

/// Classifies one inserted point. For every class the point is overlaid on
/// that class's subgraph using the report's links to that class. Structural
/// evidence is shared among the classes that received at least one link.
ClassDistribution classify(const LabeledGraph& g, const InsertionReport& report, const HlnbParams& params);
ClassDistribution classify(const Network& net, const InsertionReport& report, const HlnbParams& params);

/// Index of the largest entry; ties go to the smaller index.
std::size_t argmax(std::span<const double> values);

}  // namespace quipus
