#pragma once

#include <span>
#include <vector>

#include "quipus/graph.hpp"

namespace quipus {

/// Betweenness per node over ordered source/target pairs, unnormalized.
/// Unreachable pairs contribute nothing.
using BetweennessMap = std::vector<double>;

BetweennessMap betweenness(const LabeledGraph& g);
BetweennessMap betweenness(const OverlayInsertion& g);

/// Modularity of `partition` (one cell id per node) on an unweighted graph.
/// Throws GraphError on an edgeless graph, where the measure is undefined.
double modularity(const LabeledGraph& g, std::span<const ClassId> partition);

/// Modularity using the node class labels as the partition.
double modularity(const LabeledGraph& g);

/// Local clustering coefficient; 0 when the degree is below 2.
double clustering_coefficient(const LabeledGraph& g, NodeId node);

}  // namespace quipus
