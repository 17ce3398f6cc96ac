#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "quipus/dataset.hpp"

namespace quipus {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

class GraphError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Undirected, unweighted, simple graph whose nodes carry a class label and
/// the id of the dataset row they came from. Adjacency is stored in CSR form
/// with sorted neighbor lists and never changes after construction.
class LabeledGraph {
public:
    LabeledGraph() = default;

    /// Builds from an edge list. Duplicate edges (in either orientation) are
    /// merged; self-loops and out-of-range endpoints are rejected.
    LabeledGraph(std::vector<ClassId> labels, std::vector<std::size_t> row_ids,
                 std::size_t class_count, std::span<const Edge> edges);

    std::size_t node_count() const noexcept { return labels_.size(); }
    std::size_t edge_count() const noexcept { return targets_.size() / 2; }
    std::size_t class_count() const noexcept { return class_count_; }

    ClassId label(NodeId v) const { return labels_[v]; }
    std::size_t row_id(NodeId v) const { return row_ids_[v]; }
    std::span<const ClassId> labels() const noexcept { return labels_; }
    std::span<const std::size_t> row_ids() const noexcept { return row_ids_; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(NodeId u, NodeId v) const;

    template <class F>
    void for_each_neighbor(NodeId v, F&& f) const {
        for (NodeId w : neighbors(v)) f(w);
    }

    /// Each undirected edge once, as (u, v) with u < v, in ascending order.
    std::vector<Edge> edges() const;

    bool operator==(const LabeledGraph&) const = default;

private:
    std::vector<ClassId> labels_;
    std::vector<std::size_t> row_ids_;
    std::size_t class_count_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<NodeId> targets_;
};

/// Induced subgraph on one class, with the map from local ids back to the
/// parent's node ids.
struct ClassSubgraph {
    ClassId cls = 0;
    LabeledGraph graph;
    std::vector<NodeId> to_parent;
};

ClassSubgraph class_subgraph(const LabeledGraph& g, ClassId cls);

/// All class subgraphs of a graph plus the parent-to-local id map.
struct ClassPartition {
    std::vector<ClassSubgraph> subgraphs;
    std::vector<NodeId> to_local;

    explicit ClassPartition(const LabeledGraph& g);
    ClassPartition() = default;
};

/// A temporary extra node attached to an immutable base graph. The base is
/// never modified; destroying the overlay is the drop operation. Node ids of
/// the base are preserved and the new node gets id `base.node_count()`.
class OverlayInsertion {
public:
    OverlayInsertion(const LabeledGraph& base, std::vector<NodeId> links,
                     std::optional<ClassId> provisional_label = std::nullopt);

    const LabeledGraph& base() const noexcept { return *base_; }
    NodeId new_node() const noexcept { return static_cast<NodeId>(base_->node_count()); }
    std::span<const NodeId> links() const noexcept { return links_; }
    std::optional<ClassId> provisional_label() const noexcept { return label_; }

    std::size_t node_count() const noexcept { return base_->node_count() + 1; }
    std::size_t edge_count() const noexcept { return base_->edge_count() + links_.size(); }
    std::size_t degree(NodeId v) const;

    template <class F>
    void for_each_neighbor(NodeId v, F&& f) const {
        if (v == new_node()) {
            for (NodeId w : links_) f(w);
            return;
        }
        for (NodeId w : base_->neighbors(v)) f(w);
        if (linked_[v]) f(new_node());
    }

    /// Standalone copy of base + new node (label defaults to 0 if unset).
    LabeledGraph materialize() const;

private:
    const LabeledGraph* base_;
    std::vector<NodeId> links_;
    std::vector<bool> linked_;
    std::optional<ClassId> label_;
};

template <class G>
concept NeighborGraph = requires(const G& g, NodeId v) {
    { g.node_count() } -> std::convertible_to<std::size_t>;
    g.for_each_neighbor(v, [](NodeId) {});
};

}  // namespace quipus
