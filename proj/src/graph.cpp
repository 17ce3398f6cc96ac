#include "quipus/graph.hpp"

#include <algorithm>
#include <string>

namespace quipus {

LabeledGraph::LabeledGraph(std::vector<ClassId> labels, std::vector<std::size_t> row_ids,
                           std::size_t class_count, std::span<const Edge> edges)
    : labels_(std::move(labels)), row_ids_(std::move(row_ids)), class_count_(class_count) {
    const std::size_t n = labels_.size();
    if (row_ids_.empty()) {
        row_ids_.resize(n);
        for (std::size_t i = 0; i < n; ++i) row_ids_[i] = i;
    }
    if (row_ids_.size() != n) throw GraphError("graph: row id count does not match node count");
    for (ClassId y : labels_) {
        if (y < 0 || static_cast<std::size_t>(y) >= class_count_) {
            throw GraphError("graph: node label outside class range");
        }
    }

    std::vector<Edge> directed;
    directed.reserve(edges.size() * 2);
    for (auto [u, v] : edges) {
        if (u >= n || v >= n) throw GraphError("graph: edge endpoint out of range");
        if (u == v) throw GraphError("graph: self-loop on node " + std::to_string(u));
        directed.emplace_back(u, v);
        directed.emplace_back(v, u);
    }
    std::sort(directed.begin(), directed.end());
    directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

    offsets_.assign(n + 1, 0);
    for (auto [u, v] : directed) ++offsets_[u + 1];
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    targets_.reserve(directed.size());
    for (auto [u, v] : directed) targets_.push_back(v);
}

bool LabeledGraph::has_edge(NodeId u, NodeId v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> LabeledGraph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u) {
        for (NodeId v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

ClassSubgraph class_subgraph(const LabeledGraph& g, ClassId cls) {
    if (cls < 0 || static_cast<std::size_t>(cls) >= g.class_count()) {
        throw GraphError("class_subgraph: unknown class " + std::to_string(cls));
    }
    ClassSubgraph out;
    out.cls = cls;
    std::vector<NodeId> local(g.node_count(), static_cast<NodeId>(-1));
    std::vector<ClassId> labels;
    std::vector<std::size_t> rows;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.label(v) != cls) continue;
        local[v] = static_cast<NodeId>(out.to_parent.size());
        out.to_parent.push_back(v);
        labels.push_back(cls);
        rows.push_back(g.row_id(v));
    }
    std::vector<Edge> edges;
    for (NodeId v : out.to_parent) {
        for (NodeId w : g.neighbors(v)) {
            if (v < w && g.label(w) == cls) edges.emplace_back(local[v], local[w]);
        }
    }
    out.graph = LabeledGraph(std::move(labels), std::move(rows), g.class_count(), edges);
    return out;
}

ClassPartition::ClassPartition(const LabeledGraph& g) : to_local(g.node_count(), 0) {
    subgraphs.reserve(g.class_count());
    for (std::size_t c = 0; c < g.class_count(); ++c) {
        subgraphs.push_back(class_subgraph(g, static_cast<ClassId>(c)));
        const auto& back = subgraphs.back().to_parent;
        for (std::size_t i = 0; i < back.size(); ++i) to_local[back[i]] = static_cast<NodeId>(i);
    }
}

OverlayInsertion::OverlayInsertion(const LabeledGraph& base, std::vector<NodeId> links,
                                   std::optional<ClassId> provisional_label)
    : base_(&base), links_(std::move(links)), linked_(base.node_count(), false), label_(provisional_label) {
    for (NodeId v : links_) {
        if (v >= base.node_count()) {
            throw GraphError("overlay: dangling link target " + std::to_string(v));
        }
        if (linked_[v]) throw GraphError("overlay: duplicate link target " + std::to_string(v));
        linked_[v] = true;
    }
}

std::size_t OverlayInsertion::degree(NodeId v) const {
    if (v == new_node()) return links_.size();
    return base_->degree(v) + (linked_[v] ? 1 : 0);
}

LabeledGraph OverlayInsertion::materialize() const {
    std::vector<ClassId> labels(base_->labels().begin(), base_->labels().end());
    labels.push_back(label_.value_or(0));
    std::vector<std::size_t> rows(base_->row_ids().begin(), base_->row_ids().end());
    rows.push_back(static_cast<std::size_t>(-1));
    auto edges = base_->edges();
    for (NodeId v : links_) edges.emplace_back(v, new_node());
    return LabeledGraph(std::move(labels), std::move(rows), base_->class_count(), edges);
}

}  // namespace quipus
