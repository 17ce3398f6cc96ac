#include "quipus/measures.hpp"

#include <algorithm>
#include <string>
#include <map>

namespace quipus {

namespace {

// Brandes accumulation for unweighted graphs. Summing the dependencies over
// every source counts each ordered (s, t) pair once.
template <NeighborGraph G>
BetweennessMap brandes(const G& g) {
    const std::size_t n = g.node_count();
    BetweennessMap bc(n, 0.0);
    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<int> dist(n);
    std::vector<NodeId> order;
    std::vector<NodeId> queue;
    order.reserve(n);
    queue.reserve(n);

    for (NodeId s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1);
        order.clear();
        queue.clear();
        sigma[s] = 1.0;
        dist[s] = 0;
        queue.push_back(s);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const NodeId v = queue[head];
            order.push_back(v);
            g.for_each_neighbor(v, [&](NodeId w) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
                if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
            });
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const NodeId w = *it;
            g.for_each_neighbor(w, [&](NodeId v) {
                if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            });
            if (w != s) bc[w] += delta[w];
        }
    }
    return bc;
}

}  // namespace

BetweennessMap betweenness(const LabeledGraph& g) { return brandes(g); }
BetweennessMap betweenness(const OverlayInsertion& g) { return brandes(g); }

double modularity(const LabeledGraph& g, std::span<const ClassId> partition) {
    if (partition.size() != g.node_count()) {
        throw GraphError("modularity: partition size does not match node count");
    }
    if (g.edge_count() == 0) throw GraphError("modularity: undefined on an edgeless graph");

    // Sum over cells of (internal degree mass - volume^2 / 2|E|), scaled by 1/2|E|.
    std::map<ClassId, double> volume;
    double internal = 0.0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        volume[partition[v]] += static_cast<double>(g.degree(v));
        for (NodeId w : g.neighbors(v)) {
            if (partition[w] == partition[v]) internal += 1.0;
        }
    }
    const double two_m = 2.0 * static_cast<double>(g.edge_count());
    double expected = 0.0;
    for (const auto& [cell, vol] : volume) expected += (vol / two_m) * (vol / two_m);
    return internal / two_m - expected;
}

double modularity(const LabeledGraph& g) { return modularity(g, g.labels()); }

double clustering_coefficient(const LabeledGraph& g, NodeId node) {
    if (node >= g.node_count()) throw GraphError("clustering_coefficient: unknown node " + std::to_string(node));
    const auto nb = g.neighbors(node);
    const std::size_t deg = nb.size();
    if (deg < 2) return 0.0;
    std::size_t links = 0;
    for (std::size_t i = 0; i < deg; ++i) {
        for (std::size_t j = i + 1; j < deg; ++j) {
            if (g.has_edge(nb[i], nb[j])) ++links;
        }
    }
    return 2.0 * static_cast<double>(links) / (static_cast<double>(deg) * static_cast<double>(deg - 1));
}

}  // namespace quipus
