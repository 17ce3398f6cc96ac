#include "quipus/hlnb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "quipus/measures.hpp"

namespace quipus {

void HlnbParams::validate() const {
    if (b < 1) throw std::invalid_argument("hlnb params: b must be at least 1");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("hlnb params: alpha must lie in [0,1]");
}

std::vector<double> bc_difference_scores(std::span<const double> differences, double guard) {
    std::vector<double> out(differences.size());
    double total = 0.0;
    for (std::size_t c = 0; c < differences.size(); ++c) {
        out[c] = 1.0 / (differences[c] + guard);
        total += out[c];
    }
    for (double& v : out) v /= total;
    return out;
}

std::vector<double> link_count_scores(std::span<const std::size_t> links) {
    const auto total = std::accumulate(links.begin(), links.end(), std::size_t{0});
    std::vector<double> out(links.size(), links.empty() ? 0.0 : 1.0 / static_cast<double>(links.size()));
    if (total == 0) return out;
    for (std::size_t c = 0; c < links.size(); ++c) {
        out[c] = static_cast<double>(links[c]) / static_cast<double>(total);
    }
    return out;
}

namespace {

void check_report(const LabeledGraph& g, const InsertionReport& report) {
    const std::size_t classes = g.class_count();
    if (report.links_per_class.size() != classes || report.chosen_neighbors.size() != classes) {
        throw std::invalid_argument("hlnb: report class count does not match graph");
    }
    for (std::size_t c = 0; c < classes; ++c) {
        for (NodeId v : report.chosen_neighbors[c]) {
            if (v >= g.node_count() || static_cast<std::size_t>(g.label(v)) != c) {
                throw std::invalid_argument("hlnb: report links node " + std::to_string(v) +
                                            " outside class " + std::to_string(c));
            }
        }
    }
}

}  // namespace

HlnbEvidence hlnb_evidence(const LabeledGraph& g, const ClassPartition& partition, const InsertionReport& report,
                           std::size_t b) {
    check_report(g, report);
    const std::size_t classes = g.class_count();
    HlnbEvidence ev;
    ev.new_node_bc.resize(classes);
    ev.bc_difference.resize(classes);

    for (std::size_t c = 0; c < classes; ++c) {
        const ClassSubgraph& sub = partition.subgraphs[c];
        const std::size_t m = sub.graph.node_count();
        if (m == 0) throw std::invalid_argument("hlnb: class " + std::to_string(c) + " has no nodes");

        std::vector<NodeId> links;
        links.reserve(report.chosen_neighbors[c].size());
        for (NodeId v : report.chosen_neighbors[c]) links.push_back(partition.to_local[v]);
        const OverlayInsertion overlay(sub.graph, std::move(links), static_cast<ClassId>(c));
        const auto bc = betweenness(overlay);
        const double mine = bc[overlay.new_node()];

        std::vector<NodeId> order(m);
        std::iota(order.begin(), order.end(), NodeId{0});
        auto gap = [&](NodeId j) { return std::fabs(mine - bc[j]); };
        const std::size_t take = std::min(b, m);
        std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                          [&](NodeId x, NodeId y) { return gap(x) < gap(y) || (gap(x) == gap(y) && x < y); });
        double sum = 0.0;
        for (std::size_t i = 0; i < take; ++i) sum += gap(order[i]);

        ev.new_node_bc[c] = mine;
        ev.bc_difference[c] = sum / static_cast<double>(take);
    }
    // A class that received no link has no structural match to offer; its
    // isolated overlay would otherwise tie with the leaves of that class.
    std::vector<std::size_t> linked;
    for (std::size_t c = 0; c < classes; ++c) {
        if (!report.chosen_neighbors[c].empty()) linked.push_back(c);
    }
    if (linked.empty()) {
        ev.structural.assign(classes, 1.0 / static_cast<double>(classes));
    } else {
        std::vector<double> diffs;
        for (std::size_t c : linked) diffs.push_back(ev.bc_difference[c]);
        const auto scores = bc_difference_scores(diffs);
        ev.structural.assign(classes, 0.0);
        for (std::size_t i = 0; i < linked.size(); ++i) ev.structural[linked[i]] = scores[i];
    }
    ev.link_share = link_count_scores(report.links_per_class);
    return ev;
}

ClassDistribution mix_evidence(const HlnbEvidence& ev, double alpha) {
    ClassDistribution h(ev.structural.size());
    for (std::size_t c = 0; c < h.size(); ++c) h[c] = alpha * ev.structural[c] + (1.0 - alpha) * ev.link_share[c];
    return h;
}

ClassDistribution classify(const LabeledGraph& g, const InsertionReport& report, const HlnbParams& params) {
    params.validate();
    const ClassPartition partition(g);
    return mix_evidence(hlnb_evidence(g, partition, report, params.b), params.alpha);
}

ClassDistribution classify(const Network& net, const InsertionReport& report, const HlnbParams& params) {
    params.validate();
    return mix_evidence(hlnb_evidence(net.graph, net.partition, report, params.b), params.alpha);
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

}  // namespace quipus
