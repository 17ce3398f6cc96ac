#include "quipus/netbuild.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace quipus {

void BuildParams::validate() const {
    if (k < 1) throw std::invalid_argument("build params: k must be at least 1");
    if (!(epsilon_percentile >= 0.0 && epsilon_percentile <= 1.0)) {
        throw std::invalid_argument("build params: epsilon percentile must lie in [0,1]");
    }
}

std::string_view to_string(InsertionMode mode) {
    return mode == InsertionMode::global ? "global" : "per-class";
}

InsertionMode insertion_mode_from_string(std::string_view s) {
    if (s == "per-class" || s == "per_class") return InsertionMode::per_class;
    if (s == "global") return InsertionMode::global;
    throw std::invalid_argument("unknown insertion mode '" + std::string(s) + "'");
}

std::size_t InsertionReport::total_links() const {
    return std::accumulate(links_per_class.begin(), links_per_class.end(), std::size_t{0});
}

namespace {

double linear_quantile(std::vector<double> values, double q) {
    if (values.empty()) return 0.0;
    std::sort(values.begin(), values.end());
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

// Indices of the `count` smallest entries of `dist`, ordered by (distance, index).
// `skip` is excluded from the candidates.
std::vector<std::size_t> nearest(std::span<const double> dist, std::size_t count, std::size_t skip) {
    std::vector<std::size_t> idx;
    idx.reserve(dist.size());
    for (std::size_t j = 0; j < dist.size(); ++j) {
        if (j != skip) idx.push_back(j);
    }
    count = std::min(count, idx.size());
    auto less = [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); };
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(), less);
    idx.resize(count);
    return idx;
}

constexpr std::size_t kNoSkip = static_cast<std::size_t>(-1);

// Builds the rule over candidate groups: each node only considers nodes of
// its own group. Groups are the classes for training graphs, or one group
// holding everything for the label-blind variant.
std::vector<Edge> rule_edges(const FeatureBlock& columns, const std::vector<std::vector<NodeId>>& groups,
                             const std::vector<FeatureBlock>& group_features, const BuildParams& params,
                             double* radius_out) {
    const auto& kern = kernels::active();
    std::vector<std::vector<double>> group_dist(groups.size());
    std::vector<std::vector<std::size_t>> knn(columns.rows());  // local indices within the group
    std::vector<double> pooled;
    for (std::size_t c = 0; c < groups.size(); ++c) {
        const auto& block = group_features[c];
        const std::size_t m = block.rows();
        group_dist[c].resize(m * m);
        for (std::size_t a = 0; a < m; ++a) {
            const auto query = block.row(a);
            double* row = group_dist[c].data() + a * m;
            kern.distances(block.raw().data(), m, query, params.metric, row);
            auto near = nearest({row, m}, params.k, a);
            for (std::size_t j : near) pooled.push_back(row[j]);
            knn[groups[c][a]] = std::move(near);
        }
    }
    const double radius = linear_quantile(std::move(pooled), params.epsilon_percentile);
    if (radius_out != nullptr) *radius_out = radius;

    std::vector<Edge> edges;
    for (std::size_t c = 0; c < groups.size(); ++c) {
        const auto& members = groups[c];
        const std::size_t m = members.size();
        for (std::size_t a = 0; a < m; ++a) {
            const double* row = group_dist[c].data() + a * m;
            std::vector<std::size_t> in_radius;
            for (std::size_t j = 0; j < m; ++j) {
                if (j != a && row[j] < radius) in_radius.push_back(j);
            }
            const auto& chosen = in_radius.size() > params.k ? in_radius : knn[members[a]];
            for (std::size_t j : chosen) edges.emplace_back(members[a], members[j]);
        }
    }
    return edges;
}

void check_build_inputs(const FeatureBlock& columns, std::span<const ClassId> labels, std::size_t class_count,
                        const BuildParams& params, std::span<const std::size_t> row_ids) {
    params.validate();
    const std::size_t n = columns.rows();
    if (n < 2) throw std::invalid_argument("build_network: need at least 2 instances");
    if (labels.size() != n) throw std::invalid_argument("build_network: label count does not match rows");
    if (!row_ids.empty() && row_ids.size() != n) {
        throw std::invalid_argument("build_network: row id count does not match rows");
    }
    for (ClassId y : labels) {
        if (y < 0 || static_cast<std::size_t>(y) >= class_count) {
            throw std::invalid_argument("build_network: label outside class range");
        }
    }
}

}  // namespace

Network build_network(const FeatureBlock& columns, std::span<const ClassId> labels, std::size_t class_count,
                      const BuildParams& params, std::span<const std::size_t> row_ids) {
    check_build_inputs(columns, labels, class_count, params, row_ids);
    const std::size_t n = columns.rows();

    Network net;
    net.features = columns;
    net.class_members.assign(class_count, {});
    for (std::size_t i = 0; i < n; ++i) net.class_members[static_cast<std::size_t>(labels[i])].push_back(static_cast<NodeId>(i));
    net.class_features.reserve(class_count);
    for (const auto& members : net.class_members) {
        std::vector<std::size_t> rows(members.begin(), members.end());
        net.class_features.push_back(columns.select_rows(rows));
    }

    const auto edges = rule_edges(columns, net.class_members, net.class_features, params, &net.radius);
    std::vector<ClassId> node_labels(labels.begin(), labels.end());
    std::vector<std::size_t> ids(row_ids.begin(), row_ids.end());
    net.graph = LabeledGraph(std::move(node_labels), std::move(ids), class_count, edges);
    net.partition = ClassPartition(net.graph);
    return net;
}

LabeledGraph build_label_blind_graph(const FeatureBlock& columns, std::span<const ClassId> labels,
                                     std::size_t class_count, const BuildParams& params,
                                     std::span<const std::size_t> row_ids) {
    check_build_inputs(columns, labels, class_count, params, row_ids);
    std::vector<std::vector<NodeId>> everyone(1);
    for (std::size_t i = 0; i < columns.rows(); ++i) everyone[0].push_back(static_cast<NodeId>(i));
    const std::vector<FeatureBlock> features{columns};
    const auto edges = rule_edges(columns, everyone, features, params, nullptr);
    std::vector<ClassId> node_labels(labels.begin(), labels.end());
    std::vector<std::size_t> ids(row_ids.begin(), row_ids.end());
    return LabeledGraph(std::move(node_labels), std::move(ids), class_count, edges);
}

Network assemble_network(LabeledGraph graph, FeatureBlock features, double radius) {
    if (features.rows() != graph.node_count()) {
        throw std::invalid_argument("assemble_network: feature rows do not match node count");
    }
    Network net;
    net.class_members.assign(graph.class_count(), {});
    for (NodeId v = 0; v < graph.node_count(); ++v) {
        net.class_members[static_cast<std::size_t>(graph.label(v))].push_back(v);
    }
    for (const auto& members : net.class_members) {
        std::vector<std::size_t> rows(members.begin(), members.end());
        net.class_features.push_back(features.select_rows(rows));
    }
    net.graph = std::move(graph);
    net.features = std::move(features);
    net.radius = radius;
    net.partition = ClassPartition(net.graph);
    return net;
}

InsertionReport insertion_links(const Network& net, std::span<const double> point, const BuildParams& params,
                                InsertionMode mode) {
    params.validate();
    if (point.size() != net.dims()) {
        throw std::invalid_argument("insertion_links: point has " + std::to_string(point.size()) +
                                    " values, network expects " + std::to_string(net.dims()));
    }
    const std::size_t classes = net.graph.class_count();
    InsertionReport report;
    report.links_per_class.assign(classes, 0);
    report.chosen_neighbors.assign(classes, {});
    const auto& kern = kernels::active();

    auto choose = [&](std::span<const double> dist) {
        std::vector<std::size_t> in_radius;
        for (std::size_t j = 0; j < dist.size(); ++j) {
            if (dist[j] < net.radius) in_radius.push_back(j);
        }
        return in_radius.size() > params.k ? in_radius : nearest(dist, params.k, kNoSkip);
    };

    if (mode == InsertionMode::per_class) {
        std::vector<double> dist;
        for (std::size_t c = 0; c < classes; ++c) {
            const auto& block = net.class_features[c];
            if (block.rows() == 0) continue;
            dist.resize(block.rows());
            kern.distances(block.raw().data(), block.rows(), point, params.metric, dist.data());
            for (std::size_t j : choose(dist)) report.chosen_neighbors[c].push_back(net.class_members[c][j]);
        }
    } else {
        std::vector<double> dist(net.features.rows());
        kern.distances(net.features.raw().data(), dist.size(), point, params.metric, dist.data());
        for (std::size_t j : choose(dist)) {
            const auto v = static_cast<NodeId>(j);
            report.chosen_neighbors[static_cast<std::size_t>(net.graph.label(v))].push_back(v);
        }
    }
    for (std::size_t c = 0; c < classes; ++c) {
        auto& chosen = report.chosen_neighbors[c];
        std::sort(chosen.begin(), chosen.end());
        report.links_per_class[c] = chosen.size();
    }
    return report;
}

}  // namespace quipus
