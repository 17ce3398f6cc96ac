#include "quipus/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace quipus {

using nlohmann::json;

namespace {

json params_json(const BuildParams& p) {
    return {{"k", p.k}, {"epsilon_percentile", p.epsilon_percentile}, {"metric", kernels::to_string(p.metric)}};
}

BuildParams build_params_from(const json& j) {
    BuildParams p;
    p.k = j.at("k").get<std::size_t>();
    p.epsilon_percentile = j.at("epsilon_percentile").get<double>();
    p.metric = j.at("metric").get<std::string>() == "manhattan" ? kernels::Metric::manhattan
                                                                 : kernels::Metric::euclidean;
    return p;
}

json pso_json(const PsoParams& p) {
    return {{"c1", p.c1},           {"c2", p.c2},         {"inertia", p.inertia},
            {"iterations", p.iterations}, {"swarm_size", p.swarm_size}, {"seed", p.seed}};
}

PsoParams pso_from(const json& j) {
    PsoParams p;
    p.c1 = j.at("c1").get<double>();
    p.c2 = j.at("c2").get<double>();
    p.inertia = j.at("inertia").get<double>();
    p.iterations = j.at("iterations").get<std::size_t>();
    p.swarm_size = j.at("swarm_size").get<std::size_t>();
    p.seed = j.at("seed").get<std::uint64_t>();
    return p;
}

}  // namespace

json model_to_json(const QuipusModel& model) {
    const NetworkBundle& bundle = model.bundle;
    const Network& instance = bundle.graphs.at(NetworkBundle::kInstance);

    json features = json::array();
    for (std::size_t c = 0; c < instance.features.cols(); ++c) {
        auto col = instance.features.column(c);
        features.push_back(std::vector<double>(col.begin(), col.end()));
    }

    json graphs = json::array();
    for (std::size_t g = 0; g < bundle.graph_count(); ++g) {
        const Network& net = bundle.graphs[g];
        json edges = json::array();
        for (auto [u, v] : net.graph.edges()) edges.push_back({u, v});
        graphs.push_back({
            {"kind", g == NetworkBundle::kInstance ? "instance" : "attribute"},
            {"attribute", g == NetworkBundle::kInstance ? json(nullptr) : json(g - 1)},
            {"modularity", bundle.modularities[g]},
            {"filter_modularity", model.filter_modularities.at(g)},
            {"active", static_cast<bool>(bundle.active[g])},
            {"weight", bundle.weights[g] ? json(*bundle.weights[g]) : json(nullptr)},
            {"radius", net.radius},
            {"edges", std::move(edges)},
        });
    }

    return {
        {"format", "quipus-model"},
        {"version", kModelFormatVersion},
        {"build_params", params_json(bundle.build_params)},
        {"hlnb_params", {{"b", bundle.hlnb_params.b}, {"alpha", bundle.hlnb_params.alpha}}},
        {"pso_params", pso_json(model.pso_params)},
        {"options",
         {{"insertion", to_string(model.options.insertion)}, {"aggregation", to_string(model.options.aggregation)}}},
        {"seed", model.seed},
        {"opt_accuracy", model.opt_accuracy},
        {"class_names", model.class_names},
        {"attribute_names", model.attribute_names},
        {"labels", std::vector<ClassId>(instance.graph.labels().begin(), instance.graph.labels().end())},
        {"features", std::move(features)},
        {"weights", model.weights},
        {"graphs", std::move(graphs)},
    };
}

QuipusModel model_from_json(const json& doc) {
    if (doc.value("format", std::string{}) != "quipus-model") throw std::runtime_error("not a quipus model document");
    if (doc.at("version").get<int>() != kModelFormatVersion) {
        throw std::runtime_error("unsupported model version " + doc.at("version").dump());
    }

    QuipusModel model;
    model.class_names = doc.at("class_names").get<std::vector<std::string>>();
    model.attribute_names = doc.at("attribute_names").get<std::vector<std::string>>();
    model.weights = doc.at("weights").get<std::vector<double>>();
    model.opt_accuracy = doc.at("opt_accuracy").get<double>();
    model.seed = doc.at("seed").get<std::uint64_t>();
    model.pso_params = pso_from(doc.at("pso_params"));
    model.options.insertion = insertion_mode_from_string(doc.at("options").at("insertion").get<std::string>());
    model.options.aggregation = aggregation_from_string(doc.at("options").at("aggregation").get<std::string>());

    const auto labels = doc.at("labels").get<std::vector<ClassId>>();
    const auto columns = doc.at("features").get<std::vector<std::vector<double>>>();
    const std::size_t n = labels.size();
    std::vector<double> flat;
    for (const auto& col : columns) {
        if (col.size() != n) throw std::runtime_error("model: feature column length mismatch");
        flat.insert(flat.end(), col.begin(), col.end());
    }
    const FeatureBlock features(n, columns.size(), std::move(flat));

    NetworkBundle& bundle = model.bundle;
    bundle.build_params = build_params_from(doc.at("build_params"));
    bundle.hlnb_params.b = doc.at("hlnb_params").at("b").get<std::size_t>();
    bundle.hlnb_params.alpha = doc.at("hlnb_params").at("alpha").get<double>();

    const auto& graphs = doc.at("graphs");
    if (graphs.size() != columns.size() + 1) throw std::runtime_error("model: graph count does not match arity");
    for (std::size_t g = 0; g < graphs.size(); ++g) {
        const auto& jg = graphs[g];
        std::vector<Edge> edges;
        for (const auto& e : jg.at("edges")) edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
        LabeledGraph graph(labels, {}, model.class_names.size(), edges);
        FeatureBlock block;
        if (g == NetworkBundle::kInstance) {
            block = features;
        } else {
            const std::size_t col[] = {g - 1};
            block = features.select_cols(col);
        }
        bundle.graphs.push_back(assemble_network(std::move(graph), std::move(block), jg.at("radius").get<double>()));
        bundle.modularities.push_back(jg.at("modularity").get<double>());
        model.filter_modularities.push_back(jg.at("filter_modularity").get<double>());
        bundle.active.push_back(jg.at("active").get<bool>());
        bundle.weights.push_back(jg.at("weight").is_null() ? std::nullopt
                                                           : std::optional<double>(jg.at("weight").get<double>()));
    }
    if (model.weights.size() != bundle.active_indices().size()) {
        throw std::runtime_error("model: weight count does not match active graphs");
    }
    return model;
}

void save_model(const QuipusModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << model_to_json(model).dump(1) << '\n';
}

QuipusModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return model_from_json(json::parse(in));
}

}  // namespace quipus
