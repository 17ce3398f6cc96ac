// quipus: command-line front end for building attribute/instance networks,
// cross-validating the ensemble and the baseline, grid search, training,
// prediction and graph export.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "quipus/dataset.hpp"
#include "quipus/ensemble.hpp"
#include "quipus/graph_io.hpp"
#include "quipus/harness.hpp"
#include "quipus/kernels.hpp"
#include "quipus/measures.hpp"
#include "quipus/model_io.hpp"

namespace {

using nlohmann::json;

struct DataOptions {
    std::string dataset;
    std::string label_col = "-1";
    std::vector<std::string> drop_columns;
    bool no_header = false;
    bool normalize = false;

    quipus::CsvOptions csv() const {
        quipus::CsvOptions o;
        o.label_column = selector(label_col);
        o.has_header = !no_header;
        for (const auto& d : drop_columns) o.drop_columns.push_back(selector(d));
        return o;
    }

    static quipus::ColumnSelector selector(const std::string& s) {
        try {
            std::size_t used = 0;
            const int i = std::stoi(s, &used);
            if (used == s.size()) return i;
        } catch (const std::exception&) {
        }
        return s;
    }

    quipus::Dataset load() const {
        auto ds = quipus::load_csv(dataset, csv());
        return normalize ? quipus::min_max_normalize(ds) : ds;
    }
};

struct ModelOptions {
    std::vector<std::size_t> k{1};
    std::vector<double> eps{0.0};
    std::vector<std::size_t> b{1};
    std::vector<double> alpha{1.0};
    std::string metric = "euclidean";
    std::string insertion = "global";
    std::string aggregation = "sum";
    double opt_fraction = 0.2;
    quipus::PsoParams pso;

    quipus::kernels::Metric metric_value() const {
        if (metric == "euclidean") return quipus::kernels::Metric::euclidean;
        if (metric == "manhattan") return quipus::kernels::Metric::manhattan;
        throw quipus::ConfigError("unknown metric '" + metric + "'");
    }
    quipus::EnsembleOptions ensemble() const {
        return {quipus::insertion_mode_from_string(insertion), quipus::aggregation_from_string(aggregation)};
    }
};

void add_data_options(CLI::App* cmd, DataOptions& d) {
    cmd->add_option("--dataset", d.dataset, "CSV file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--label-col", d.label_col, "label column: index (negative counts from the end) or name");
    cmd->add_option("--drop-column", d.drop_columns, "column to ignore (index or name); repeatable");
    cmd->add_flag("--no-header", d.no_header, "first row is data");
    cmd->add_flag("--normalize", d.normalize, "min-max normalize every attribute first");
}

void add_model_options(CLI::App* cmd, ModelOptions& m, bool lists) {
    auto* k = cmd->add_option("--k", m.k, "neighbor count");
    auto* e = cmd->add_option("--eps", m.eps, "epsilon percentile in [0,1]");
    auto* b = cmd->add_option("--b", m.b, "closest-betweenness node count");
    auto* a = cmd->add_option("--alpha", m.alpha, "weight of the betweenness evidence");
    for (auto* opt : {k, e, b, a}) {
        if (lists) {
            opt->delimiter(',');
        } else {
            opt->expected(1);
        }
    }
    cmd->add_option("--metric", m.metric, "euclidean | manhattan");
    cmd->add_option("--insertion", m.insertion, "per-class | global");
    cmd->add_option("--aggregation", m.aggregation, "sum | product");
    cmd->add_option("--opt-fraction", m.opt_fraction, "share of training rows held out for weight fitting");
    cmd->add_option("--c1", m.pso.c1, "PSO cognitive coefficient");
    cmd->add_option("--c2", m.pso.c2, "PSO social coefficient");
    cmd->add_option("--inertia", m.pso.inertia, "PSO inertia");
    cmd->add_option("--iterations", m.pso.iterations, "PSO iterations");
    cmd->add_option("--swarm", m.pso.swarm_size, "PSO swarm size");
    cmd->add_option("--pso-seed", m.pso.seed, "PSO seed offset");
}

quipus::ExperimentConfig make_config(const DataOptions& d, const ModelOptions& m, const std::string& mode,
                                     std::size_t folds, std::size_t reps, std::uint64_t seed, std::size_t jobs) {
    quipus::ExperimentConfig c;
    c.dataset = d.dataset;
    c.csv = d.csv();
    c.normalize = d.normalize;
    c.mode = quipus::mode_from_string(mode);
    c.grid = {m.k, m.eps, m.b, m.alpha};
    c.metric = m.metric_value();
    c.pso = m.pso;
    c.opt_fraction = m.opt_fraction;
    c.ensemble = m.ensemble();
    c.folds = folds;
    c.repetitions = reps;
    c.seed = seed;
    c.jobs = jobs;
    return c;
}

void print_summary(const quipus::ExperimentResult& r) {
    std::printf("%s %s k=%zu eps=%g b=%zu alpha=%g: %.2f +- %.2f (%zu x %zu folds, %.1fs)\n", r.dataset.c_str(),
                std::string(quipus::to_string(r.mode)).c_str(), r.params.k, r.params.epsilon, r.params.b,
                r.params.alpha, 100.0 * r.mean, 100.0 * r.stddev, r.repetitions, r.folds, r.wall_seconds);
}

int fail(const std::string& kind, const std::string& message, int code) {
    std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Network-based high-level classification with per-attribute networks"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML file with option values; command-line flags take precedence");

    DataOptions data;
    ModelOptions model;
    std::string mode = "quipus";
    std::size_t folds = 10;
    std::size_t reps = 10;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
    std::string out;
    bool dump_graphs = false;
    std::string model_path;

    auto* cv = app.add_subcommand("cv", "repeated stratified k-fold cross-validation");
    auto* grid = app.add_subcommand("grid", "grid search over k, eps, b, alpha with cross-validation");
    for (auto* cmd : {cv, grid}) {
        add_data_options(cmd, data);
        add_model_options(cmd, model, cmd == grid);
        cmd->add_option("--mode", mode, "quipus | baseline");
        cmd->add_option("--folds", folds, "folds per repetition");
        cmd->add_option("--reps", reps, "repetitions");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--jobs", jobs, "worker threads");
        cmd->add_option("--out", out, "report prefix: writes <out>.json and <out>.csv");
        cmd->add_flag("--graphs", dump_graphs, "also dump the last fold's networks as GraphML");
    }
    bool published_grid = false;
    grid->add_flag("--published-grid", published_grid, "k 1..30, eps 0.1..0.5, b 1..7, alpha 0..1 step 0.1");

    auto* train = app.add_subcommand("train", "train on a whole CSV and save the model as JSON");
    add_data_options(train, data);
    add_model_options(train, model, false);
    train->add_option("--seed", seed, "training seed");
    train->add_option("--out", out, "model file")->required();

    auto* predict = app.add_subcommand("predict", "predict rows of a CSV with a saved model");
    add_data_options(predict, data);
    predict->add_option("--model", model_path, "model file")->required()->check(CLI::ExistingFile);
    predict->add_option("--out", out, "CSV of predictions (default: stdout)");

    auto* export_graphs = app.add_subcommand("export-graphs", "write GraphML and DOT for every network");
    add_data_options(export_graphs, data);
    add_model_options(export_graphs, model, false);
    export_graphs->add_option("--out", out, "output directory")->required();

    auto* normalize = app.add_subcommand("normalize", "write a min-max normalized copy of a CSV");
    add_data_options(normalize, data);
    normalize->add_option("--out", out, "output CSV")->required();
    // Config values live in a section named after the subcommand, e.g. [cv].
    for (auto* sub : app.get_subcommands({})) sub->configurable();

    // The config option belongs to the top-level app, so it must precede the
    // subcommand; accept it anywhere by moving it to the front.
    std::vector<std::string> args(argv + 1, argv + argc);
    for (std::size_t i = 0; i < args.size(); ++i) {
        const bool split = args[i] == "--config" && i + 1 < args.size();
        if (!split && args[i].rfind("--config=", 0) != 0) continue;
        std::vector<std::string> moved(args.begin() + static_cast<std::ptrdiff_t>(i),
                                       args.begin() + static_cast<std::ptrdiff_t>(i + (split ? 2 : 1)));
        args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + moved.size()));
        args.insert(args.begin(), moved.begin(), moved.end());
        break;
    }
    std::reverse(args.begin(), args.end());

    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail("usage", e.what(), 2);
    }

    try {
        if (cv->parsed() || grid->parsed()) {
            auto config = make_config(data, model, mode, folds, reps, seed, jobs);
            if (published_grid) {
                auto g = quipus::ParamGrid::published();
                config.grid = g;
            }
            if (dump_graphs) config.graph_dir = (out.empty() ? std::string("quipus") : out) + "_graphs";
            config.validate();
            quipus::ExperimentResult result;
            if (cv->parsed()) {
                result = quipus::run_cv(config);
            } else {
                auto run = quipus::run_grid(config);
                result = std::move(run.best);
                if (!out.empty()) {
                    std::ofstream f(out + "_grid.json");
                    f << quipus::grid_to_json(run.table).dump(2) << '\n';
                }
                std::printf("grid: %zu points evaluated\n", run.table.table.size());
            }
            print_summary(result);
            if (!out.empty()) {
                result.final_graphs.clear();
                quipus::export_report(result, out);
            }
        } else if (train->parsed()) {
            const auto ds = data.load();
            quipus::TrainingOptions opts;
            opts.opt_fraction = model.opt_fraction;
            opts.seed = seed;
            opts.ensemble = model.ensemble();
            const quipus::BuildParams build{model.k.at(0), model.eps.at(0), model.metric_value()};
            const quipus::HlnbParams hlnb{model.b.at(0), model.alpha.at(0)};
            const auto m = quipus::train(ds, build, hlnb, model.pso, opts);
            quipus::save_model(m, out);
            std::printf("trained: %zu of %zu graphs active, optimization accuracy %.2f%%\n",
                        m.bundle.active_indices().size(), m.bundle.graph_count(), 100.0 * m.opt_accuracy);
        } else if (predict->parsed()) {
            const auto m = quipus::load_model(model_path);
            const auto ds = data.load();
            std::ofstream file;
            if (!out.empty()) {
                file.open(out);
                if (!file) return fail("io", "cannot write " + out, 1);
            }
            std::ostream& os = out.empty() ? std::cout : file;
            os << "row,predicted,actual\n";
            std::size_t correct = 0;
            for (std::size_t i = 0; i < ds.rows(); ++i) {
                const auto p = quipus::predict(m, ds.row(i));
                const auto& name = m.class_names.at(static_cast<std::size_t>(p.cls));
                const auto& actual = ds.class_names()[static_cast<std::size_t>(ds.label(i))];
                if (name == actual) ++correct;
                os << i << ',' << name << ',' << actual << '\n';
            }
            std::fprintf(stderr, "accuracy %.2f%% (%zu/%zu)\n",
                         ds.rows() ? 100.0 * static_cast<double>(correct) / static_cast<double>(ds.rows()) : 0.0,
                         correct, ds.rows());
        } else if (export_graphs->parsed()) {
            const auto ds = data.load();
            const quipus::BuildParams build{model.k.at(0), model.eps.at(0), model.metric_value()};
            const auto bundle = quipus::build_bundle(ds, build);
            std::filesystem::create_directories(out);
            json summary = json::array();
            for (std::size_t g = 0; g < bundle.graph_count(); ++g) {
                const std::string name = g == 0 ? "instance" : "attribute_" + std::to_string(g);
                const auto& graph = bundle.graphs[g].graph;
                quipus::write_graphml(std::filesystem::path(out) / (name + ".graphml"), graph, ds.class_names(), name);
                quipus::write_dot(std::filesystem::path(out) / (name + ".dot"), graph, ds.class_names(), name);
                summary.push_back({{"graph", name},
                                   {"column", g == 0 ? json(nullptr) : json(ds.attribute_names()[g - 1])},
                                   {"nodes", graph.node_count()},
                                   {"edges", graph.edge_count()},
                                   {"modularity", bundle.modularities[g]}});
            }
            std::ofstream(std::filesystem::path(out) / "summary.json") << summary.dump(2) << '\n';
            std::printf("wrote %zu graphs to %s\n", bundle.graph_count(), out.c_str());
        } else if (normalize->parsed()) {
            quipus::write_csv(quipus::min_max_normalize(quipus::load_csv(data.dataset, data.csv())), out);
        }
    } catch (const quipus::ConfigError& e) {
        return fail("config", e.what(), 2);
    } catch (const quipus::DatasetError& e) {
        return fail("dataset", e.what(), 1);
    } catch (const std::exception& e) {
        return fail("runtime", e.what(), 1);
    }
    return 0;
}
