#include "quipus/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "quipus/graph_io.hpp"

namespace quipus {

using nlohmann::json;

std::string_view to_string(Mode m) { return m == Mode::baseline ? "baseline" : "quipus"; }

Mode mode_from_string(std::string_view s) {
    if (s == "quipus") return Mode::quipus;
    if (s == "baseline") return Mode::baseline;
    throw ConfigError("unknown mode '" + std::string(s) + "'");
}

void ExperimentConfig::validate() const {
    if (repetitions < 1) throw ConfigError("repetitions must be at least 1");
    if (folds < 2) throw ConfigError("folds must be at least 2");
    if (jobs < 1) throw ConfigError("jobs must be at least 1");
    if (grid.size() == 0) throw ConfigError("parameter grid is empty");
    for (std::size_t k : grid.k) {
        if (k < 1) throw ConfigError("k must be at least 1");
    }
    for (double e : grid.epsilon) {
        if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("epsilon percentile must lie in [0,1]");
    }
    for (std::size_t b : grid.b) {
        if (b < 1) throw ConfigError("b must be at least 1");
    }
    for (double a : grid.alpha) {
        if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("alpha must lie in [0,1]");
    }
    if (!(opt_fraction > 0.0 && opt_fraction < 1.0)) throw ConfigError("opt fraction must lie in (0,1)");
    try {
        pso.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

void ExperimentResult::summarize() {
    mean = 0.0;
    stddev = 0.0;
    repetition_means.assign(repetitions, 0.0);
    std::vector<std::size_t> per_rep(repetitions, 0);
    for (const auto& r : records) {
        mean += r.accuracy;
        repetition_means.at(r.repetition) += r.accuracy;
        ++per_rep[r.repetition];
    }
    if (records.empty()) return;
    mean /= static_cast<double>(records.size());
    for (const auto& r : records) stddev += (r.accuracy - mean) * (r.accuracy - mean);
    stddev = std::sqrt(stddev / static_cast<double>(records.size()));
    for (std::size_t i = 0; i < repetitions; ++i) {
        if (per_rep[i] > 0) repetition_means[i] /= static_cast<double>(per_rep[i]);
    }
}

bool ExperimentResult::same_outcome(const ExperimentResult& o) const {
    return dataset == o.dataset && mode == o.mode && params == o.params && seed == o.seed &&
           repetitions == o.repetitions && folds == o.folds && records == o.records && mean == o.mean &&
           stddev == o.stddev && repetition_means == o.repetition_means;
}

Dataset load_configured_dataset(const ExperimentConfig& config) {
    Dataset ds = load_csv(config.dataset, config.csv);
    return config.normalize ? min_max_normalize(ds) : ds;
}

namespace {

struct FoldOutput {
    FoldRecord record;
    std::vector<NamedGraph> graphs;
};

FoldOutput run_fold(const SplitPair& split, const ExperimentConfig& config, const GridPoint& point,
                    std::size_t rep, std::size_t fold, bool keep_graphs) {
    const BuildParams build{point.k, point.epsilon, config.metric};
    const HlnbParams hlnb{point.b, point.alpha};
    const Dataset& test = split.second;

    FoldOutput out;
    FoldRecord& rec = out.record;
    rec.repetition = rep;
    rec.fold = fold;
    rec.total = test.rows();

    if (config.mode == Mode::baseline) {
        const BaselineModel model = train_baseline(split.first, build, hlnb, config.ensemble.insertion);
        for (std::size_t i = 0; i < test.rows(); ++i) {
            if (predict(model, test.row(i)).cls == test.label(i)) ++rec.correct;
        }
        if (keep_graphs) out.graphs.push_back({"instance", model.instance.graph});
    } else {
        TrainingOptions opts;
        opts.opt_fraction = config.opt_fraction;
        opts.seed = (config.seed + rep) * 1000 + fold;
        opts.ensemble = config.ensemble;
        const QuipusModel model = train(split.first, build, hlnb, config.pso, opts);
        for (std::size_t i = 0; i < test.rows(); ++i) {
            if (predict(model, test.row(i)).cls == test.label(i)) ++rec.correct;
        }
        rec.modularities = model.bundle.modularities;
        rec.active = model.bundle.active;
        rec.weights = model.bundle.weights;
        rec.opt_accuracy = model.opt_accuracy;
        if (keep_graphs) {
            for (std::size_t g = 0; g < model.bundle.graph_count(); ++g) {
                out.graphs.push_back({g == 0 ? "instance" : "attribute_" + std::to_string(g),
                                      model.bundle.graphs[g].graph});
            }
        }
    }
    rec.accuracy = rec.total == 0 ? 0.0 : static_cast<double>(rec.correct) / static_cast<double>(rec.total);
    return out;
}

}  // namespace

ExperimentResult run_cv(const Dataset& ds, const ExperimentConfig& config, const GridPoint& point) {
    config.validate();
    if (config.folds > ds.rows()) {
        throw ConfigError(std::to_string(config.folds) + " folds exceed " + std::to_string(ds.rows()) + " rows");
    }
    const auto started = std::chrono::steady_clock::now();

    std::vector<std::vector<SplitPair>> splits;
    for (std::size_t r = 0; r < config.repetitions; ++r) splits.push_back(stratified_kfold(ds, config.folds, config.seed + r));

    const std::size_t tasks = config.repetitions * config.folds;
    std::vector<FoldOutput> outputs(tasks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (std::size_t t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) {
            const std::size_t rep = t / config.folds;
            const std::size_t fold = t % config.folds;
            try {
                outputs[t] = run_fold(splits[rep][fold], config, point, rep, fold,
                                      config.graph_dir.has_value() && t + 1 == tasks);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(tasks);
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t j = 1; j < std::min(config.jobs, tasks); ++j) pool.emplace_back(worker);
        worker();
    }
    if (failure) std::rethrow_exception(failure);

    ExperimentResult result;
    result.dataset = config.dataset.filename().string();
    result.mode = config.mode;
    result.params = point;
    result.seed = config.seed;
    result.repetitions = config.repetitions;
    result.folds = config.folds;
    result.class_names = ds.class_names();
    for (auto& o : outputs) {
        result.records.push_back(std::move(o.record));
        if (!o.graphs.empty()) result.final_graphs = std::move(o.graphs);
    }
    result.summarize();
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    if (config.graph_dir) {
        std::filesystem::create_directories(*config.graph_dir);
        for (const auto& g : result.final_graphs) {
            write_graphml(*config.graph_dir / (g.name + ".graphml"), g.graph, result.class_names, g.name);
        }
    }
    return result;
}

ExperimentResult run_cv(const ExperimentConfig& config) {
    config.validate();
    if (config.grid.size() != 1) throw ConfigError("cv needs exactly one parameter point; use grid for several");
    const Dataset ds = load_configured_dataset(config);
    return run_cv(ds, config, {config.grid.k[0], config.grid.epsilon[0], config.grid.b[0], config.grid.alpha[0]});
}

GridRun run_grid(const Dataset& ds, const ExperimentConfig& config) {
    config.validate();
    GridRun run;
    std::optional<ExperimentResult> best;
    ExperimentConfig quiet = config;
    quiet.graph_dir.reset();
    run.table = grid_search(config.grid, [&](const GridPoint& p) {
        ExperimentResult r = run_cv(ds, quiet, p);
        const double score = r.mean;
        if (!best || score > best->mean) best = std::move(r);
        return score;
    });
    // Re-run the winner when graph dumps are wanted, so they match it.
    run.best = config.graph_dir ? run_cv(ds, config, run.table.best) : std::move(*best);
    return run;
}

GridRun run_grid(const ExperimentConfig& config) {
    config.validate();
    return run_grid(load_configured_dataset(config), config);
}

// ---------------------------------------------------------------------------
// Reports

json result_to_json(const ExperimentResult& r) {
    json records = json::array();
    for (const auto& f : r.records) {
        json weights = json::array();
        for (const auto& w : f.weights) weights.push_back(w ? json(*w) : json(nullptr));
        records.push_back({{"repetition", f.repetition},
                           {"fold", f.fold},
                           {"correct", f.correct},
                           {"total", f.total},
                           {"accuracy", f.accuracy},
                           {"modularities", f.modularities},
                           {"active", f.active},
                           {"weights", std::move(weights)},
                           {"opt_accuracy", f.opt_accuracy}});
    }
    return {{"dataset", r.dataset},
            {"mode", to_string(r.mode)},
            {"params", {{"k", r.params.k}, {"epsilon", r.params.epsilon}, {"b", r.params.b}, {"alpha", r.params.alpha}}},
            {"seed", r.seed},
            {"repetitions", r.repetitions},
            {"folds", r.folds},
            {"mean", r.mean},
            {"stddev", r.stddev},
            {"repetition_means", r.repetition_means},
            {"records", std::move(records)},
            {"timing", {{"wall_seconds", r.wall_seconds}}}};
}

ExperimentResult result_from_json(const json& doc) {
    ExperimentResult r;
    r.dataset = doc.at("dataset").get<std::string>();
    r.mode = mode_from_string(doc.at("mode").get<std::string>());
    const auto& p = doc.at("params");
    r.params = {p.at("k").get<std::size_t>(), p.at("epsilon").get<double>(), p.at("b").get<std::size_t>(),
                p.at("alpha").get<double>()};
    r.seed = doc.at("seed").get<std::uint64_t>();
    r.repetitions = doc.at("repetitions").get<std::size_t>();
    r.folds = doc.at("folds").get<std::size_t>();
    r.mean = doc.at("mean").get<double>();
    r.stddev = doc.at("stddev").get<double>();
    r.repetition_means = doc.at("repetition_means").get<std::vector<double>>();
    for (const auto& f : doc.at("records")) {
        FoldRecord rec;
        rec.repetition = f.at("repetition").get<std::size_t>();
        rec.fold = f.at("fold").get<std::size_t>();
        rec.correct = f.at("correct").get<std::size_t>();
        rec.total = f.at("total").get<std::size_t>();
        rec.accuracy = f.at("accuracy").get<double>();
        rec.modularities = f.at("modularities").get<std::vector<double>>();
        rec.active = f.at("active").get<std::vector<bool>>();
        for (const auto& w : f.at("weights")) {
            rec.weights.push_back(w.is_null() ? std::nullopt : std::optional<double>(w.get<double>()));
        }
        rec.opt_accuracy = f.at("opt_accuracy").get<double>();
        r.records.push_back(std::move(rec));
    }
    if (doc.contains("timing")) r.wall_seconds = doc.at("timing").value("wall_seconds", 0.0);
    return r;
}

json grid_to_json(const GridResult& grid) {
    json table = json::array();
    for (const auto& e : grid.table) {
        table.push_back({{"k", e.point.k}, {"epsilon", e.point.epsilon}, {"b", e.point.b}, {"alpha", e.point.alpha},
                         {"score", e.score}});
    }
    return {{"best",
             {{"k", grid.best.k}, {"epsilon", grid.best.epsilon}, {"b", grid.best.b}, {"alpha", grid.best.alpha}}},
            {"best_score", grid.best_score},
            {"table", std::move(table)}};
}

void export_report(const ExperimentResult& result, const std::filesystem::path& prefix) {
    if (prefix.has_parent_path()) std::filesystem::create_directories(prefix.parent_path());
    const auto json_path = std::filesystem::path(prefix.string() + ".json");
    const auto csv_path = std::filesystem::path(prefix.string() + ".csv");
    {
        std::ofstream out(json_path);
        if (!out) throw std::runtime_error("cannot write " + json_path.string());
        out << result_to_json(result).dump(2) << '\n';
    }
    {
        std::ofstream out(csv_path);
        if (!out) throw std::runtime_error("cannot write " + csv_path.string());
        out << "repetition,fold,correct,total,accuracy\n";
        for (const auto& r : result.records) {
            out << r.repetition << ',' << r.fold << ',' << r.correct << ',' << r.total << ',' << json(r.accuracy).dump()
                << '\n';
        }
    }
    if (!result.final_graphs.empty()) {
        const auto dir = std::filesystem::path(prefix.string() + "_graphs");
        std::filesystem::create_directories(dir);
        for (const auto& g : result.final_graphs) {
            write_graphml(dir / (g.name + ".graphml"), g.graph, result.class_names, g.name);
        }
    }
}

}  // namespace quipus
