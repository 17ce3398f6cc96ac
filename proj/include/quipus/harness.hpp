#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "quipus/dataset.hpp"
#include "quipus/ensemble.hpp"
#include "quipus/pso.hpp"

namespace quipus {

enum class Mode { quipus, baseline };

std::string_view to_string(Mode m);
Mode mode_from_string(std::string_view s);

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    std::filesystem::path dataset;
    CsvOptions csv;
    Mode mode = Mode::quipus;
    /// A single point for `cv`; any size for `grid`.
    ParamGrid grid{{1}, {0.0}, {1}, {1.0}};
    kernels::Metric metric = kernels::Metric::euclidean;
    PsoParams pso;
    double opt_fraction = 0.2;
    EnsembleOptions ensemble;
    std::size_t repetitions = 10;
    std::size_t folds = 10;
    std::uint64_t seed = 0;
    bool normalize = false;
    std::size_t jobs = 1;
    /// When set, the networks of the last fold are written here as GraphML.
    std::optional<std::filesystem::path> graph_dir;

    void validate() const;
};

struct FoldRecord {
    std::size_t repetition = 0;
    std::size_t fold = 0;
    std::size_t correct = 0;
    std::size_t total = 0;
    double accuracy = 0.0;
    /// Quipus mode only; slot 0 is the instance graph.
    std::vector<double> modularities;
    std::vector<bool> active;
    std::vector<std::optional<double>> weights;
    double opt_accuracy = 0.0;

    bool operator==(const FoldRecord&) const = default;
};

struct NamedGraph {
    std::string name;
    LabeledGraph graph;
};

struct ExperimentResult {
    std::string dataset;
    Mode mode = Mode::quipus;
    GridPoint params;
    std::uint64_t seed = 0;
    std::size_t repetitions = 0;
    std::size_t folds = 0;
    std::vector<FoldRecord> records;  ///< ordered by (repetition, fold)
    double mean = 0.0;                ///< over every fold accuracy
    double stddev = 0.0;              ///< population std over every fold accuracy
    std::vector<double> repetition_means;
    double wall_seconds = 0.0;  ///< kept apart from the deterministic fields

    /// Not serialized; filled when graph dumps were requested.
    std::vector<NamedGraph> final_graphs;
    std::vector<std::string> class_names;

    /// Recomputes mean, stddev and repetition means from the records.
    void summarize();
    /// Equality of every deterministic field (ignores timing and graphs).
    bool same_outcome(const ExperimentResult& other) const;
};

/// Repeated stratified k-fold cross-validation at one parameter point.
/// Repetition r folds with seed `seed + r`; the training run of fold f in
/// repetition r uses seed `(seed + r) * 1000 + f`.
ExperimentResult run_cv(const Dataset& ds, const ExperimentConfig& config, const GridPoint& point);

/// Loads the configured dataset and runs the single grid point.
ExperimentResult run_cv(const ExperimentConfig& config);

struct GridRun {
    ExperimentResult best;
    GridResult table;  ///< mean accuracy per point
};

GridRun run_grid(const Dataset& ds, const ExperimentConfig& config);
GridRun run_grid(const ExperimentConfig& config);

Dataset load_configured_dataset(const ExperimentConfig& config);

nlohmann::json result_to_json(const ExperimentResult& result);
ExperimentResult result_from_json(const nlohmann::json& doc);
nlohmann::json grid_to_json(const GridResult& grid);

/// Writes `<prefix>.json` (full detail), `<prefix>.csv` (one row per fold) and,
/// if the result carries graphs, `<prefix>_graphs/<name>.graphml`.
void export_report(const ExperimentResult& result, const std::filesystem::path& prefix);

}  // namespace quipus
