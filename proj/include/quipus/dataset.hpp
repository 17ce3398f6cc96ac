#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace quipus {

using ClassId = int;

/// Raised for malformed input files and invalid dataset operations.
class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Column-major block of real features. Rows are instances.
class FeatureBlock {
public:
    FeatureBlock() = default;
    FeatureBlock(std::size_t rows, std::size_t cols);
    FeatureBlock(std::size_t rows, std::size_t cols, std::vector<double> column_major);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double at(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }
    double& at(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }

    std::span<const double> column(std::size_t c) const {
        return {data_.data() + c * rows_, rows_};
    }
    std::vector<double> row(std::size_t r) const;

    FeatureBlock select_rows(std::span<const std::size_t> rows) const;
    FeatureBlock select_cols(std::span<const std::size_t> cols) const;

    const std::vector<double>& raw() const noexcept { return data_; }

    bool operator==(const FeatureBlock&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Labeled tabular data. Immutable once constructed.
///
/// Labels index into `class_names()`. A dataset produced by `subset` keeps the
/// parent's class space, so a subset may lack members of some class; datasets
/// produced by loading always contain every class.
class Dataset {
public:
    Dataset() = default;
    Dataset(FeatureBlock features, std::vector<ClassId> labels,
            std::vector<std::string> attribute_names, std::vector<std::string> class_names);

    std::size_t rows() const noexcept { return features_.rows(); }
    std::size_t arity() const noexcept { return features_.cols(); }
    std::size_t class_count() const noexcept { return class_names_.size(); }

    const FeatureBlock& features() const noexcept { return features_; }
    std::span<const ClassId> labels() const noexcept { return labels_; }
    ClassId label(std::size_t r) const { return labels_[r]; }
    const std::vector<std::string>& attribute_names() const noexcept { return attribute_names_; }
    const std::vector<std::string>& class_names() const noexcept { return class_names_; }

    std::vector<double> row(std::size_t r) const { return features_.row(r); }
    std::vector<std::size_t> class_sizes() const;

    Dataset subset(std::span<const std::size_t> rows) const;

    bool operator==(const Dataset&) const = default;

private:
    FeatureBlock features_;
    std::vector<ClassId> labels_;
    std::vector<std::string> attribute_names_;
    std::vector<std::string> class_names_;
};

/// Selects the label column by zero-based index or by header name.
/// Negative indices count from the end (-1 is the last column).
using ColumnSelector = std::variant<int, std::string>;

struct CsvOptions {
    ColumnSelector label_column = -1;
    bool has_header = true;
    std::vector<ColumnSelector> drop_columns;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// Writes features followed by the label column (class names), with a header.
/// Values are printed with round-trip precision.
void write_csv(const Dataset& ds, const std::filesystem::path& path);

struct SplitPair {
    Dataset first;
    Dataset second;
    std::vector<std::size_t> first_rows;
    std::vector<std::size_t> second_rows;
    std::uint64_t seed = 0;
};

/// Stratified random split. `first` receives roughly `fraction` of every class.
SplitPair stratified_split(const Dataset& ds, double fraction, std::uint64_t seed);

/// Stratified k-fold. For fold i, `first` is the training part and `second`
/// the held-out fold.
std::vector<SplitPair> stratified_kfold(const Dataset& ds, std::size_t folds, std::uint64_t seed);

Dataset min_max_normalize(const Dataset& ds);

}  // namespace quipus
