#include "quipus/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

namespace quipus {

FeatureBlock::FeatureBlock(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

FeatureBlock::FeatureBlock(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("FeatureBlock: data size does not match rows*cols");
    }
}

std::vector<double> FeatureBlock::row(std::size_t r) const {
    std::vector<double> out(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out[c] = at(r, c);
    return out;
}

FeatureBlock FeatureBlock::select_rows(std::span<const std::size_t> rows) const {
    FeatureBlock out(rows.size(), cols_);
    for (std::size_t c = 0; c < cols_; ++c) {
        for (std::size_t i = 0; i < rows.size(); ++i) out.at(i, c) = at(rows[i], c);
    }
    return out;
}

FeatureBlock FeatureBlock::select_cols(std::span<const std::size_t> cols) const {
    std::vector<double> data;
    data.reserve(rows_ * cols.size());
    for (std::size_t c : cols) {
        auto col = column(c);
        data.insert(data.end(), col.begin(), col.end());
    }
    return FeatureBlock(rows_, cols.size(), std::move(data));
}

Dataset::Dataset(FeatureBlock features, std::vector<ClassId> labels,
                 std::vector<std::string> attribute_names, std::vector<std::string> class_names)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      attribute_names_(std::move(attribute_names)),
      class_names_(std::move(class_names)) {
    if (labels_.size() != features_.rows()) {
        throw DatasetError("dataset: label count does not match row count");
    }
    if (features_.cols() == 0) throw DatasetError("dataset: arity must be at least 1");
    if (attribute_names_.empty()) {
        for (std::size_t c = 0; c < features_.cols(); ++c) {
            attribute_names_.push_back("attr" + std::to_string(c));
        }
    }
    if (attribute_names_.size() != features_.cols()) {
        throw DatasetError("dataset: attribute name count does not match arity");
    }
    for (ClassId y : labels_) {
        if (y < 0 || static_cast<std::size_t>(y) >= class_names_.size()) {
            throw DatasetError("dataset: label out of range");
        }
    }
    for (double v : features_.raw()) {
        if (!std::isfinite(v)) throw DatasetError("dataset: non-finite feature value");
    }
}

std::vector<std::size_t> Dataset::class_sizes() const {
    std::vector<std::size_t> sizes(class_count(), 0);
    for (ClassId y : labels_) ++sizes[static_cast<std::size_t>(y)];
    return sizes;
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    std::vector<ClassId> labels;
    labels.reserve(rows.size());
    for (std::size_t r : rows) labels.push_back(labels_.at(r));
    return Dataset(features_.select_rows(rows), std::move(labels), attribute_names_, class_names_);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

std::size_t resolve_column(const ColumnSelector& sel, const std::vector<std::string>& header,
                           std::size_t width) {
    if (const int* idx = std::get_if<int>(&sel)) {
        long i = *idx < 0 ? static_cast<long>(width) + *idx : *idx;
        if (i < 0 || static_cast<std::size_t>(i) >= width) {
            throw DatasetError("column index " + std::to_string(*idx) + " out of range");
        }
        return static_cast<std::size_t>(i);
    }
    const auto& name = std::get<std::string>(sel);
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        // Accept a numeric string when there is no such header name.
        int parsed = 0;
        auto [p, ec] = std::from_chars(name.data(), name.data() + name.size(), parsed);
        if (ec == std::errc() && p == name.data() + name.size()) {
            return resolve_column(ColumnSelector{parsed}, header, width);
        }
        throw DatasetError("no column named '" + name + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
}

std::string format_real(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

}  // namespace

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open " + path.string());

    std::vector<std::vector<std::string>> records;
    std::vector<std::size_t> line_numbers;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        records.push_back(split_csv_line(line));
        line_numbers.push_back(line_no);
    }
    if (records.empty()) throw DatasetError(path.string() + ": empty dataset");

    const std::size_t width = records.front().size();
    std::vector<std::string> header;
    std::size_t first_data = 0;
    if (options.has_header) {
        header = records.front();
        first_data = 1;
    }
    if (records.size() <= first_data) throw DatasetError(path.string() + ": empty dataset");

    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].size() != width) {
            throw DatasetError(path.string() + ": ragged row at line " +
                               std::to_string(line_numbers[i]) + " (expected " +
                               std::to_string(width) + " cells, got " +
                               std::to_string(records[i].size()) + ")");
        }
    }

    const std::size_t label_col = resolve_column(options.label_column, header, width);
    std::vector<bool> skip(width, false);
    skip[label_col] = true;
    for (const auto& sel : options.drop_columns) skip[resolve_column(sel, header, width)] = true;

    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < width; ++c) {
        if (!skip[c]) feature_cols.push_back(c);
    }
    if (feature_cols.empty()) throw DatasetError(path.string() + ": no feature columns");

    const std::size_t n = records.size() - first_data;
    FeatureBlock features(n, feature_cols.size());
    std::vector<ClassId> labels(n);
    std::vector<std::string> class_names;
    std::unordered_map<std::string, ClassId> class_index;

    for (std::size_t r = 0; r < n; ++r) {
        const auto& rec = records[first_data + r];
        const std::size_t ln = line_numbers[first_data + r];
        for (std::size_t j = 0; j < feature_cols.size(); ++j) {
            const std::string& cell = rec[feature_cols[j]];
            double v = 0.0;
            auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (cell.empty() || ec != std::errc() || p != cell.data() + cell.size() ||
                !std::isfinite(v)) {
                throw DatasetError(path.string() + ": unparseable cell '" + cell + "' at line " +
                                   std::to_string(ln) + ", column " +
                                   std::to_string(feature_cols[j] + 1));
            }
            features.at(r, j) = v;
        }
        const std::string& lab = rec[label_col];
        if (lab.empty()) {
            throw DatasetError(path.string() + ": empty label at line " + std::to_string(ln));
        }
        auto [it, inserted] = class_index.try_emplace(lab, static_cast<ClassId>(class_names.size()));
        if (inserted) class_names.push_back(lab);
        labels[r] = it->second;
    }

    std::vector<std::string> attribute_names;
    for (std::size_t c : feature_cols) {
        attribute_names.push_back(options.has_header ? header[c] : "attr" + std::to_string(c));
    }
    return Dataset(std::move(features), std::move(labels), std::move(attribute_names),
                   std::move(class_names));
}

void write_csv(const Dataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DatasetError("cannot write " + path.string());
    for (const auto& name : ds.attribute_names()) out << name << ',';
    out << "class\n";
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        for (std::size_t c = 0; c < ds.arity(); ++c) out << format_real(ds.features().at(r, c)) << ',';
        out << ds.class_names()[static_cast<std::size_t>(ds.label(r))] << '\n';
    }
    if (!out) throw DatasetError("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Splitting

namespace {

std::vector<std::vector<std::size_t>> shuffled_members(const Dataset& ds, std::mt19937_64& rng) {
    std::vector<std::vector<std::size_t>> members(ds.class_count());
    for (std::size_t r = 0; r < ds.rows(); ++r) members[static_cast<std::size_t>(ds.label(r))].push_back(r);
    for (auto& m : members) std::shuffle(m.begin(), m.end(), rng);
    return members;
}

Dataset subset_sorted(const Dataset& ds, std::vector<std::size_t>& rows) {
    std::sort(rows.begin(), rows.end());
    return ds.subset(rows);
}

}  // namespace

SplitPair stratified_split(const Dataset& ds, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) {
        throw DatasetError("stratified_split: fraction must lie in (0,1)");
    }
    const auto sizes = ds.class_sizes();
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] == 1) {
            throw DatasetError("stratified_split: class '" + ds.class_names()[c] +
                               "' has a single member");
        }
    }

    // Largest-remainder allocation of round(fraction * n) rows across classes.
    const std::size_t target = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ds.rows())));
    std::vector<std::size_t> take(sizes.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        const double exact = fraction * static_cast<double>(sizes[c]);
        take[c] = static_cast<std::size_t>(std::floor(exact));
        assigned += take[c];
        if (sizes[c] > 0) remainders.emplace_back(exact - std::floor(exact), c);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < target && i < remainders.size(); ++i, ++assigned) {
        ++take[remainders[i].second];
    }
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] == 0) continue;
        take[c] = std::clamp<std::size_t>(take[c], 1, sizes[c] - 1);
    }

    std::mt19937_64 rng(seed);
    auto members = shuffled_members(ds, rng);
    SplitPair out;
    out.seed = seed;
    for (std::size_t c = 0; c < members.size(); ++c) {
        for (std::size_t i = 0; i < members[c].size(); ++i) {
            (i < take[c] ? out.first_rows : out.second_rows).push_back(members[c][i]);
        }
    }
    out.first = subset_sorted(ds, out.first_rows);
    out.second = subset_sorted(ds, out.second_rows);
    return out;
}

std::vector<SplitPair> stratified_kfold(const Dataset& ds, std::size_t folds, std::uint64_t seed) {
    if (folds < 2) throw DatasetError("stratified_kfold: need at least 2 folds");
    if (folds > ds.rows()) {
        throw DatasetError("stratified_kfold: " + std::to_string(folds) + " folds exceed " +
                           std::to_string(ds.rows()) + " rows");
    }
    std::mt19937_64 rng(seed);
    auto members = shuffled_members(ds, rng);

    // One round-robin cursor runs across all classes, so fold sizes differ by
    // at most one and small classes spread over distinct folds.
    std::vector<std::vector<std::size_t>> assignment(folds);
    std::size_t cursor = 0;
    for (const auto& m : members) {
        for (std::size_t r : m) {
            assignment[cursor].push_back(r);
            cursor = (cursor + 1) % folds;
        }
    }

    std::vector<SplitPair> out(folds);
    for (std::size_t f = 0; f < folds; ++f) {
        SplitPair& sp = out[f];
        sp.seed = seed;
        sp.second_rows = assignment[f];
        for (std::size_t g = 0; g < folds; ++g) {
            if (g != f) sp.first_rows.insert(sp.first_rows.end(), assignment[g].begin(), assignment[g].end());
        }
        sp.first = subset_sorted(ds, sp.first_rows);
        sp.second = subset_sorted(ds, sp.second_rows);
    }
    return out;
}

Dataset min_max_normalize(const Dataset& ds) {
    FeatureBlock out(ds.rows(), ds.arity());
    for (std::size_t c = 0; c < ds.arity(); ++c) {
        auto col = ds.features().column(c);
        auto [lo, hi] = std::minmax_element(col.begin(), col.end());
        const double span = col.empty() ? 0.0 : *hi - *lo;
        for (std::size_t r = 0; r < ds.rows(); ++r) {
            out.at(r, c) = span > 0.0 ? (col[r] - *lo) / span : 0.0;
        }
    }
    return Dataset(std::move(out), std::vector<ClassId>(ds.labels().begin(), ds.labels().end()),
                   ds.attribute_names(), ds.class_names());
}

}  // namespace quipus
