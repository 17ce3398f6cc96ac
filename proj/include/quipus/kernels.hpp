#pragma once

// Data-parallel inner loops: distance rows for graph construction and the
// weighted class-score reduction behind the ensemble-weight objective.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 variant chosen at runtime. Variants are required to
// produce bit-identical results (same per-lane operation order, no FMA), so
// nearest-neighbor tie-breaking never depends on the instruction set.

#include <cstddef>
#include <span>
#include <string_view>

namespace quipus::kernels {

enum class Metric { euclidean, manhattan };
enum class Isa { scalar, avx2 };

std::string_view to_string(Isa isa);
std::string_view to_string(Metric m);

/// out[r] = distance(points[r, :], query). `points` is column-major with
/// `rows` rows and `query.size()` columns.
using DistancesFn = void (*)(const double* points, std::size_t rows, std::span<const double> query,
                             Metric metric, double* out);

/// scores[c * instances + i] = sum_g weights[g] * probs[(g * classes + c) * instances + i],
/// accumulated over g in ascending order.
using WeightedScoresFn = void (*)(const double* probs, std::size_t graphs, std::size_t classes,
                                  std::size_t instances, const double* weights, double* scores);

struct KernelTable {
    Isa isa;
    DistancesFn distances;
    WeightedScoresFn weighted_scores;
};

bool isa_available(Isa isa) noexcept;

/// Kernel table for a specific ISA; throws if the ISA is unavailable.
const KernelTable& kernels_for(Isa isa);

/// Table used by the library. Chosen once: AVX2 when the CPU supports it,
/// unless the environment variable QUIPUS_ISA=scalar forces the reference path.
const KernelTable& active() noexcept;

/// Overrides the active table (tests and benchmarks).
void set_active(Isa isa);

inline void distances(std::span<const double> points_col_major, std::size_t rows,
                      std::span<const double> query, Metric metric, std::span<double> out) {
    active().distances(points_col_major.data(), rows, query, metric, out.data());
}

}  // namespace quipus::kernels
