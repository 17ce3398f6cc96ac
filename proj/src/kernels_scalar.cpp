#include <cmath>

#include "kernels_impl.hpp"

namespace quipus::kernels::detail {

void distances_scalar(const double* points, std::size_t rows, std::span<const double> query, Metric metric,
                      double* out) {
    for (std::size_t r = 0; r < rows; ++r) out[r] = 0.0;
    for (std::size_t d = 0; d < query.size(); ++d) {
        const double* col = points + d * rows;
        const double q = query[d];
        if (metric == Metric::euclidean) {
            for (std::size_t r = 0; r < rows; ++r) {
                const double diff = col[r] - q;
                out[r] = out[r] + diff * diff;
            }
        } else {
            for (std::size_t r = 0; r < rows; ++r) out[r] = out[r] + std::fabs(col[r] - q);
        }
    }
    if (metric == Metric::euclidean) {
        for (std::size_t r = 0; r < rows; ++r) out[r] = std::sqrt(out[r]);
    }
}

void weighted_scores_scalar(const double* probs, std::size_t graphs, std::size_t classes,
                            std::size_t instances, const double* weights, double* scores) {
    for (std::size_t i = 0; i < classes * instances; ++i) scores[i] = 0.0;
    for (std::size_t g = 0; g < graphs; ++g) {
        const double w = weights[g];
        for (std::size_t c = 0; c < classes; ++c) {
            const double* plane = probs + (g * classes + c) * instances;
            double* acc = scores + c * instances;
            for (std::size_t i = 0; i < instances; ++i) acc[i] = acc[i] + w * plane[i];
        }
    }
}

}  // namespace quipus::kernels::detail
