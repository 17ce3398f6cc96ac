// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "kernels_impl.hpp"

namespace quipus::kernels::detail {

void distances_avx2(const double* points, std::size_t rows, std::span<const double> query, Metric metric,
                    double* out) {
    const std::size_t body = rows - rows % 4;
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    for (std::size_t r = 0; r < body; r += 4) {
        __m256d acc = _mm256_setzero_pd();
        for (std::size_t d = 0; d < query.size(); ++d) {
            const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(points + d * rows + r), _mm256_set1_pd(query[d]));
            if (metric == Metric::euclidean) {
                acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
            } else {
                acc = _mm256_add_pd(acc, _mm256_andnot_pd(sign_mask, diff));
            }
        }
        if (metric == Metric::euclidean) acc = _mm256_sqrt_pd(acc);
        _mm256_storeu_pd(out + r, acc);
    }
    for (std::size_t r = body; r < rows; ++r) {
        double acc = 0.0;
        for (std::size_t d = 0; d < query.size(); ++d) {
            const double diff = points[d * rows + r] - query[d];
            acc = acc + (metric == Metric::euclidean ? diff * diff : std::fabs(diff));
        }
        out[r] = metric == Metric::euclidean ? std::sqrt(acc) : acc;
    }
}

void weighted_scores_avx2(const double* probs, std::size_t graphs, std::size_t classes,
                          std::size_t instances, const double* weights, double* scores) {
    const std::size_t body = instances - instances % 4;
    for (std::size_t c = 0; c < classes; ++c) {
        double* acc_out = scores + c * instances;
        for (std::size_t i = 0; i < body; i += 4) {
            __m256d acc = _mm256_setzero_pd();
            for (std::size_t g = 0; g < graphs; ++g) {
                const __m256d p = _mm256_loadu_pd(probs + (g * classes + c) * instances + i);
                acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(weights[g]), p));
            }
            _mm256_storeu_pd(acc_out + i, acc);
        }
        for (std::size_t i = body; i < instances; ++i) {
            double acc = 0.0;
            for (std::size_t g = 0; g < graphs; ++g) {
                acc = acc + weights[g] * probs[(g * classes + c) * instances + i];
            }
            acc_out[i] = acc;
        }
    }
}

}  // namespace quipus::kernels::detail
