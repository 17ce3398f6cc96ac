#pragma once

#include "quipus/kernels.hpp"

namespace quipus::kernels::detail {

void distances_scalar(const double* points, std::size_t rows, std::span<const double> query, Metric metric,
                      double* out);
void weighted_scores_scalar(const double* probs, std::size_t graphs, std::size_t classes,
                            std::size_t instances, const double* weights, double* scores);

#if defined(QUIPUS_WITH_AVX2)
void distances_avx2(const double* points, std::size_t rows, std::span<const double> query, Metric metric,
                    double* out);
void weighted_scores_avx2(const double* probs, std::size_t graphs, std::size_t classes,
                          std::size_t instances, const double* weights, double* scores);
#endif

}  // namespace quipus::kernels::detail
