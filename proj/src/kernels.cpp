#include "quipus/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace quipus::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar, detail::distances_scalar, detail::weighted_scores_scalar};
#if defined(QUIPUS_WITH_AVX2)
constexpr KernelTable kAvx2{Isa::avx2, detail::distances_avx2, detail::weighted_scores_avx2};
#endif

const KernelTable* choose_default() noexcept {
    if (const char* env = std::getenv("QUIPUS_ISA"); env != nullptr && std::string(env) == "scalar") {
        return &kScalar;
    }
#if defined(QUIPUS_WITH_AVX2)
    if (isa_available(Isa::avx2)) return &kAvx2;
#endif
    return &kScalar;
}

std::atomic<const KernelTable*>& active_slot() noexcept {
    static std::atomic<const KernelTable*> slot{choose_default()};
    return slot;
}

}  // namespace

std::string_view to_string(Isa isa) {
    return isa == Isa::avx2 ? "avx2" : "scalar";
}

std::string_view to_string(Metric m) {
    return m == Metric::manhattan ? "manhattan" : "euclidean";
}

bool isa_available(Isa isa) noexcept {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if defined(QUIPUS_WITH_AVX2)
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& kernels_for(Isa isa) {
    if (!isa_available(isa)) {
        throw std::runtime_error("instruction set not available: " + std::string(to_string(isa)));
    }
#if defined(QUIPUS_WITH_AVX2)
    if (isa == Isa::avx2) return kAvx2;
#endif
    return kScalar;
}

const KernelTable& active() noexcept { return *active_slot().load(std::memory_order_relaxed); }

void set_active(Isa isa) { active_slot().store(&kernels_for(isa), std::memory_order_relaxed); }

}  // namespace quipus::kernels
