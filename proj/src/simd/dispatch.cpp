#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"
#include "linscale/errors.hpp"

namespace linscale::simd {

namespace {

bool cpu_has(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::sse41:
#if defined(__x86_64__) || defined(__i386__)
            return __builtin_cpu_supports("sse4.1");
#else
            return false;
#endif
        case Backend::avx2:
#if defined(__x86_64__) || defined(__i386__)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::neon:
            return detail::neon_kernels() != nullptr;
    }
    return false;
}

const Kernels* table(Backend b) {
    switch (b) {
        case Backend::scalar: return &detail::scalar_kernels();
        case Backend::sse41: return detail::sse41_kernels();
        case Backend::avx2: return detail::avx2_kernels();
        case Backend::neon: return detail::neon_kernels();
    }
    return nullptr;
}

bool usable(Backend b) { return table(b) != nullptr && cpu_has(b); }

Backend pick_default() {
    if (const char* env = std::getenv("LINSCALE_SIMD")) {
        const std::string_view v(env);
        for (Backend b : {Backend::scalar, Backend::sse41, Backend::avx2, Backend::neon}) {
            if (v == backend_name(b) && usable(b)) return b;
        }
    }
    const auto all = available_backends();
    return all.back();
}

std::atomic<Backend>& current() {
    static std::atomic<Backend> b{pick_default()};
    return b;
}

}  // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::sse41: return "sse41";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "unknown";
}

std::vector<Backend> available_backends() {
    std::vector<Backend> out;
    for (Backend b : {Backend::scalar, Backend::sse41, Backend::avx2, Backend::neon}) {
        if (usable(b)) out.push_back(b);
    }
    return out;
}

const Kernels& kernels_for(Backend b) {
    if (!usable(b)) {
        throw Error(Stage::input, "UnsupportedBackend",
                    std::string("SIMD backend not available: ") + backend_name(b));
    }
    return *table(b);
}

const Kernels& kernels() { return *table(current().load(std::memory_order_relaxed)); }

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void force_backend(Backend b) {
    kernels_for(b);  // validates
    current().store(b, std::memory_order_relaxed);
}

}  // namespace linscale::simd
