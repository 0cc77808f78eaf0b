#include <atomic>
#include <cstdlib>
#include <string>

#include "fjet/error.hpp"
#include "fjet/kernels.hpp"

namespace fjet::kernels {

std::string_view to_string(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
    }
    return "unknown";
}

bool available(Isa isa) {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!available(isa)) {
        throw ConfigError("kernel variant '" + std::string(to_string(isa)) +
                          "' is not supported on this CPU");
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::Avx2) return detail_impl::avx2_table();
#endif
    return detail_impl::scalar_table();
}

namespace {

const KernelTable& select() {
    const char* env = std::getenv("FJET_SIMD");
    if (env != nullptr) {
        const std::string want(env);
        if (want == "scalar") return table(Isa::Scalar);
        if (want == "avx2" && available(Isa::Avx2)) return table(Isa::Avx2);
    }
    return available(Isa::Avx2) ? table(Isa::Avx2) : table(Isa::Scalar);
}

std::atomic<const KernelTable*>& slot() {
    static std::atomic<const KernelTable*> chosen{&select()};
    return chosen;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void set_active(Isa isa) { slot().store(&table(isa), std::memory_order_release); }

}  // namespace fjet::kernels
