#include <cstdlib>
#include <string>

#include "swarmsafe/errors.hpp"
#include "swarmsafe/kernels.hpp"

namespace swarmsafe::kernels {

namespace {

constexpr KernelTable scalar_table{Backend::scalar, &scalar::distance_row, &scalar::gradient_row, &scalar::psi_row};

#if defined(__x86_64__) || defined(_M_X64)
constexpr KernelTable avx2_table{Backend::avx2, &avx2::distance_row, &avx2::gradient_row, &avx2::psi_row};
#endif

const KernelTable* initial_choice() {
    if (const char* env = std::getenv("SWARMSAFE_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") return &scalar_table;
        if (want == "avx2" && available(Backend::avx2)) return &table(Backend::avx2);
    }
    if (available(Backend::avx2)) return &table(Backend::avx2);
    return &scalar_table;
}

const KernelTable*& current() {
    static const KernelTable* t = initial_choice();
    return t;
}

} // namespace

std::string_view to_string(Backend b) { return b == Backend::scalar ? "scalar" : "avx2"; }

bool available(Backend b) {
    switch (b) {
    case Backend::scalar:
        return true;
    case Backend::avx2:
#if defined(__x86_64__) || defined(_M_X64)
        return __builtin_cpu_supports("avx2");
#else
        return false;
#endif
    }
    return false;
}

const KernelTable& table(Backend b) {
    if (!available(b)) throw Error("kernel backend '" + std::string(to_string(b)) + "' is not available");
#if defined(__x86_64__) || defined(_M_X64)
    if (b == Backend::avx2) return avx2_table;
#endif
    return scalar_table;
}

const KernelTable& active() { return *current(); }

void select(Backend b) { current() = &table(b); }

} // namespace swarmsafe::kernels
