#include <cstdlib>
#include <string_view>

#include "subaudit/fuzzy/kernels.hpp"

namespace subaudit::fuzzy::kernels {

const KernelTable* avx2_table();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

}  // namespace

const KernelTable* avx2() {
    static const KernelTable* table = cpu_has_avx2() ? avx2_table() : nullptr;
    return table;
}

const KernelTable& active() {
    static const KernelTable& chosen = [] () -> const KernelTable& {
        const char* env = std::getenv("SUBAUDIT_KERNELS");
        if (env && std::string_view(env) == "scalar") return scalar();
        if (const KernelTable* t = avx2()) return *t;
        return scalar();
    }();
    return chosen;
}

}  // namespace subaudit::fuzzy::kernels
