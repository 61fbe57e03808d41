#include "gps/kernels.hpp"

namespace gps::kernels {

namespace {

struct Choice {
    hecke_fn fn;
    const char* name;
};

Choice pick() {
#if defined(__x86_64__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return {hecke_power_sums_avx2, "avx2"};
    }
#endif
    return {hecke_power_sums_scalar, "scalar"};
}

const Choice& choice() {
    static Choice c = pick();
    return c;
}

}  // namespace

hecke_fn hecke_power_sums() { return choice().fn; }
const char* active_kernel_name() { return choice().name; }

}  // namespace gps::kernels
