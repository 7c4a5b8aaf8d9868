#include "artforge/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "artforge/errors.hpp"

namespace artforge::kern {

namespace {

bool cpu_has_avx2() {
#ifdef ARTFORGE_HAVE_AVX2_LANE
    return __builtin_cpu_supports("avx2") != 0;
#else
    return false;
#endif
}

Lane detect_lane() {
    if (const char* env = std::getenv("ARTFORGE_SIMD")) {
        const std::string v(env);
        if (v == "scalar") return Lane::scalar;
        if (v == "avx2") {
            if (!cpu_has_avx2())
                throw ConfigError("ARTFORGE_SIMD=avx2 but the CPU does not support AVX2");
            return Lane::avx2;
        }
        throw ConfigError("ARTFORGE_SIMD must be 'scalar' or 'avx2', got '" + v + "'");
    }
    return cpu_has_avx2() ? Lane::avx2 : Lane::scalar;
}

std::atomic<Lane>& lane_slot() {
    static std::atomic<Lane> lane{detect_lane()};
    return lane;
}

}  // namespace

Lane active_lane() { return lane_slot().load(std::memory_order_relaxed); }

bool lane_supported(Lane lane) {
    return lane == Lane::scalar || (lane == Lane::avx2 && cpu_has_avx2());
}

void set_lane(Lane lane) {
    if (!lane_supported(lane))
        throw ConfigError("requested SIMD lane is not supported on this CPU");
    lane_slot().store(lane, std::memory_order_relaxed);
}

std::string_view lane_name(Lane lane) {
    return lane == Lane::avx2 ? "avx2" : "scalar";
}

#ifdef ARTFORGE_HAVE_AVX2_LANE
#define ARTFORGE_DISPATCH(call) \
    return active_lane() == Lane::avx2 ? avx2::call : scalar::call
#define ARTFORGE_DISPATCH_VOID(call)   \
    if (active_lane() == Lane::avx2) { \
        avx2::call;                    \
    } else {                           \
        scalar::call;                  \
    }
#else
#define ARTFORGE_DISPATCH(call) return scalar::call
#define ARTFORGE_DISPATCH_VOID(call) scalar::call
#endif

double sum(const double* x, std::size_t n) { ARTFORGE_DISPATCH(sum(x, n)); }

void minmax(const double* x, std::size_t n, double& mn, double& mx) {
    ARTFORGE_DISPATCH_VOID(minmax(x, n, mn, mx));
}

double sum_sq_dev(const double* x, std::size_t n, double mean) {
    ARTFORGE_DISPATCH(sum_sq_dev(x, n, mean));
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    ARTFORGE_DISPATCH(squared_distance(a, b, n));
}

void accumulate(double* acc, const double* x, std::size_t n) {
    ARTFORGE_DISPATCH_VOID(accumulate(acc, x, n));
}

void scale_shift(double* x, const double* shift, const double* scale, std::size_t n) {
    ARTFORGE_DISPATCH_VOID(scale_shift(x, shift, scale, n));
}

void lerp(double* dst, const double* a, const double* b, double t, std::size_t n) {
    ARTFORGE_DISPATCH_VOID(lerp(dst, a, b, t, n));
}

#undef ARTFORGE_DISPATCH
#undef ARTFORGE_DISPATCH_VOID

}  // namespace artforge::kern
