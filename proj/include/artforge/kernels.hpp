#pragma once

#include <cstddef>
#include <string_view>

namespace artforge::kern {

// Numeric inner loops used by the statistics, standardization and SMOTE
// code. Every kernel has a scalar reference implementation and, on x86-64,
// an AVX2 variant. The active lane is picked once at startup from CPUID and
// can be overridden with the ARTFORGE_SIMD environment variable
// ("scalar" | "avx2") or programmatically via set_lane().
//
// Element-wise kernels (accumulate, scale_shift, lerp) produce bit-identical
// results on every lane. Reduction kernels (sum, sum_sq_dev,
// squared_distance) reassociate additions, so lanes may differ in the last
// few ulps; min/max is exact on every lane.
enum class Lane { scalar, avx2 };

Lane active_lane();
void set_lane(Lane lane);          // throws ConfigError if unsupported here
bool lane_supported(Lane lane);
std::string_view lane_name(Lane lane);

double sum(const double* x, std::size_t n);
void minmax(const double* x, std::size_t n, double& mn, double& mx);
double sum_sq_dev(const double* x, std::size_t n, double mean);
double squared_distance(const double* a, const double* b, std::size_t n);

// acc[i] += x[i]
void accumulate(double* acc, const double* x, std::size_t n);
// x[i] = (x[i] - shift[i]) * scale[i]
void scale_shift(double* x, const double* shift, const double* scale, std::size_t n);
// dst[i] = a[i] + t * (b[i] - a[i])
void lerp(double* dst, const double* a, const double* b, double t, std::size_t n);

// Direct entry points for a specific lane; used by the equivalence tests.
namespace scalar {
double sum(const double* x, std::size_t n);
void minmax(const double* x, std::size_t n, double& mn, double& mx);
double sum_sq_dev(const double* x, std::size_t n, double mean);
double squared_distance(const double* a, const double* b, std::size_t n);
void accumulate(double* acc, const double* x, std::size_t n);
void scale_shift(double* x, const double* shift, const double* scale, std::size_t n);
void lerp(double* dst, const double* a, const double* b, double t, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define ARTFORGE_HAVE_AVX2_LANE 1
namespace avx2 {
double sum(const double* x, std::size_t n);
void minmax(const double* x, std::size_t n, double& mn, double& mx);
double sum_sq_dev(const double* x, std::size_t n, double mean);
double squared_distance(const double* a, const double* b, std::size_t n);
void accumulate(double* acc, const double* x, std::size_t n);
void scale_shift(double* x, const double* shift, const double* scale, std::size_t n);
void lerp(double* dst, const double* a, const double* b, double t, std::size_t n);
}  // namespace avx2
#endif

}  // namespace artforge::kern
