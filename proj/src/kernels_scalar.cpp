#include "artforge/kernels.hpp"

#include <limits>

namespace artforge::kern::scalar {

double sum(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
}

void minmax(const double* x, std::size_t n, double& mn, double& mx) {
    mn = std::numeric_limits<double>::infinity();
    mx = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] < mn) mn = x[i];
        if (x[i] > mx) mx = x[i];
    }
}

double sum_sq_dev(const double* x, std::size_t n, double mean) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        s += d * d;
    }
    return s;
}

double squared_distance(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

void accumulate(double* acc, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += x[i];
}

void scale_shift(double* x, const double* shift, const double* scale, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = (x[i] - shift[i]) * scale[i];
}

void lerp(double* dst, const double* a, const double* b, double t, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] + t * (b[i] - a[i]);
}

}  // namespace artforge::kern::scalar
