#pragma once

// Grid kernels behind the Mamdani engine. Every kernel has a scalar
// reference; SIMD variants must match it bit-for-bit for sampling and
// aggregation, and to rounding for the centroid sums.

#include <cstddef>
#include <span>

namespace subaudit::fuzzy::kernels {

/// Trapezoid-rule moments of a curve sampled on a uniform grid (the step
/// cancels in the centroid, so it is left out).
struct Moments {
    double first = 0.0;  // sum w_i x_i mu_i
    double mass = 0.0;   // sum w_i mu_i
};

struct KernelTable {
    const char* name;
    /// out[i] = trapezoid(a, b, c, d) at xs[i].
    void (*sample_trapezoid)(double a, double b, double c, double d, std::span<const double> xs,
                             std::span<double> out);
    /// acc[i] = max(acc[i], min(term[i], strength)).
    void (*clip_max)(std::span<const double> term, double strength, std::span<double> acc);
    Moments (*centroid_moments)(std::span<const double> xs, std::span<const double> mu);
};

const KernelTable& scalar();
/// nullptr when the build has no AVX2 variant or the CPU lacks AVX2/FMA.
const KernelTable* avx2();
/// AVX2 when available, unless SUBAUDIT_KERNELS=scalar is set in the environment.
const KernelTable& active();

}  // namespace subaudit::fuzzy::kernels
