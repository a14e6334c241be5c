#include "subaudit/fuzzy/kernels.hpp"

#include <algorithm>

namespace subaudit::fuzzy::kernels {

namespace {

void sample_trapezoid(double a, double b, double c, double d, std::span<const double> xs, std::span<double> out) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        double mu = 0.0;
        if (x >= b && x <= c) mu = 1.0;
        else if (x > a && x < b) mu = (x - a) / (b - a);
        else if (x > c && x < d) mu = (d - x) / (d - c);
        out[i] = mu;
    }
}

void clip_max(std::span<const double> term, double strength, std::span<double> acc) {
    for (std::size_t i = 0; i < term.size(); ++i) acc[i] = std::max(acc[i], std::min(term[i], strength));
}

Moments centroid_moments(std::span<const double> xs, std::span<const double> mu) {
    const std::size_t n = xs.size();
    Moments m;
    if (n == 0) return m;
    if (n == 1) return {xs[0] * mu[0], mu[0]};
    for (std::size_t i = 1; i + 1 < n; ++i) {
        m.first += xs[i] * mu[i];
        m.mass += mu[i];
    }
    m.first += 0.5 * (xs[0] * mu[0] + xs[n - 1] * mu[n - 1]);
    m.mass += 0.5 * (mu[0] + mu[n - 1]);
    return m;
}

}  // namespace

const KernelTable& scalar() {
    static const KernelTable table{"scalar", &sample_trapezoid, &clip_max, &centroid_moments};
    return table;
}

}  // namespace subaudit::fuzzy::kernels
