#include <doctest.h>

#include <cstring>
#include <random>

#include "oracles.hpp"
#include "subaudit/fuzzy/engine.hpp"
#include "subaudit/fuzzy/kernels.hpp"

using namespace subaudit::fuzzy;

namespace {

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar kernels against direct formulas") {
    const auto& k = kernels::scalar();
    const auto grid = Universe{-100, 100, 2001}.grid();
    std::vector<double> out(grid.size());
    k.sample_trapezoid(-10, 0, 0, 10, grid, out);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(out[i] == doctest::Approx(oracle::trapezoid({-10, 0, 0, 10}, grid[i])));
    std::vector<double> acc(grid.size(), 0.2);
    k.clip_max(out, 0.5, acc);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(acc[i] == std::max(0.2, std::min(out[i], 0.5)));
}

TEST_CASE("AVX2 kernels match the scalar reference") {
    const auto* v = kernels::avx2();
    if (!v) {
        MESSAGE("AVX2 not available on this CPU; equivalence not exercised");
        return;
    }
    const auto& s = kernels::scalar();
    std::mt19937_64 rng(1234);
    for (std::size_t n : {3u, 4u, 5u, 7u, 8u, 9u, 101u, 2001u, 4001u}) {
        const auto grid = Universe{-100, 100, n}.grid();
        for (int trial = 0; trial < 40; ++trial) {
            const auto mf = oracle::random_mf(rng, -100, 100, 1.0);
            const auto& p = mf.corners();
            std::vector<double> a(n), b(n);
            s.sample_trapezoid(p[0], p[1], p[2], p[3], grid, a);
            v->sample_trapezoid(p[0], p[1], p[2], p[3], grid, b);
            CHECK(bit_equal(a, b));

            const double h = static_cast<double>(rng() % 1001) / 1000.0;
            std::vector<double> acc_s(n), acc_v(n);
            for (std::size_t i = 0; i < n; ++i) acc_s[i] = acc_v[i] = static_cast<double>(rng() % 1000) / 1000.0;
            s.clip_max(a, h, acc_s);
            v->clip_max(b, h, acc_v);
            CHECK(bit_equal(acc_s, acc_v));

            const auto ms = s.centroid_moments(grid, acc_s);
            const auto mv = v->centroid_moments(grid, acc_v);
            CHECK(mv.mass == doctest::Approx(ms.mass).epsilon(1e-13));
            CHECK(std::abs(mv.first - ms.first) <= 1e-12 * std::max(1.0, std::abs(ms.mass) * 100.0));
        }
    }
}

TEST_CASE("engines on both kernel tables agree") {
    const auto* v = kernels::avx2();
    if (!v) return;
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const auto sys = oracle::random_system(rng, true);
        const Engine es(sys.variables, sys.rules, kernels::scalar());
        const Engine ev(sys.variables, sys.rules, *v);
        for (int k = 0; k < 5; ++k) {
            const auto x = oracle::random_inputs(rng, sys.variables);
            const auto is = es.infer(x), iv = ev.infer(x);
            CHECK(bit_equal(is.curve, iv.curve));
            CHECK(std::abs(es.defuzzify(is.curve) - ev.defuzzify(iv.curve)) < 1e-9);
        }
    }
}

TEST_CASE("active table honours SUBAUDIT_KERNELS") {
    const auto& a = kernels::active();
    CHECK(std::string(a.name).size() > 0);
    if (const char* env = std::getenv("SUBAUDIT_KERNELS"); env && std::string(env) == "scalar") {
        CHECK(&a == &kernels::scalar());
    }
}
