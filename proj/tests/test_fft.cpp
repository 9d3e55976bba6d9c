#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "abtube/fft.hpp"
#include "test_oracles.hpp"

using abtube::cplx;

namespace {

std::vector<cplx> random_signal(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<cplx> x(n);
    for (cplx& v : x) v = cplx(u(rng), u(rng));
    return x;
}

} // namespace

TEST_CASE("forward transform matches the slow reference DFT", "[fft]") {
    const std::size_t n = 64;
    const std::vector<cplx> x = random_signal(n, 17);
    std::vector<cplx> fast = x;
    abtube::FftPlan plan(n);
    plan.forward(fast.data());
    const std::vector<cplx> slow = oracles::naive_dft(x);
    for (std::size_t i = 0; i < n; ++i)
        REQUIRE(std::abs(fast[i] - slow[i]) < 1e-12 * static_cast<double>(n));
}

TEST_CASE("inverse undoes forward to round-off", "[fft]") {
    const std::size_t n = 1024;
    const std::vector<cplx> x = random_signal(n, 23);
    std::vector<cplx> y = x;
    abtube::FftPlan plan(n);
    plan.forward(y.data());
    plan.inverse(y.data());
    for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(y[i] - x[i]) < 1e-13);
}

TEST_CASE("round trip preserves the L2 norm to 1e-12", "[fft]") {
    const std::size_t n = 512;
    std::vector<cplx> x = random_signal(n, 5);
    double before = 0.0;
    for (const cplx& v : x) before += std::norm(v);
    abtube::FftPlan plan(n);
    plan.forward(x.data());
    double spectral = 0.0;
    for (const cplx& v : x) spectral += std::norm(v);
    // Parseval with the unnormalized forward: sum |X|^2 = n sum |x|^2.
    REQUIRE(std::abs(spectral / static_cast<double>(n) - before) < 1e-12 * before);
    plan.inverse(x.data());
    double after = 0.0;
    for (const cplx& v : x) after += std::norm(v);
    REQUIRE(std::abs(after - before) < 1e-12 * before);
}

TEST_CASE("non power-of-two lengths are rejected", "[fft]") {
    REQUIRE_THROWS_AS(abtube::FftPlan(96), abtube::config_error);
    REQUIRE_THROWS_AS(abtube::FftPlan(0), abtube::config_error);
    REQUIRE_THROWS_AS(abtube::FftPlan(1), abtube::config_error);
}

TEST_CASE("2D transform separates into per-axis references", "[fft]") {
    const std::size_t n = 16;
    const std::vector<cplx> x = random_signal(n * n, 97);
    std::vector<cplx> fast = x;
    abtube::FftPlan2d plan(n);
    plan.forward(fast.data());

    // Slow reference: DFT along rows, then along columns.
    std::vector<cplx> slow(n * n);
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<cplx> row(x.begin() + r * n, x.begin() + (r + 1) * n);
        const std::vector<cplx> t = oracles::naive_dft(row);
        for (std::size_t c = 0; c < n; ++c) slow[r * n + c] = t[c];
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<cplx> col(n);
        for (std::size_t r = 0; r < n; ++r) col[r] = slow[r * n + c];
        const std::vector<cplx> t = oracles::naive_dft(col);
        for (std::size_t r = 0; r < n; ++r) slow[r * n + c] = t[r];
    }
    for (std::size_t i = 0; i < n * n; ++i)
        REQUIRE(std::abs(fast[i] - slow[i]) < 1e-11);

    plan.inverse(fast.data());
    for (std::size_t i = 0; i < n * n; ++i) REQUIRE(std::abs(fast[i] - x[i]) < 1e-13);
}
