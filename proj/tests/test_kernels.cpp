#include "doctest.h"

#include "riskctl/kernels.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

using namespace riskctl;

namespace {

// deterministic ad-hoc inputs for equivalence checks
std::vector<double> random_doubles(std::size_t n, double lo, double hi, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i]))
            return false;
    return true;
}

struct BackendGuard {
    kernels::Backend saved;
    BackendGuard() : saved(kernels::active_backend()) {}
    ~BackendGuard() { kernels::set_backend(saved); }
};

} // namespace

TEST_SUITE("kernels") {

TEST_CASE("philox reference vector") {
    // Salmon et al. known-answer test: counter = ffffffff^4, key = ffffffff^2
    std::uint32_t out[4];
    const std::uint64_t key_all_ones = 0xffffffffffffffffull;
    kernels::philox_block(key_all_ones, 0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu, out);
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);

    kernels::philox_block(0, 0, 0, 0, 0, out);
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
}

TEST_CASE("vexp and vlog match libm within 4 ulp") {
    auto xs = random_doubles(4096, -700.0, 700.0, 11);
    std::vector<double> got(xs.size());
    kernels::vexp(xs.data(), got.data(), xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double ref = std::exp(xs[i]);
        CHECK(std::abs(got[i] - ref) <= 4.0 * std::abs(ref) * std::numeric_limits<double>::epsilon());
    }

    auto ys = random_doubles(4096, 1e-12, 1e12, 12);
    ys.push_back(1e-300);
    ys.push_back(1e300);
    ys.push_back(1.0);
    got.assign(ys.size(), 0.0);
    kernels::vlog(ys.data(), got.data(), ys.size());
    for (std::size_t i = 0; i < ys.size(); ++i) {
        const double ref = std::log(ys[i]);
        const double tol = 4.0 * std::max(std::abs(ref), 1.0) * std::numeric_limits<double>::epsilon();
        CHECK(std::abs(got[i] - ref) <= tol);
    }

    double edge_in[3] = {0.0, -1.0, std::numeric_limits<double>::infinity()};
    double edge_out[3];
    kernels::vlog(edge_in, edge_out, 3);
    CHECK(edge_out[0] == -std::numeric_limits<double>::infinity());
    CHECK(std::isnan(edge_out[1]));
    CHECK(edge_out[2] == std::numeric_limits<double>::infinity());

    double u_edge[2] = {-710.0, 710.0};
    double e_edge[2];
    kernels::vexp(u_edge, e_edge, 2);
    CHECK(e_edge[0] == 0.0);
    CHECK(e_edge[1] == std::numeric_limits<double>::infinity());
}

TEST_CASE("normal icdf hits known quantiles") {
    // dyadic tail probes so 1-u is exact in double
    const double us[] = {0.5,  0.975, 0.025, 0.84134474606854293, 0x1p-20, 1.0 - 0x1p-20,
                         1e-10};
    const double zs[] = {0.0, 1.959963984540054, -1.959963984540054, 1.0,
                         -4.763001034267814, 4.763001034267814, -6.361340902404056};
    double got[7];
    kernels::vnorm_icdf(us, got, 7);
    for (int i = 0; i < 7; ++i) CHECK(got[i] == doctest::Approx(zs[i]).epsilon(1e-13));
}

TEST_CASE("fill_normals is order- and batch-invariant") {
    const std::uint64_t seed = 987654321;
    const std::size_t k = 2;
    std::vector<double> whole(100 * k);
    kernels::fill_normals(seed, 0, 100, /*step=*/7, k, whole.data());

    // same values when generated path-by-path
    for (std::size_t p = 0; p < 100; ++p) {
        double z[2];
        kernels::fill_normals(seed, p, 1, 7, k, z);
        CHECK(z[0] == whole[p * k]);
        CHECK(z[1] == whole[p * k + 1]);
    }

    // distinct steps/seeds give different draws
    std::vector<double> other(100 * k);
    kernels::fill_normals(seed, 0, 100, 8, k, other.data());
    CHECK_FALSE(bitwise_equal(whole, other));
    kernels::fill_normals(seed + 1, 0, 100, 7, k, other.data());
    CHECK_FALSE(bitwise_equal(whole, other));

    // odd k fills exactly k entries per path
    std::vector<double> odd(5 * 3, -1000.0);
    kernels::fill_normals(seed, 0, 5, 0, 3, odd.data());
    for (double v : odd) CHECK(v != -1000.0);
}

TEST_CASE("normal moments are sane") {
    const std::size_t n = 200000;
    std::vector<double> z(n * 1);
    kernels::fill_normals(42, 0, n, 0, 1, z.data());
    const double mean = kernels::reduce_sum(z.data(), n) / static_cast<double>(n);
    const double var = kernels::reduce_dot(z.data(), z.data(), n) / static_cast<double>(n);
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("scalar and avx2 arms agree bit for bit") {
    if (!kernels::avx2_supported()) return; // nothing to compare on this CPU
    BackendGuard guard;

    auto run_all = [](std::vector<double>& normals, std::vector<double>& exps,
                      std::vector<double>& logs, std::vector<double>& icdfs, double& s,
                      double& d) {
        const std::size_t n_paths = 777; // not a multiple of the SIMD width
        normals.assign(n_paths * 3, 0.0);
        kernels::fill_normals(31337, 5, n_paths, 2, 3, normals.data());

        auto xs = random_doubles(1023, -600.0, 600.0, 21);
        exps.assign(xs.size(), 0.0);
        kernels::vexp(xs.data(), exps.data(), xs.size());

        auto ys = random_doubles(1023, 1e-14, 1e14, 22);
        logs.assign(ys.size(), 0.0);
        kernels::vlog(ys.data(), logs.data(), ys.size());

        auto us = random_doubles(1023, 1e-15, 1.0 - 1e-15, 23);
        icdfs.assign(us.size(), 0.0);
        kernels::vnorm_icdf(us.data(), icdfs.data(), us.size());

        auto a = random_doubles(1001, -3.0, 3.0, 24);
        auto b = random_doubles(1001, -3.0, 3.0, 25);
        s = kernels::reduce_sum(a.data(), a.size());
        d = kernels::reduce_dot(a.data(), b.data(), a.size());
    };

    std::vector<double> n1, e1, l1, i1, n2, e2, l2, i2;
    double s1, d1, s2, d2;
    kernels::set_backend(kernels::Backend::scalar);
    run_all(n1, e1, l1, i1, s1, d1);
    kernels::set_backend(kernels::Backend::avx2);
    run_all(n2, e2, l2, i2, s2, d2);

    CHECK(bitwise_equal(n1, n2));
    CHECK(bitwise_equal(e1, e2));
    CHECK(bitwise_equal(l1, l2));
    CHECK(bitwise_equal(i1, i2));
    CHECK(std::bit_cast<std::uint64_t>(s1) == std::bit_cast<std::uint64_t>(s2));
    CHECK(std::bit_cast<std::uint64_t>(d1) == std::bit_cast<std::uint64_t>(d2));
}

TEST_CASE("reductions match a long-double reference") {
    auto a = random_doubles(5000, -1.0, 1.0, 31);
    auto b = random_doubles(5000, -1.0, 1.0, 32);
    long double rs = 0.0L, rd = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        rs += a[i];
        rd += static_cast<long double>(a[i]) * b[i];
    }
    CHECK(kernels::reduce_sum(a.data(), a.size()) ==
          doctest::Approx(static_cast<double>(rs)).epsilon(1e-12));
    CHECK(kernels::reduce_dot(a.data(), b.data(), a.size()) ==
          doctest::Approx(static_cast<double>(rd)).epsilon(1e-12));
}

} // TEST_SUITE
