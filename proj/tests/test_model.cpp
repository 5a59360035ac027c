#include "doctest.h"

#include "riskctl/errors.hpp"
#include "riskctl/model.hpp"

#include <cmath>
#include <random>

using namespace riskctl;
using Eigen::VectorXd;

namespace {

VectorXd vec2(double a, double b) {
    VectorXd v(2);
    v << a, b;
    return v;
}

MatrixField const_matrix(std::vector<double> entries) {
    return [entries = std::move(entries)](std::span<const double>, double, std::span<double> out) {
        for (std::size_t i = 0; i < entries.size(); ++i) out[i] = entries[i];
    };
}

VectorField zero_vector() {
    return [](std::span<const double>, double, std::span<double> out) {
        for (auto& v : out) v = 0.0;
    };
}

SdeModel diag_model(int n, std::vector<double> g_diag, std::vector<double> sigma_diag, int l = 0) {
    SdeModel m;
    m.state_dim = n;
    m.control_dim = n - l;
    m.noise_dim = n - l;
    m.uncontrolled_dim = l;
    m.drift = zero_vector();
    m.control_matrix = [=](std::span<const double>, double, std::span<double> out) {
        for (auto& v : out) v = 0.0;
        for (int i = l; i < n; ++i) out[static_cast<std::size_t>(i) * (n - l) + (i - l)] = g_diag[static_cast<std::size_t>(i - l)];
    };
    m.noise_matrix = [=](std::span<const double>, double, std::span<double> out) {
        for (auto& v : out) v = 0.0;
        for (int i = l; i < n; ++i) out[static_cast<std::size_t>(i) * (n - l) + (i - l)] = sigma_diag[static_cast<std::size_t>(i - l)];
    };
    return m;
}

CostSpec unit_cost(int m, double eta = 0.0) {
    CostSpec c;
    c.terminal = [](std::span<const double>, double) { return 0.0; };
    c.running = [](std::span<const double>, double) { return 0.0; };
    std::vector<double> r(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) r[static_cast<std::size_t>(i) * m + i] = 1.0;
    c.control_weight = const_matrix(std::move(r));
    c.eta = eta;
    return c;
}

std::vector<std::pair<VectorXd, double>> unit_probes(int n) {
    std::vector<std::pair<VectorXd, double>> p;
    p.emplace_back(VectorXd::Zero(n), 0.0);
    p.emplace_back(VectorXd::Constant(n, 0.3), 1.0);
    return p;
}

} // namespace

TEST_SUITE("model") {

TEST_CASE("verify_lambda identity case") {
    auto m = diag_model(2, {1.0, 1.0}, {0.1, 0.1});
    auto c = unit_cost(2);
    CHECK(verify_lambda(m, c, unit_probes(2)) == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("verify_lambda partitioned case") {
    // g = [0, 1]^T, sigma = [0, 0.1]^T, R = [1], l = 1
    auto m = diag_model(2, {1.0}, {0.1}, /*l=*/1);
    auto c = unit_cost(1);
    CHECK(verify_lambda(m, c, unit_probes(2)) == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("verify_lambda incompatible diffusion") {
    auto m = diag_model(2, {1.0, 1.0}, {0.1, 0.2});
    auto c = unit_cost(2);
    CHECK_THROWS_AS(verify_lambda(m, c, unit_probes(2)), NoCompatibleLambda);
}

TEST_CASE("verify_lambda scaling invariance") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.2, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const double s = dist(rng);
        const double c_scale = dist(rng);
        auto base = diag_model(2, {1.3, 1.3}, {s, s});
        auto scaled = diag_model(2, {1.3, 1.3}, {c_scale * s, c_scale * s});
        auto cost = unit_cost(2);
        const double l0 = verify_lambda(base, cost, unit_probes(2));
        const double l1 = verify_lambda(scaled, cost, unit_probes(2));
        CHECK(l1 == doctest::Approx(c_scale * c_scale * l0).epsilon(1e-10));
    }
}

TEST_CASE("verify_lambda consistency across probe points") {
    // state-dependent sigma breaks the single global constant
    auto m = diag_model(2, {1.0, 1.0}, {0.1, 0.1});
    m.noise_matrix = [](std::span<const double> x, double, std::span<double> out) {
        const double s = 0.1 * (1.0 + x[0]);
        out[0] = s; out[1] = 0.0; out[2] = 0.0; out[3] = s;
    };
    auto c = unit_cost(2);
    CHECK_THROWS_AS(verify_lambda(m, c, unit_probes(2)), NoCompatibleLambda);
}

TEST_CASE("safe set classification partitions the plane") {
    auto set = SafeSet::annulus(vec2(-1.0, -1.0), vec2(1.0, 1.0), vec2(0.2, 0.2),
                                vec2(0.6, 0.6), 1e-9);
    CHECK(set.classify(std::vector<double>{0.0, 0.0}) == Region::interior);
    CHECK(set.classify(std::vector<double>{1.0, 0.3}) == Region::boundary);
    CHECK(set.classify(std::vector<double>{0.2, 0.4}) == Region::boundary);
    CHECK(set.classify(std::vector<double>{0.4, 0.4}) == Region::exterior);  // obstacle
    CHECK(set.classify(std::vector<double>{1.5, 0.0}) == Region::exterior);

    // the three regions partition space on a sample grid
    for (double x = -1.3; x <= 1.3; x += 0.09) {
        for (double y = -1.3; y <= 1.3; y += 0.09) {
            const Region r = set.classify(std::vector<double>{x, y});
            CHECK((r == Region::interior || r == Region::boundary || r == Region::exterior));
        }
    }
}

TEST_CASE("annulus boundary distance is exact") {
    auto set = SafeSet::annulus(vec2(-1.0, -1.0), vec2(1.0, 1.0), vec2(0.2, 0.2),
                                vec2(0.6, 0.6), 0.0);
    CHECK(set.distance_to_boundary(std::vector<double>{-0.9, 0.0}) == doctest::Approx(0.1));
    CHECK(set.distance_to_boundary(std::vector<double>{0.0, 0.0}) == doctest::Approx(0.2));
    // diagonal from an obstacle corner
    CHECK(set.distance_to_boundary(std::vector<double>{0.1, 0.1}) ==
          doctest::Approx(std::sqrt(0.02)));
    CHECK(set.distance_to_boundary(std::vector<double>{1.0, 0.0}) == doctest::Approx(0.0));
}

TEST_CASE("clamp_to_closure projects onto the boundary") {
    auto set = SafeSet::annulus(vec2(-1.0, -1.0), vec2(1.0, 1.0), vec2(0.2, 0.2),
                                vec2(0.6, 0.6), 0.0);
    const std::vector<double> prev{0.0, 0.0};
    auto outside = set.clamp_to_closure(std::vector<double>{1.4, 0.5}, prev);
    CHECK(outside[0] == doctest::Approx(1.0));
    CHECK(outside[1] == doctest::Approx(0.5));
    auto in_obstacle = set.clamp_to_closure(std::vector<double>{0.25, 0.4}, prev);
    CHECK(in_obstacle[0] == doctest::Approx(0.2));
    CHECK(in_obstacle[1] == doctest::Approx(0.4));
}

TEST_CASE("phi indicator and smooth forms") {
    auto set = SafeSet::annulus(vec2(-1.0, -1.0), vec2(1.0, 1.0), std::nullopt, std::nullopt, 1e-9);
    CostSpec cost = unit_cost(2, /*eta=*/0.7);
    cost.terminal = [](std::span<const double> x, double) { return x[0] * x[0] + x[1] * x[1]; };
    cost.bump_delta = 0.1;

    const std::vector<double> inner{0.3, -0.2};
    const std::vector<double> edge{1.0, 0.25};
    CHECK(phi(inner, cost, set, false) == doctest::Approx(0.13));
    CHECK(phi(edge, cost, set, false) == doctest::Approx(0.7));
    // far enough from the boundary the bump is exactly 1
    CHECK(phi(inner, cost, set, true) == doctest::Approx(0.13).epsilon(0.0));
    CHECK_THROWS_AS(phi(std::vector<double>{2.0, 0.0}, cost, set, false), OutsideDomain);

    // smooth value blends between psi and eta within delta of the boundary
    const std::vector<double> near{0.97, 0.0};
    const double v = phi(near, cost, set, true);
    const double psi_near = 0.97 * 0.97;
    CHECK(v > std::min(psi_near, cost.eta));
    CHECK(v < std::max(psi_near, cost.eta));
}

TEST_CASE("phi smooth converges pointwise to the indicator as delta -> 0") {
    auto set = SafeSet::annulus(vec2(-1.0, -1.0), vec2(1.0, 1.0), std::nullopt, std::nullopt, 1e-12);
    CostSpec cost = unit_cost(2, 0.5);
    cost.terminal = [](std::span<const double> x, double) { return x[0] * x[0]; };
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> dist(-0.999, 0.999);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> x{dist(rng), dist(rng)};
        const double sharp = phi(x, cost, set, false);
        double prev_gap = std::numeric_limits<double>::infinity();
        for (double delta : {0.3, 0.1, 0.01, 1e-4}) {
            cost.bump_delta = delta;
            const double gap = std::abs(phi(x, cost, set, true) - sharp);
            CHECK(gap <= prev_gap + 1e-15);
            prev_gap = gap;
        }
        CHECK(prev_gap <= 1e-12);
    }
}

TEST_CASE("phi_tilde equals phi under the risk substitution") {
    auto set = SafeSet::annulus(vec2(-1.0, -1.0), vec2(1.0, 1.0), vec2(0.1, 0.1),
                                vec2(0.5, 0.5), 1e-9);
    CostSpec riskcost = unit_cost(2, /*eta=*/1.0);
    riskcost.terminal = [](std::span<const double>, double) { return 0.0; };

    CHECK(phi_tilde(std::vector<double>{-0.5, -0.5}, set, false) == 0.0);
    CHECK(phi_tilde(std::vector<double>{1.0, 0.0}, set, false) == 1.0);

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(-0.99, 0.99);
    int checked = 0;
    while (checked < 40) {
        const std::vector<double> x{dist(rng), dist(rng)};
        if (set.classify(x) == Region::exterior) continue;
        ++checked;
        for (bool smooth : {false, true}) {
            riskcost.bump_delta = 0.05;
            CHECK(phi_tilde(x, set, smooth, 0.05) == phi(x, riskcost, set, smooth));
        }
    }

    // within delta of the boundary the smooth value lies strictly in (0,1)
    const std::vector<double> near{0.98, 0.0};
    const double v = phi_tilde(near, set, true, 0.1);
    CHECK(v > 0.0);
    CHECK(v < 1.0);
}

} // TEST_SUITE
