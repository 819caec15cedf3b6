#include <catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include "modelavg/design.hpp"
#include "modelavg/errors.hpp"
#include "modelavg/experiments.hpp"
#include "oracles.hpp"

using namespace modelavg;
using Catch::Approx;

namespace {

DesignMatrix small_design() { return DesignMatrix({1, 1, 1}, {0, 1, 2}); }

std::vector<double> draw_vector(RandomStream& rng, std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

} // namespace

TEST_CASE("design stats on orthonormal columns", "[design]") {
    const auto s = compute_design_stats(DesignMatrix({1, 0}, {0, 1}), 1.0);
    CHECK(s.s11 == 1.0);
    CHECK(s.s22 == 1.0);
    CHECK(s.s12 == 0.0);
    CHECK(s.det == 1.0);
    CHECK(s.sigma_beta == 1.0);
}

TEST_CASE("design stats by hand arithmetic", "[design]") {
    const auto s = compute_design_stats(small_design(), 1.0);
    CHECK(s.s11 == 3.0);
    CHECK(s.s22 == 5.0);
    CHECK(s.s12 == 3.0);
    CHECK(s.det == 6.0);
    CHECK(s.sigma_beta == Approx(std::sqrt(3.0) / std::sqrt(6.0)).epsilon(1e-14));
    CHECK(s.sigma_beta == Approx(0.70711).margin(5e-6));
    CHECK(s.sigma_beta * s.sigma_beta * s.det == Approx(s.sigma * s.sigma * s.s11).epsilon(1e-14));
}

TEST_CASE("design errors", "[design]") {
    CHECK_THROWS_AS(compute_design_stats(DesignMatrix({1, 2}, {2, 4})), CollinearDesign);
    CHECK_THROWS_AS(DesignMatrix({0, 0}, {1, 2}), ZeroColumn);
    CHECK_THROWS_AS(DesignMatrix({1, 2}, {0, 0}), CollinearDesign);
    CHECK_THROWS_AS(DesignMatrix({1, 2, 3}, {1, 2}), InvalidArgument);
    CHECK_THROWS_AS(DesignMatrix({1}, {2}), InvalidArgument);
    // nearly proportional columns fall under the relative tolerance
    CHECK_THROWS_AS(compute_design_stats(DesignMatrix({1, 2, 3}, {2, 4, 6 + 1e-9})), CollinearDesign);
    CHECK_THROWS_AS(compute_design_stats(small_design(), 0.0), InvalidArgument);
}

TEST_CASE("fits on the three-point example", "[design]") {
    const Dataset data(small_design(), {1, 2, 3});
    const auto stats = compute_design_stats(data.design());
    const auto fit = fit_unrestricted(data, stats);
    CHECK(fit.alpha_u == Approx(1.0).margin(1e-14));
    CHECK(fit.beta_u == Approx(1.0).margin(1e-14));
    CHECK(fit_restricted(data, stats) == Approx(2.0).margin(1e-14));

    const auto ref = oracle::normal_equations({1, 1, 1}, {0, 1, 2}, {1, 2, 3});
    CHECK(ref.a == Approx(1.0).margin(1e-14));
    CHECK(ref.b == Approx(1.0).margin(1e-14));
}

TEST_CASE("restricted fit of a pure X1 response", "[design]") {
    const DesignMatrix d({1, 2, 3, 4}, {1, 0, 1, 0});
    const Dataset data(d, {2, 4, 6, 8});
    CHECK(fit_restricted(data, compute_design_stats(d)) == Approx(2.0).margin(1e-14));
}

TEST_CASE("unrestricted fit rejects a singular stats record", "[design]") {
    const Dataset data(small_design(), {1, 2, 3});
    DesignStats bad = compute_design_stats(data.design());
    bad.det = 0.0;
    CHECK_THROWS_AS(fit_unrestricted(data, bad), CollinearDesign);
}

TEST_CASE("noiseless responses are reproduced exactly", "[design]") {
    const DesignMatrix d({1, 1}, {0, 1});
    auto rng = RandomStream(1);
    const auto data = generate_response(d, {1.0, 2.0, 0.0}, rng);
    CHECK(data.y()[0] == 1.0);
    CHECK(data.y()[1] == 3.0);

    auto rng2 = RandomStream(9);
    const auto design = make_uniform_design(30, rng2);
    const auto stats = compute_design_stats(design);
    const auto clean = generate_response(design, {-0.7, 1.3, 0.0}, rng2);
    const auto fit = fit_unrestricted(clean, stats);
    CHECK(fit.alpha_u == Approx(-0.7).margin(1e-12));
    CHECK(fit.beta_u == Approx(1.3).margin(1e-12));
    double rss = 0.0;
    for (std::size_t i = 0; i < clean.size(); ++i) {
        const double r = clean.y()[i] - fit.alpha_u * design.x1()[i] - fit.beta_u * design.x2()[i];
        rss += r * r;
    }
    CHECK(rss < 1e-24);
}

TEST_CASE("same seed gives bit-identical responses", "[design]") {
    const auto design = frozen_design(5, 20);
    auto a = RandomStream::derive(77, {1, 2});
    auto b = RandomStream::derive(77, {1, 2});
    const auto ya = generate_response(design, {1, 0.3, 1}, a);
    const auto yb = generate_response(design, {1, 0.3, 1}, b);
    REQUIRE(ya.size() == yb.size());
    for (std::size_t i = 0; i < ya.size(); ++i) CHECK(ya.y()[i] == yb.y()[i]);
}

TEST_CASE("noise moments over 1e5 replicates", "[design][statistical]") {
    const DesignMatrix d({1, 1}, {0, 1});
    double sum = 0.0;
    double sum_sq = 0.0;
    const std::size_t reps = 100000;
    const RandomStream root(2024);
    for (std::size_t r = 0; r < reps; ++r) {
        auto rng = root.split(r);
        const double y1 = generate_response(d, {0.0, 0.0, 1.0}, rng).y()[0];
        sum += y1;
        sum_sq += y1 * y1;
    }
    const double mean = sum / reps;
    const double var = (sum_sq - reps * mean * mean) / (reps - 1);
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("closed forms agree with the normal-equation oracle", "[design][oracle]") {
    RandomStream root(31);
    for (std::size_t t = 0; t < 1000; ++t) {
        auto rng = root.split(t);
        const std::size_t n = 2 + rng.index(9);
        auto x1 = draw_vector(rng, n, -2, 2);
        auto x2 = draw_vector(rng, n, -2, 2);
        auto y = draw_vector(rng, n, -5, 5);
        const Dataset data(DesignMatrix(x1, x2), y);
        DesignStats stats;
        try {
            stats = compute_design_stats(data.design());
        } catch (const CollinearDesign&) {
            continue;
        }
        const auto fit = fit_unrestricted(data, stats);
        const auto ref = oracle::normal_equations(x1, x2, y);
        const double scale_a = std::max(1.0, std::abs(ref.a));
        const double scale_b = std::max(1.0, std::abs(ref.b));
        INFO("trial " << t << " n " << n);
        CHECK(std::abs(fit.alpha_u - ref.a) / scale_a < 1e-10);
        CHECK(std::abs(fit.beta_u - ref.b) / scale_b < 1e-10);
    }
}

TEST_CASE("restricted fit identity and orthogonal designs", "[design][property]") {
    RandomStream root(32);
    for (std::size_t t = 0; t < 2000; ++t) {
        auto rng = root.split(t);
        const std::size_t n = 3 + rng.index(60);
        const auto design = DesignMatrix(draw_vector(rng, n, -1, 3), draw_vector(rng, n, -1, 3));
        const Dataset data(design, draw_vector(rng, n, -4, 4));
        const auto stats = compute_design_stats(design);
        const auto fit = fit_unrestricted(data, stats);
        const double ar = fit_restricted(data, stats);
        const double rhs = fit.alpha_u + fit.beta_u * stats.s12 / stats.s11;
        CHECK(std::abs(ar - rhs) <= 1e-10 * std::max(1.0, std::abs(ar)));
    }
    // s12 = 0 exactly
    const DesignMatrix ortho({1, 1, 1, 1}, {-1.5, -0.5, 0.5, 1.5});
    const Dataset data(ortho, {0.3, -1.2, 2.2, 0.9});
    const auto stats = compute_design_stats(ortho);
    REQUIRE(stats.s12 == 0.0);
    CHECK(fit_restricted(data, stats) == Approx(fit_unrestricted(data, stats).alpha_u).margin(1e-14));
}

TEST_CASE("latent coordinates reproduce the fitted values", "[design][property]") {
    const RandomStream root(33);
    const TrueParams params{0.8, -0.4, 1.7};
    for (std::size_t t = 0; t < 200; ++t) {
        auto rng = root.split(t);
        const auto design = make_uniform_design(10 + rng.index(40), rng);
        const auto stats = compute_design_stats(design, params.sigma);
        const auto data = generate_response(design, params, rng);
        std::vector<double> e(design.size());
        for (std::size_t i = 0; i < e.size(); ++i) {
            e[i] = data.y()[i] - params.alpha * design.x1()[i] - params.beta * design.x2()[i];
        }
        const std::vector<double> x1(design.x1().begin(), design.x1().end());
        const std::vector<double> x2(design.x2().begin(), design.x2().end());
        const auto v = oracle::latent_coordinates(x1, x2, e, params.sigma);
        const double norm1 = std::sqrt(stats.s11);
        const double root_d = std::sqrt(stats.det);
        const double ar = params.alpha + params.beta * stats.s12 / stats.s11 + params.sigma * v.v1 / norm1;
        const double au = params.alpha + params.sigma * v.v1 / norm1 - params.sigma * stats.s12 * v.v2 / (norm1 * root_d);
        const double bu = params.beta + params.sigma * norm1 * v.v2 / root_d;
        const auto fit = fit_unrestricted(data, stats);
        CHECK(std::abs(fit_restricted(data, stats) - ar) < 1e-10);
        CHECK(std::abs(fit.alpha_u - au) < 1e-10);
        CHECK(std::abs(fit.beta_u - bu) < 1e-10);
    }
}

TEST_CASE("uniform design draws", "[design]") {
    RandomStream rng(4);
    const auto d2 = make_uniform_design(2, rng);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(d2.x1()[i] == 1.0);
        CHECK(d2.x2()[i] > 0.0);
        CHECK(d2.x2()[i] < 3.0);
    }
    CHECK(compute_design_stats(d2).det > 0.0);
    CHECK_THROWS_AS(make_uniform_design(1, rng), InvalidArgument);
}

TEST_CASE("shipped n = 50 design matches the default seed", "[design][golden]") {
    std::ifstream in(std::string(MODELAVG_TEST_DATA_DIR) + "/design_n50.csv");
    REQUIRE(in);
    const auto golden = read_design_csv(in);
    const auto design = frozen_design(20090101, 50);
    REQUIRE(golden.size() == 50);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(golden.x1()[i] == design.x1()[i]);
        CHECK(golden.x2()[i] == design.x2()[i]);
    }
    CHECK(compute_design_stats(golden).det > 0.0);
}

TEST_CASE("design csv round trip and errors", "[design][io]") {
    RandomStream rng(8);
    const auto design = make_uniform_design(7, rng);
    std::stringstream buf;
    write_design_csv(buf, design);
    const auto back = read_design_csv(buf);
    for (std::size_t i = 0; i < design.size(); ++i) CHECK(back.x2()[i] == design.x2()[i]);

    std::istringstream bad_header("a,b,c\n1,1,1\n");
    CHECK_THROWS_AS(read_design_csv(bad_header), InvalidArgument);
    std::istringstream bad_number("i,x1,x2\n1,1,0.5\n2,1,zz\n");
    CHECK_THROWS_WITH(read_design_csv(bad_number), Catch::Matchers::ContainsSubstring("line 3"));
}
