#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "roughvar/errors.hpp"
#include "roughvar/tensor.hpp"

using namespace roughvar;

namespace {

TensorElement level_one(std::vector<double> v, int level) {
    std::vector<std::vector<double>> levels{v};
    std::size_t size = v.size();
    for (int k = 2; k <= level; ++k) {
        size *= v.size();
        levels.emplace_back(size, 0.0);
    }
    return TensorElement::from_levels(static_cast<int>(v.size()), levels);
}

double max_word_difference(const oracle::WordTensor& a, const TensorElement& g) {
    const auto b = oracle::to_words(g);
    double m = 0.0;
    for (const auto& [w, c] : b) m = std::max(m, std::abs(c - a.at(w)));
    return m;
}

}  // namespace

TEST_CASE("identity is neutral for the product") {
    std::mt19937_64 rng(1);
    const auto g = oracle::random_element(3, 3, rng);
    CHECK(multiply(TensorElement::identity(3, 3), g) == g);
    CHECK(multiply(g, TensorElement::identity(3, 3)) == g);
    CHECK(g.coefficients(0)[0] == 1.0);
}

TEST_CASE("product of two level-one elements has the single cross term") {
    const auto g = level_one({1.0, 0.0}, 2);
    const auto h = level_one({0.0, 1.0}, 2);
    const auto gh = multiply(g, h);
    CHECK(gh({0}) == 1.0);
    CHECK(gh({1}) == 1.0);
    CHECK(gh({0, 0}) == 0.0);
    CHECK(gh({0, 1}) == 1.0);
    CHECK(gh({1, 0}) == 0.0);
    CHECK(gh({1, 1}) == 0.0);
}

TEST_CASE("product matches the word-indexed oracle and is associative") {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = oracle::random_element(2, 3, rng);
        const auto b = oracle::random_element(2, 3, rng);
        const auto c = oracle::random_element(2, 3, rng);
        const auto ab = multiply(a, b);
        CHECK(max_word_difference(oracle::product(oracle::to_words(a), oracle::to_words(b), 3), ab) < 1e-13);
        CHECK(max_abs_difference(multiply(ab, c), multiply(a, multiply(b, c))) < 1e-12);
    }
}

TEST_CASE("mismatched shapes are rejected") {
    CHECK_THROWS_AS(multiply(TensorElement(2, 2), TensorElement(3, 2)), DimensionError);
    CHECK_THROWS_AS(multiply(TensorElement(2, 2), TensorElement(2, 3)), DimensionError);
    CHECK_THROWS_AS(TensorElement(5, 2), DimensionError);
    CHECK_THROWS_AS(TensorElement(2, 6), DimensionError);
}

TEST_CASE("inverse") {
    CHECK(inverse(TensorElement::identity(2, 4)) == TensorElement::identity(2, 4));

    // (a, A)^{-1} = (-a, -A + a (x) a)
    const auto g = level_one({1.0, 0.0}, 2);
    const auto gi = inverse(g);
    CHECK(gi({0}) == -1.0);
    CHECK(gi({0, 0}) == 1.0);
    CHECK(gi({0, 1}) == 0.0);
    CHECK(gi({1, 1}) == 0.0);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = oracle::random_element(2, 4, rng, 0.7);
        CHECK(max_abs_difference(inverse(inverse(x)), x) < 1e-12);
        CHECK(max_abs_difference(multiply(x, inverse(x)), TensorElement::identity(2, 4)) < 1e-12);
    }
}

TEST_CASE("dilation") {
    std::mt19937_64 rng(4);
    const auto g = oracle::random_element(2, 3, rng);
    CHECK(dilate(g, 1.0) == g);
    CHECK(dilate(TensorElement::identity(2, 3), 3.5) == TensorElement::identity(2, 3));
    CHECK(max_abs_difference(dilate(dilate(g, 0.3), -1.7), dilate(g, 0.3 * -1.7)) < 1e-12);
}

TEST_CASE("homogeneous norm") {
    CHECK(homogeneous_norm(level_one({3.0, 4.0}, 3)) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(homogeneous_norm(TensorElement::identity(2, 3)) == 0.0);
    const auto area = TensorElement::from_levels(2, std::vector<std::vector<double>>{{0.0, 0.0}, {0.0, 0.5, -0.5, 0.0}});
    CHECK(homogeneous_norm(area) == doctest::Approx(std::sqrt(std::sqrt(2.0) * 0.5)).epsilon(1e-15));
    CHECK(homogeneous_norm(area) == doctest::Approx(0.8409).epsilon(1e-4));
}

TEST_CASE("homogeneous norm is homogeneous under dilation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> lam(-3.0, 3.0);
    for (int trial = 0; trial < 100; ++trial) {
        const auto g = oracle::random_element(3, 4, rng);
        const double l = lam(rng);
        const double lhs = homogeneous_norm(dilate(g, l));
        const double rhs = std::abs(l) * homogeneous_norm(g);
        CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, rhs));
    }
}

TEST_CASE("cc distance") {
    std::mt19937_64 rng(6);
    const auto g = oracle::random_element(2, 3, rng);
    CHECK(cc_distance(g, g) == 0.0);
    const auto id = TensorElement::identity(2, 2);
    const auto v = level_one({3.0, 4.0}, 2);
    CHECK(homogeneous_norm(multiply(inverse(id), v)) == doctest::Approx(5.0));
    // (v, 0)^{-1} = (-v, v (x) v), so the backward norm is 5 + 5
    CHECK(cc_distance(id, v) == doctest::Approx(10.0));
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = oracle::random_element(2, 3, rng);
        const auto b = oracle::random_element(2, 3, rng);
        const auto k = oracle::random_element(2, 3, rng);
        CHECK(std::abs(cc_distance(multiply(k, a), multiply(k, b)) - cc_distance(a, b)) < 1e-12);
        CHECK(cc_distance(a, b) == cc_distance(b, a));
    }
}

TEST_CASE("segment exponential is the signature of a straight line") {
    const std::vector<double> v{0.3, -1.2};
    const auto e = segment_exponential(v, 4);
    const auto sig = oracle::signature({{0.0, 0.0}, {0.3, -1.2}}, 4);
    CHECK(max_word_difference(sig, e) < 1e-15);
}

TEST_CASE("piecewise-linear lift") {
    SUBCASE("single segment has zero area") {
        const auto gp = lift_piecewise_linear({{0.0, 0.0}, {3.0, 4.0}}, std::vector<double>{0.0, 1.0}, 2);
        const auto inc = gp.increment(0, 1);
        CHECK(inc({0}) == 3.0);
        CHECK(inc({1}) == 4.0);
        for (double a : antisymmetric_level2(inc)) CHECK(a == 0.0);
    }
    SUBCASE("L-shaped path has area one half") {
        const auto gp = lift_piecewise_linear({{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}}, std::vector<double>{0.0, 0.5, 1.0}, 2);
        const auto a = levy_area_increment(gp, 0.0, 1.0);
        CHECK(a[1] == doctest::Approx(0.5));
        CHECK(a[2] == doctest::Approx(-0.5));
    }
    SUBCASE("matches the segment-recursion signature oracle") {
        std::mt19937_64 rng(7);
        const auto pts = oracle::random_walk(9, 3, rng, 0.5);
        const auto gp = lift_piecewise_linear(pts, oracle::uniform_times(9), 4);
        CHECK(max_word_difference(oracle::signature(pts, 4), gp.points().back()) < 1e-12);
    }
    SUBCASE("non-increasing times are rejected") {
        CHECK_THROWS_AS(lift_piecewise_linear({{0.0}, {1.0}, {2.0}}, std::vector<double>{0.0, 0.5, 0.5}, 2), InputError);
    }
}

TEST_CASE("Chen identity over all grid triples") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto pts = oracle::random_walk(11, 2, rng, 0.5);
        const auto gp = lift_piecewise_linear(pts, oracle::uniform_times(11), 3);
        for (std::size_t s = 0; s < 11; ++s)
            for (std::size_t t = s; t < 11; ++t)
                for (std::size_t u = t; u < 11; ++u)
                    CHECK(max_abs_difference(gp.increment(s, u), multiply(gp.increment(s, t), gp.increment(t, u))) <
                          1e-12);
        CHECK(max_abs_difference(gp.increment_at(0.0, 1.0),
                                 multiply(gp.increment_at(0.0, 0.5), gp.increment_at(0.5, 1.0))) < 1e-12);
    }
}

TEST_CASE("step-2 lifts satisfy the symmetric-part constraint") {
    std::mt19937_64 rng(9);
    const auto pts = oracle::random_walk(30, 3, rng);
    const auto gp = lift_piecewise_linear(pts, oracle::uniform_times(30), 2);
    for (std::size_t s = 0; s < 30; s += 3)
        for (std::size_t t = s + 1; t < 30; t += 2) {
            const auto g = gp.increment(s, t);
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) {
                    const double sym = 0.5 * (g({i, j}) + g({j, i}));
                    CHECK(std::abs(sym - 0.5 * g({i}) * g({j})) < 1e-12);
                }
        }
}

TEST_CASE("Levy area increments") {
    std::mt19937_64 rng(10);
    const std::size_t n = 12;
    const auto pts = oracle::random_walk(n, 2, rng);
    const auto times = oracle::uniform_times(n);
    const auto gp = lift_piecewise_linear(pts, times, 2);
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t t = s + 1; t < n; ++t) {
            const auto a = levy_area_increment(gp, times[s], times[t]);
            CHECK(std::abs(a[1] - oracle::shoelace_area(pts, s, t, 0, 1)) < 1e-12);
            // A_{s,t} = A_t - A_s - 1/2 (B_s (C_t - C_s) - C_s (B_t - B_s))
            const double at = levy_area_increment(gp, 0.0, times[t])[1];
            const double as = s == 0 ? 0.0 : levy_area_increment(gp, 0.0, times[s])[1];
            const double bs = pts[s][0] - pts[0][0], cs = pts[s][1] - pts[0][1];
            const double rhs = at - as - 0.5 * (bs * (pts[t][1] - pts[s][1]) - cs * (pts[t][0] - pts[s][0]));
            CHECK(std::abs(a[1] - rhs) < 1e-12);
        }
    CHECK_THROWS_AS(levy_area_increment(gp, 0.05, 1.0), InputError);
    CHECK_THROWS_AS(levy_area_increment(gp, 1.0, 0.0), InputError);
    CHECK_THROWS_AS(levy_area_increment(gp, 0.0, 0.0), InputError);
}

TEST_CASE("signatures of a smooth curve converge under refinement") {
    // Quarter circle sampled at n points; level-3 coefficients settle as n doubles.
    auto lift_at = [](std::size_t n) {
        std::vector<std::vector<double>> pts;
        for (std::size_t k = 0; k < n; ++k) {
            const double th = 1.5707963267948966 * static_cast<double>(k) / static_cast<double>(n - 1);
            pts.push_back({std::cos(th), std::sin(th)});
        }
        return lift_piecewise_linear(pts, oracle::uniform_times(n), 3).points().back();
    };
    double prev_diff = 1e9;
    TensorElement prev = lift_at(8);
    for (std::size_t n = 16; n <= 256; n *= 2) {
        const TensorElement cur = lift_at(n);
        const double diff = max_abs_difference(cur, prev);
        CHECK(diff < prev_diff);
        prev_diff = diff;
        prev = cur;
    }
}
