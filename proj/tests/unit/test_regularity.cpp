#include <doctest.h>

#include <cmath>

#include "roughvar/errors.hpp"
#include "roughvar/regularity.hpp"

using namespace roughvar;

namespace {

const double kE = std::exp(1.0);

std::vector<RegularityFunction> builtins() {
    std::vector<RegularityFunction> out;
    for (double p : {1.0, 2.0, 2.5, 3.0, 6.0}) {
        out.push_back(RegularityFunction::phi1(p));
        out.push_back(RegularityFunction::phi2(p));
        out.push_back(RegularityFunction::psi1(p));
        out.push_back(RegularityFunction::psi2(p));
        out.push_back(RegularityFunction::power(p));
    }
    return out;
}

}  // namespace

TEST_CASE("logarithm clamps") {
    CHECK(log_single(1.0) == 1.0);
    CHECK(log_single(std::exp(-3.0)) == doctest::Approx(3.0));
    CHECK(log_double(std::exp(-kE * kE)) == doctest::Approx(2.0));
    CHECK(log_double(0.5) == 1.0);
    // continuity at both breakpoints
    CHECK(log_single(std::exp(-1.0) * (1 - 1e-12)) == doctest::Approx(1.0));
    CHECK(log_double(std::exp(-kE) * (1 - 1e-12)) == doctest::Approx(1.0));
}

TEST_CASE("evaluation") {
    const auto psi22 = RegularityFunction::psi2(2.0);
    CHECK(psi22(1.0) == 1.0);
    CHECK(psi22(0.0) == 0.0);
    CHECK(psi22(std::exp(-kE)) == doctest::Approx(std::exp(-2.0 * kE)).epsilon(1e-14));
    CHECK(psi22(std::exp(-kE)) == doctest::Approx(4.355e-3).epsilon(1e-3));
    const double x = 1e-6;
    CHECK(psi22(x) == doctest::Approx(x * x / std::log(std::log(1.0 / x))).epsilon(1e-14));
    CHECK(RegularityFunction::phi1(2.0)(1e-4) == doctest::Approx(std::sqrt(1e-4) * std::sqrt(std::log(1e4))));
    CHECK(RegularityFunction::psi1(3.0)(1e-3) ==
          doctest::Approx(std::pow(1e-3 / std::sqrt(std::log(1e3)), 3.0)).epsilon(1e-14));
    CHECK(psi22(1e-301) == 0.0);
    CHECK_THROWS_AS(psi22(-1.0), InputError);
}

TEST_CASE("inverse") {
    const auto sq = RegularityFunction::power(2.0);
    CHECK(sq.inverse(4.0) == doctest::Approx(2.0));
    CHECK(sq.inverse(0.0) == 0.0);
    const auto psi22 = RegularityFunction::psi2(2.0);
    for (int k = 0; k <= 24; ++k) {
        const double y = std::pow(10.0, -k / 4.0);
        const double x = psi22.inverse(y);
        CHECK(std::abs(psi22(x) - y) <= 1e-10 * y);
    }
    CHECK_THROWS_AS(psi22.inverse(-1.0), RangeError);
    // phi_{3,1} is not monotone past its declared limit; values above the limit are out of range
    const auto phi31 = RegularityFunction::phi1(3.0);
    REQUIRE(std::isfinite(phi31.monotone_limit()));
    CHECK_THROWS_AS(phi31.inverse(phi31(phi31.monotone_limit()) * 1.01), RangeError);
}

TEST_CASE("declared monotone domains") {
    CHECK(std::isinf(RegularityFunction::psi2(2.0).monotone_limit()));
    CHECK(std::isinf(RegularityFunction::psi1(3.0).monotone_limit()));
    CHECK(std::isinf(RegularityFunction::phi1(2.0).monotone_limit()));
    CHECK(std::isinf(RegularityFunction::phi2(2.0).monotone_limit()));
    // phi_{p,1} turns down on (e^{-p/2}, 1/e) once p > 2
    const double lim = RegularityFunction::phi1(3.0).monotone_limit();
    CHECK(lim <= std::exp(-1.5));
    CHECK(lim > 0.9 * std::exp(-1.5));
    CHECK(std::isfinite(RegularityFunction::phi2(6.0).monotone_limit()));
}

TEST_CASE("built-in families are strictly increasing on the probe grid") {
    for (const auto& f : builtins()) {
        double prev = -1.0;
        for (int k = 200; k >= 0; --k) {
            const double x = std::pow(10.0, -k / 10.0);
            if (x > f.monotone_limit()) break;
            const double v = f(x);
            if (v == 0.0) continue;  // underflow region of psi families
            CHECK_MESSAGE(v > prev, f.name() << " at " << x);
            prev = v;
        }
    }
}

TEST_CASE("psi_{p,2}(s) <= s^p") {
    for (double p : {1.0, 2.0, 3.0}) {
        const auto f = RegularityFunction::psi2(p);
        for (int k = 0; k <= 120; ++k) {
            const double s = std::pow(10.0, -k / 8.0);
            CHECK(f(s) <= std::pow(s, p));
        }
    }
}

TEST_CASE("phi_{p,2} after psi_{p,2} stays comparable to the identity") {
    for (double p : {2.0, 3.0}) {
        const auto phi = RegularityFunction::phi2(p);
        const auto psi = RegularityFunction::psi2(p);
        for (int k = 12; k <= 32; ++k) {
            const double s = std::pow(10.0, -k / 4.0);
            const double r = phi(psi(s)) / s;
            CHECK(r >= 0.5);
            CHECK(r <= 2.0);
        }
    }
}

TEST_CASE("doubling probes") {
    const auto grid = default_probe_grid();
    REQUIRE(grid.size() == 53);
    CHECK(grid.front() == doctest::Approx(1e-2));
    CHECK(grid.back() == doctest::Approx(1e-15));
    for (double p : {1.5, 2.0, 3.0}) {
        const auto f = RegularityFunction::power(p);
        const auto delta = check_doubling(f, DoublingKind::delta2, grid);
        CHECK(delta.constant == doctest::Approx(std::pow(2.0, p)));
        CHECK(delta.satisfied);
        const auto d2 = check_doubling(f, DoublingKind::d2, grid);
        CHECK(d2.constant == doctest::Approx(std::pow(2.0, 1.0 / p)));
        CHECK(d2.satisfied);
    }
    const auto flat = RegularityFunction::custom("exp(-1/x)", [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; });
    CHECK_FALSE(check_doubling(flat, DoublingKind::delta2, grid).satisfied);
    for (const auto& f : {RegularityFunction::psi2(2.0), RegularityFunction::psi1(2.0), RegularityFunction::phi2(2.0)}) {
        CHECK(check_doubling(f, DoublingKind::delta2, grid).satisfied);
        CHECK(check_doubling(f, DoublingKind::d2, grid).satisfied);
    }
}

TEST_CASE("json round trip") {
    const auto f = RegularityFunction::psi2(2.5);
    const auto j = f.to_json();
    CHECK(j.at("family") == "psi2");
    CHECK(j.at("p") == 2.5);
    const auto g = RegularityFunction::from_json(j);
    CHECK(g.family() == Family::psi2);
    CHECK(g(1e-3) == f(1e-3));
    CHECK_THROWS_AS(RegularityFunction::from_json({{"family", "nope"}, {"p", 2.0}}), InputError);
    CHECK_THROWS_AS(RegularityFunction::psi2(0.5), InputError);
}

TEST_CASE("square-root composition") {
    const auto f = RegularityFunction::psi2(2.0);
    const auto g = f.compose_sqrt();
    CHECK(g(0.04) == f(0.2));
    CHECK(g.inverse(f(0.2)) == doctest::Approx(0.04));
}
