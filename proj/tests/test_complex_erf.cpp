#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "steerharvest/complex_erf.hpp"
#include "test_oracles.hpp"

using namespace steerharvest;
using Catch::Approx;

namespace {

double rel(complexd a, complexd b)
{
    return std::abs(a - b) / std::abs(b);
}

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

} // namespace

TEST_CASE("faddeeva trivial values")
{
    const complexd w0 = faddeeva({0.0, 0.0});
    CHECK(w0.real() == 1.0);
    CHECK(w0.imag() == 0.0);

    // Pure imaginary argument: w(iy) = exp(y^2) erfc(y), real.
    for (double y : {0.25, 1.0, 3.0}) {
        const complexd w = faddeeva({0.0, y});
        CHECK(w.imag() == 0.0);
        CHECK(w.real() == Approx(std::exp(y * y) * std::erfc(y)).epsilon(1e-13));
    }
}

TEST_CASE("faddeeva derived value at 1+1i")
{
    const complexd z(1.0, 1.0);
    const complexd w = faddeeva(z);
    // Frozen from the 30-term Maclaurin oracle below.
    CHECK(rel(w, {0.30474420525691259, 0.20821893820283163}) < 1e-13);
    CHECK(rel(w, test_oracle::w_maclaurin(z, 30)) < 1e-13);
}

TEST_CASE("faddeeva conjugation identity w(-conj z) = conj w(z)")
{
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> radius(0.0, 5.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double r = radius(rng);
        const double th = angle(rng);
        const complexd z(r * std::cos(th), r * std::sin(th));
        const complexd lhs = faddeeva(complexd(-z.real(), z.imag()));
        const complexd rhs = std::conj(faddeeva(z));
        worst = std::max(worst, rel(lhs, rhs));
    }
    CHECK(worst < 1e-11);
}

TEST_CASE("faddeeva series/rational seam")
{
    for (int k = 0; k <= 50; ++k) {
        const double th = M_PI * k / 50.0; // upper half circle
        const complexd z(detail::faddeeva_series_radius * std::cos(th),
                         detail::faddeeva_series_radius * std::sin(th));
        CHECK(rel(detail::faddeeva_series(z), detail::faddeeva_weideman(z)) < 1e-12);
    }
}

TEST_CASE("erf values")
{
    CHECK(erf(complexd(0.0, 0.0)) == complexd(0.0, 0.0));
    const complexd e1 = erf(complexd(1.0, 0.0));
    // Frozen from the Maclaurin oracle.
    CHECK(e1.real() == Approx(0.84270079294971487).epsilon(1e-13));
    CHECK(e1.imag() == 0.0);
    CHECK(rel(e1, test_oracle::erf_maclaurin({1.0, 0.0}, 40)) < 1e-13);

    // Oracle comparison off the axes.
    const complexd z(0.8, 1.3);
    CHECK(rel(erf(z), test_oracle::erf_maclaurin(z, 60)) < 1e-12);
}

TEST_CASE("erf oddness and real-axis behaviour")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int i = 0; i < 2000; ++i) {
        const complexd z(coord(rng), coord(rng));
        CHECK(std::abs(erf(-z) + erf(z)) <= 1e-14 * std::max(1.0, std::abs(erf(z))));
    }
    for (int i = -60; i <= 60; ++i) {
        const double x = i / 10.0;
        CHECK(erf(complexd(x, 0.0)).imag() == 0.0);
    }
}

TEST_CASE("erfi values and identities")
{
    CHECK(erfi(complexd(0.0, 0.0)) == complexd(0.0, 0.0));
    const complexd e = erfi(complexd(0.5, 0.0));
    // Frozen from the term-by-term series oracle.
    CHECK(e.real() == Approx(0.61495209469651098).epsilon(1e-13));
    CHECK(e.imag() == 0.0);
    CHECK(rel(e, test_oracle::erfi_maclaurin({0.5, 0.0}, 40)) < 1e-13);

    // erfi(i x) = i erf(x)
    for (double x : {0.25, 1.0, 2.0}) {
        const complexd lhs = erfi(complexd(0.0, x));
        CHECK(lhs.real() == 0.0);
        CHECK(lhs.imag() == Approx(std::erf(x)).epsilon(1e-15));
    }
}

TEST_CASE("erf/erfi/faddeeva mutual consistency")
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> coord(-2.5, 2.5);
    double worst_erf = 0.0, worst_erfi = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const complexd z(coord(rng), coord(rng));
        const complexd iz(-z.imag(), z.real());
        const complexd via_w = 1.0 - std::exp(-z * z) * faddeeva(iz);
        if (std::abs(via_w) > 1e-8)
            worst_erf = std::max(worst_erf, rel(erf(z), via_w));
        const complexd mi_erf_iz = [&] {
            const complexd v = erf(iz);
            return complexd(v.imag(), -v.real());
        }();
        if (std::abs(mi_erf_iz) > 1e-8)
            worst_erfi = std::max(worst_erfi, rel(erfi(z), mi_erf_iz));
    }
    CHECK(worst_erf < 1e-11);
    CHECK(worst_erfi < 1e-11);
}

TEST_CASE("erfc values")
{
    CHECK(steerharvest::erfc(0.0) == 1.0);
    // Frozen from the Lentz continued-fraction oracle.
    CHECK(steerharvest::erfc(2.0) == Approx(0.0046777349810472658).epsilon(1e-14));
    CHECK(std::abs(steerharvest::erfc(2.0) - test_oracle::erfc_lentz(2.0)) <
          1e-14 * steerharvest::erfc(2.0));
    CHECK(std::abs(steerharvest::erfc(3.5) - test_oracle::erfc_lentz(3.5)) <
          1e-13 * steerharvest::erfc(3.5));

    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const double x = coord(rng);
        CHECK(steerharvest::erfc(x) + steerharvest::erfc(-x) == Approx(2.0).epsilon(1e-14));
    }
}

TEST_CASE("specfun domain errors on non-finite input")
{
    CHECK_THROWS_AS(faddeeva({kNan, 0.0}), domain_error);
    CHECK_THROWS_AS(faddeeva({0.0, kInf}), domain_error);
    CHECK_THROWS_AS(erf(complexd(kInf, 0.0)), domain_error);
    CHECK_THROWS_AS(erfi(complexd(0.0, kNan)), domain_error);
    CHECK_THROWS_AS(steerharvest::erfc(kNan), domain_error);
    CHECK_THROWS_AS(steerharvest::erf(kInf), domain_error);
}
