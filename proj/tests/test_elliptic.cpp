#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ellwave/elliptic.hpp"
#include "ellwave/errors.hpp"

using namespace ellwave;
using elliptic::jacobi;
using elliptic::quarter_period;

namespace {

double quadrature_K(double m)
{
    auto f = [m](double th) { return 1.0 / std::sqrt(1.0 - m * std::sin(th) * std::sin(th)); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numbers::pi / 2, 15, 1e-15);
}

double fd4(double (*f)(double, double), double x, double m, double h)
{
    return (-f(x + 2 * h, m) + 8 * f(x + h, m) - 8 * f(x - h, m) + f(x - 2 * h, m)) / (12 * h);
}

double cn_of(double x, double m) { return jacobi(x, m).cn; }
double sn_of(double x, double m) { return jacobi(x, m).sn; }
double dn_of(double x, double m) { return jacobi(x, m).dn; }

}  // namespace

TEST_SUITE("elliptic") {

TEST_CASE("quarter period")
{
    CHECK(quarter_period(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK_THROWS_AS(quarter_period(1.0), DomainError);
    CHECK_THROWS_AS(quarter_period(-0.1), DomainError);
    CHECK(std::abs(quarter_period(0.5) - quadrature_K(0.5)) <= 1e-13);
    for (double m : {1e-6, 0.1, 0.3, 0.7, 0.9, 0.99}) {
        const double ref = boost::math::ellint_1(std::sqrt(m));
        CHECK(std::abs(quarter_period(m) / ref - 1.0) <= 1e-14);
    }
}

TEST_CASE("jacobi limits and quarter-period values")
{
    for (double x : {-3.1, -0.4, 0.0, 0.9, 7.5}) {
        auto t0 = jacobi(x, 0.0);
        CHECK(t0.sn == std::sin(x));
        CHECK(t0.cn == std::cos(x));
        CHECK(t0.dn == 1.0);
        auto t1 = jacobi(x, 1.0);
        CHECK(t1.sn == doctest::Approx(std::tanh(x)).epsilon(1e-15));
        CHECK(t1.cn == doctest::Approx(1.0 / std::cosh(x)).epsilon(1e-15));
        CHECK(t1.dn == doctest::Approx(1.0 / std::cosh(x)).epsilon(1e-15));
    }
    for (double m : {0.2, 0.5, 0.8, 0.95}) {
        auto t = jacobi(quarter_period(m), m);
        CHECK(std::abs(t.sn - 1.0) <= 1e-15);
        CHECK(std::abs(t.cn) <= 1e-15);
        CHECK(std::abs(t.dn - std::sqrt(1.0 - m)) <= 1e-15);
    }
    CHECK_THROWS_AS(jacobi(std::nan(""), 0.5), DomainError);
    CHECK_THROWS_AS(jacobi(INFINITY, 0.5), DomainError);
    CHECK_THROWS_AS(jacobi(0.3, 1.2), DomainError);
}

TEST_CASE("jacobi agrees with boost")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-40.0, 40.0), um(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 5000; ++i) {
        const double x = ux(rng), m = um(rng);
        double cn = 0, dn = 0;
        const double sn = boost::math::jacobi_elliptic(std::sqrt(m), x, &cn, &dn);
        auto t = jacobi(x, m);
        worst = std::max({worst, std::abs(t.sn - sn), std::abs(t.cn - cn), std::abs(t.dn - dn)});
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("algebraic invariants over random samples")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-50.0, 50.0), um(0.0, 1.0);
    double e1 = 0, e2 = 0, e3 = 0, range = 0;
    for (int i = 0; i < 10000; ++i) {
        const double x = ux(rng), m = um(rng);
        auto t = jacobi(x, m);
        e1 = std::max(e1, std::abs(t.sn * t.sn + t.cn * t.cn - 1.0));
        e2 = std::max(e2, std::abs(t.dn * t.dn + m * t.sn * t.sn - 1.0));
        const double sm = std::sqrt(m);
        e3 = std::max(e3, std::abs((t.dn + sm * t.cn) * (t.dn - sm * t.cn) - (1.0 - m)));
        if (t.dn < std::sqrt(1.0 - m) - 1e-15 || t.dn > 1.0 + 1e-15) range += 1;
    }
    CHECK(e1 <= 1e-13);
    CHECK(e2 <= 1e-13);
    CHECK(e3 <= 1e-13);
    CHECK(range == 0);
}

TEST_CASE("periodicity and parity")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-5.0, 5.0), um(0.0, 0.99);
    for (int i = 0; i < 2000; ++i) {
        const double x = ux(rng), m = um(rng), K = quarter_period(m);
        auto a = jacobi(x, m), b = jacobi(x + 2 * K, m), c = jacobi(x + 4 * K, m), n = jacobi(-x, m);
        CHECK(std::abs(b.dn - a.dn) <= 1e-12);
        CHECK(std::abs(b.cn + a.cn) <= 1e-12);
        CHECK(std::abs(c.cn - a.cn) <= 1e-12);
        CHECK(n.cn == doctest::Approx(a.cn).epsilon(1e-14));
        CHECK(n.dn == doctest::Approx(a.dn).epsilon(1e-14));
        CHECK(n.sn == doctest::Approx(-a.sn).epsilon(1e-14));
    }
}

TEST_CASE("large arguments are reduced")
{
    const double m = 0.6, K = quarter_period(m);
    auto far = jacobi(0.37 + 400 * K, m);
    auto near = jacobi(0.37, m);
    CHECK(std::abs(far.sn - near.sn) <= 1e-12);
    CHECK(std::abs(far.cn - near.cn) <= 1e-12);
}

TEST_CASE("quotients and poles")
{
    using elliptic::Quotient;
    for (double m : {0.1, 0.5, 0.9}) {
        const double K = quarter_period(m);
        CHECK(std::abs(elliptic::quotient(Quotient::cs, K, m)) <= 1e-15);
        CHECK(elliptic::quotient(Quotient::ds, K, m) == doctest::Approx(std::sqrt(1 - m)).epsilon(1e-14));
        CHECK_THROWS_AS(elliptic::quotient(Quotient::sc, K, m), PoleError);
    }
    try {
        elliptic::quotient(Quotient::ns, 0.0, 0.5);
        FAIL("expected pole");
    } catch (const PoleError& e) {
        CHECK(e.quotient == "ns");
    }
    CHECK_THROWS_AS(elliptic::quotient(Quotient::cs, 0.0, 0.3), PoleError);
    CHECK_THROWS_AS(elliptic::quotient(Quotient::ds, 0.0, 0.3), PoleError);
    auto t = jacobi(0.8, 0.4);
    CHECK(elliptic::quotient(Quotient::sd, 0.8, 0.4) == doctest::Approx(t.sn / t.dn).epsilon(1e-15));
    CHECK(elliptic::quotient(Quotient::nd, 0.8, 0.4) == doctest::Approx(1 / t.dn).epsilon(1e-15));
    CHECK(elliptic::parse_quotient("cs") == Quotient::cs);
    CHECK_FALSE(elliptic::parse_quotient("tn").has_value());
}

TEST_CASE("derivatives")
{
    CHECK(elliptic::derivative("dn", 0.0, 0.4) == 0.0);
    const double fd = fd4(cn_of, 0.7, 0.3, 1e-3);
    CHECK(std::abs(elliptic::derivative("cn", 0.7, 0.3) - fd) <= 1e-9);
    for (double x : {-1.3, 0.2, 2.4}) {
        const double s = 1.0 / std::cosh(x);
        CHECK(elliptic::derivative("sn", x, 1.0) == doctest::Approx(s * s).epsilon(1e-14));
        const double h = 1e-5;
        CHECK(std::abs(elliptic::derivative("sn", x, 0.45) - (sn_of(x + h, 0.45) - sn_of(x - h, 0.45)) / (2 * h)) <= 1e-8);
        CHECK(std::abs(elliptic::derivative("dn", x, 0.45) - (dn_of(x + h, 0.45) - dn_of(x - h, 0.45)) / (2 * h)) <= 1e-8);
    }
    CHECK_THROWS_AS(elliptic::derivative("tn", 0.1, 0.5), UsageError);
}

}
