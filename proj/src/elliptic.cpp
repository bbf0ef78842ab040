#include "ellwave/elliptic.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "ellwave/errors.hpp"

namespace ellwave {

namespace {

std::string pole_message(const std::string& q, double x, double m)
{
    std::ostringstream os;
    os.precision(17);
    os << "pole of " << q << " at x=" << x << ", m=" << m;
    return os.str();
}

}  // namespace

PoleError::PoleError(std::string quotient_name, double x, double m)
    : std::domain_error(pole_message(quotient_name, x, m)), quotient(std::move(quotient_name))
{
}

ExistenceError::ExistenceError(std::string relation_id, const std::string& what)
    : std::domain_error(relation_id + ": " + what), relation(std::move(relation_id))
{
}

namespace elliptic {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kHyperbolicBand = 1e-12;
constexpr double kPoleBand = 1e-14;

void check_parameter(double m)
{
    if (!(m >= 0.0 && m <= 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "elliptic parameter m=" << m << " outside [0, 1]";
        throw DomainError(os.str());
    }
}

}  // namespace

double quarter_period(double m)
{
    if (!(m >= 0.0 && m < 1.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "K(m) requires 0 <= m < 1, got m=" << m;
        throw DomainError(os.str());
    }
    double a = 1.0;
    double b = std::sqrt(1.0 - m);
    for (int i = 0; i < 64 && std::abs(a - b) > kEps * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return std::numbers::pi / (a + b);
}

Triple jacobi(double x, double m)
{
    check_parameter(m);
    if (!std::isfinite(x)) throw DomainError("jacobi: non-finite argument");
    if (m == 0.0) return {std::sin(x), std::cos(x), 1.0};
    if (1.0 - m <= kHyperbolicBand) {
        const double c = 1.0 / std::cosh(x);
        return {std::tanh(x), c, c};
    }

    const double period = 4.0 * quarter_period(m);
    const double xr = x - period * std::nearbyint(x / period);

    // descending Landen sequence
    std::array<double, 32> a{};
    std::array<double, 32> c{};
    a[0] = 1.0;
    double b = std::sqrt(1.0 - m);
    c[0] = std::sqrt(m);
    int n = 0;
    while (n + 1 < static_cast<int>(a.size()) && std::abs(c[n]) > kEps * a[n]) {
        a[n + 1] = 0.5 * (a[n] + b);
        c[n + 1] = c[n] * c[n] / (4.0 * a[n + 1]);
        b = std::sqrt(a[n] * b);
        ++n;
    }
    double phi = std::ldexp(a[n] * xr, n);
    for (int j = n; j > 0; --j) phi = 0.5 * (phi + std::asin(c[j] * std::sin(phi) / a[j]));
    const double s = std::sin(phi);
    const double co = std::cos(phi);
    // both terms non-negative, so no cancellation near cn = 0 or m = 1
    return {s, co, std::sqrt((1.0 - m) + m * co * co)};
}

const char* quotient_name(Quotient q)
{
    switch (q) {
        case Quotient::ns: return "ns";
        case Quotient::cs: return "cs";
        case Quotient::ds: return "ds";
        case Quotient::sc: return "sc";
        case Quotient::sd: return "sd";
        case Quotient::nd: return "nd";
    }
    return "?";
}

std::optional<Quotient> parse_quotient(std::string_view name)
{
    for (Quotient q : {Quotient::ns, Quotient::cs, Quotient::ds, Quotient::sc, Quotient::sd, Quotient::nd}) {
        if (name == quotient_name(q)) return q;
    }
    return std::nullopt;
}

double quotient(Quotient q, double x, double m)
{
    const Triple t = jacobi(x, m);
    double num = 1.0;
    double den = 1.0;
    switch (q) {
        case Quotient::ns: den = t.sn; break;
        case Quotient::cs: num = t.cn; den = t.sn; break;
        case Quotient::ds: num = t.dn; den = t.sn; break;
        case Quotient::sc: num = t.sn; den = t.cn; break;
        case Quotient::sd: num = t.sn; den = t.dn; break;
        case Quotient::nd: den = t.dn; break;
    }
    if (std::abs(den) < kPoleBand) throw PoleError(quotient_name(q), x, m);
    return num / den;
}

std::optional<Function> parse_function(std::string_view name)
{
    if (name == "sn") return Function::sn;
    if (name == "cn") return Function::cn;
    if (name == "dn") return Function::dn;
    return std::nullopt;
}

double derivative(Function f, double x, double m)
{
    const Triple t = jacobi(x, m);
    switch (f) {
        case Function::sn: return t.cn * t.dn;
        case Function::cn: return -t.sn * t.dn;
        case Function::dn: return -m * t.sn * t.cn;
    }
    return 0.0;
}

double derivative(std::string_view name, double x, double m)
{
    const auto f = parse_function(name);
    if (!f) throw UsageError("unknown Jacobi function '" + std::string(name) + "' (expected sn, cn or dn)");
    return derivative(*f, x, m);
}

}  // namespace elliptic
}  // namespace ellwave
