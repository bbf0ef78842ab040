#include <cmath>
#include <random>

#include "ellwave/elliptic.hpp"
#include "ellwave/errors.hpp"
#include "ellwave/verify.hpp"

namespace ellwave::verify {

namespace {

struct Args {
    double sn, cn, dn;   // at x
    double cp, cm;       // cn(x + a), cn(x - a)
    double dp, dm;       // dn(x + a), dn(x - a)
    double ns, cs, ds;   // at a
    double m;
};

Args gather(double x, double a, double m)
{
    using elliptic::Quotient;
    const auto t = elliptic::jacobi(x, m);
    const auto p = elliptic::jacobi(x + a, m);
    const auto q = elliptic::jacobi(x - a, m);
    return {t.sn,
            t.cn,
            t.dn,
            p.cn,
            q.cn,
            p.dn,
            q.dn,
            elliptic::quotient(Quotient::ns, a, m),
            elliptic::quotient(Quotient::cs, a, m),
            elliptic::quotient(Quotient::ds, a, m),
            m};
}

int index_of(std::string_view id)
{
    const auto ids = identity_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) return static_cast<int>(i);
    }
    throw UsageError("unknown identity '" + std::string(id) + "' (expected A1..A8 or A8-corrected)");
}

}  // namespace

std::vector<std::string> identity_ids()
{
    return {"A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "A8-corrected"};
}

IdentitySides evaluate_identity(std::string_view id, double x, double a, double m)
{
    const Args g = gather(x, a, m);
    const double m_ = g.m;
    switch (index_of(id)) {
        case 0:
            return {g.dn * g.dn * (g.dp + g.dm), 2.0 * g.ns * g.ds * g.dn - g.cs * g.cs * (g.dp + g.dm)};
        case 1:
            return {m_ * g.cn * g.cn * (g.cp + g.cm), 2.0 * g.ns * g.cs * g.cn - g.ds * g.ds * (g.cp + g.cm)};
        case 2:
            return {g.dn * g.dn * (g.dp - g.dm), -2.0 * m_ * g.cs * g.cn * g.sn - g.cs * g.cs * (g.dp - g.dm)};
        case 3:
            return {m_ * g.cn * g.cn * (g.cp - g.cm), -2.0 * g.ds * g.sn * g.dn - g.ds * g.ds * (g.cp - g.cm)};
        case 4:
            return {g.cn * g.dn * (g.dp + g.dm), 2.0 * g.ds * g.ns * g.cn - g.cs * g.ds * (g.cp + g.cm)};
        case 5:
            return {g.cn * g.dn * (g.dp - g.dm), -2.0 * g.cs * g.sn * g.dn - g.cs * g.ds * (g.cp - g.cm)};
        case 6:
            return {m_ * g.cn * g.dn * (g.cp + g.cm), 2.0 * g.cs * g.ns * g.dn - g.cs * g.ds * (g.dp + g.dm)};
        case 7:
            return {m_ * g.cn * g.dn * (g.cp - g.cm), -2.0 * g.ds * g.sn * g.cn - g.cs * g.ds * (g.dp - g.dm)};
        default:
            return {m_ * g.cn * g.dn * (g.cp - g.cm), -2.0 * m_ * g.ds * g.sn * g.cn - g.cs * g.ds * (g.dp - g.dm)};
    }
}

IdentityReport verify_identity(std::string_view id, int samples, unsigned long long seed)
{
    if (samples < 1) throw UsageError("identity check needs at least one sample");
    index_of(id);
    IdentityReport r;
    r.id = std::string(id);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (r.samples < samples) {
        const double m = u(rng) * 0.999;
        const double K = elliptic::quarter_period(m);
        const double x = (2.0 * u(rng) - 1.0) * 2.0 * K;
        const double a = u(rng) * 2.0 * K;
        if (a < 0.05 * K || a > 1.95 * K) {
            ++r.resampled;
            continue;
        }
        const auto s = evaluate_identity(id, x, a, m);
        r.max_error = std::max(r.max_error, std::abs(s.lhs - s.rhs));
        ++r.samples;
    }
    return r;
}

}  // namespace ellwave::verify
