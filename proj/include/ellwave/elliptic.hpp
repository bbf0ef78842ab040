#pragma once

#include <optional>
#include <string_view>

namespace ellwave::elliptic {

struct Triple {
    double sn;
    double cn;
    double dn;
};

// Complete elliptic integral of the first kind, parameter convention m = k^2.
double quarter_period(double m);

// sn, cn, dn at (x, m) for 0 <= m <= 1.
Triple jacobi(double x, double m);

enum class Quotient { ns, cs, ds, sc, sd, nd };

double quotient(Quotient q, double x, double m);
std::optional<Quotient> parse_quotient(std::string_view name);
const char* quotient_name(Quotient q);

enum class Function { sn, cn, dn };

std::optional<Function> parse_function(std::string_view name);

// d/dx of sn, cn or dn at fixed m.
double derivative(Function f, double x, double m);
double derivative(std::string_view name, double x, double m);

}  // namespace ellwave::elliptic
