#include "ellwave/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <sstream>

#include "ellwave/errors.hpp"

namespace ellwave::models {

namespace {

const cplx I{0.0, 1.0};

using Fk = FieldKind;

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::vector<ModelTemplate> build_registry()
{
    std::vector<ModelTemplate> r;
    auto add = [&](ModelTemplate t) { r.push_back(std::move(t)); };

    add({"nls", "NLS", {}, Kind::ContinuumComplex, {Fk::Schrodinger}, {"g"}, "(1)",
         "i u_t + u_xx + g|u|^2 u", ""});
    add({"qcnls", "quadratic-cubic NLS", {"quadratic-cubic-nls"}, Kind::ContinuumComplex, {Fk::Schrodinger},
         {"g1", "g2"}, "(1d)", "i u_t + u_xx + g1|u|u + g2|u|^2 u", ""});
    add({"mkdv", "MKdV", {}, Kind::ContinuumReal, {Fk::Kdv}, {"g"}, "(8)", "u_t + u_xxx + g u^2 u_x", ""});
    add({"phi4", "phi^2-phi^4", {"phi2-phi4"}, Kind::ContinuumReal, {Fk::Static}, {"a", "b"}, "(15)",
         "phi_xx - a phi - b phi^3", ""});
    add({"phi234", "phi^2-phi^3-phi^4", {"phi2-phi3-phi4"}, Kind::ContinuumReal, {Fk::Static}, {"a", "b", "c"},
         "(22)", "phi_xx - a phi - b phi^2 - c phi^3", ""});
    add({"kdv-mkdv", "mixed KdV-MKdV", {"mixed-kdv-mkdv"}, Kind::ContinuumReal, {Fk::Kdv},
         {"delta", "alpha", "gamma"}, "(29)", "u_t + delta u_xxx + alpha u^2 u_x + gamma u u_x", ""});
    add({"coupled-phi4", "coupled phi^4", {}, Kind::Coupled, {Fk::Static, Fk::Static},
         {"alpha1", "alpha2", "beta1", "beta2", "gamma"}, "(37)",
         "phi_xx - 2 alpha1 phi - 4 beta1 phi^3 - 2 gamma phi psi^2 ; psi_xx - 2 alpha2 psi - 4 beta2 psi^3 - 2 gamma psi phi^2",
         ""});
    add({"nls-mkdv", "coupled NLS-MKdV", {}, Kind::Coupled, {Fk::Schrodinger, Fk::Kdv}, {"g", "alpha", "gamma"},
         "(a1)", "i u_t + u_xx + g|u|^2 u + alpha u v^2 ; v_t + v_xxx + 6 v^2 v_x + gamma v (|u|^2)_x",
         "the same system is printed with g1 in place of g for the dn^2 families"});
    add({"coupled-nls", "coupled NLS", {"manakov", "mzs"}, Kind::Coupled, {Fk::Schrodinger, Fk::Schrodinger},
         {"a", "b", "e", "f"}, "(12.1)",
         "i u_t + u_xx + (a|u|^2 + b|v|^2) u ; i v_t + v_xx + (f|u|^2 + e|v|^2) v",
         "second equation taken with i v_t"});
    add({"al", "Ablowitz-Ladik", {"ablowitz-ladik"}, Kind::LatticeComplex, {Fk::Lattice}, {"g"}, "(1.1)",
         "i du_n/dt + (1 + g|u_n|^2)(u_{n+1} + u_{n-1})", "g = 1 is the printed lattice"});
    add({"saturable-dnls", "saturable DNLS", {"saturable"}, Kind::LatticeComplex, {Fk::Lattice}, {"nu"}, "(1.16)",
         "i du_n/dt + (u_{n+1} + u_{n-1} - 2u_n) + nu |u_n|^2 u_n / (1 + |u_n|^2)", ""});
    add({"discrete-phi4", "discrete phi^4", {}, Kind::LatticeRealStatic, {Fk::LatticeStatic}, {"lambda", "h"},
         "(1.27)",
         "(phi_{n+1} + phi_{n-1} - 2 phi_n)/h^2 + lambda phi_n - (lambda/2) phi_n^2 (phi_{n+1} + phi_{n-1})",
         "Lambda = lambda h^2"});
    add({"discrete-cubic-quintic", "discrete cubic-quintic NLS", {"cubic-quintic"}, Kind::LatticeComplex,
         {Fk::Lattice}, {"g1", "g2"}, "(1.36)",
         "i du_n/dt + (u_{n+1} + u_{n-1}) + g1 |u_n|^4 (u_{n+1} + u_{n-1}) + g2 |u_n|^2 u_n", ""});
    add({"discrete-mkdv", "discrete MKdV", {}, Kind::LatticeComplex, {Fk::Lattice}, {"alpha"}, "(1.1b)",
         "du_n/dt + alpha (u_{n+1} - u_{n-1}) + |u_n|^2 (u_{n+1} - u_{n-1})",
         "real fields reduce to the real lattice (1.1a)"});
    add({"kdv", "KdV", {}, Kind::ContinuumReal, {Fk::Kdv}, {"g"}, "(2.1)", "u_t + u_xxx + g u u_x", ""});
    add({"qnls", "quadratic NLS", {"quadratic-nls"}, Kind::ContinuumComplex, {Fk::Schrodinger}, {"g"}, "(2.6)",
         "i u_t + u_xx + g|u|u", ""});
    add({"phi3", "phi^3", {}, Kind::ContinuumReal, {Fk::Static}, {"a", "b"}, "(2.13)", "phi_xx - a phi - b phi^2",
         ""});
    add({"qnls-kdv", "coupled QNLS-KdV", {}, Kind::Coupled, {Fk::Schrodinger, Fk::Kdv}, {"g", "alpha", "gamma"},
         "(2.18)", "i u_t + u_xx + g|u|u + alpha u v ; v_t + v_xxx + 6 v v_x + gamma v |u|_x", ""});
    add({"nls-kdv", "coupled NLS-KdV", {}, Kind::Coupled, {Fk::Schrodinger, Fk::Kdv}, {"g", "alpha", "gamma"},
         "(6.18)", "i u_t + u_xx + g|u|^2 u + alpha u v ; v_t + v_xxx + 6 v v_x + gamma v (|u|^2)_x", ""});
    add({"coupled-kdv-mkdv", "coupled KdV-MKdV", {}, Kind::Coupled, {Fk::Kdv, Fk::Kdv}, {"alpha", "gamma"},
         "(6.31)", "u_t + u_xxx + 6 u u_x + 2 alpha u v v_x ; v_t + v_xxx + 6 v^2 v_x + gamma v u_x", ""});
    add({"qnls-mkdv", "coupled QNLS-MKdV", {}, Kind::Coupled, {Fk::Schrodinger, Fk::Kdv}, {"g", "alpha", "gamma"},
         "(6.42)", "i u_t + u_xx + g|u|u + alpha u v^2 ; v_t + v_xxx + 6 v^2 v_x + gamma v |u|_x", ""});
    add({"qnls-nls", "coupled QNLS-NLS", {}, Kind::Coupled, {Fk::Schrodinger, Fk::Schrodinger},
         {"g1", "g2", "alpha", "gamma"}, "(6.55)",
         "i u_t + u_xx + g1|u|u + alpha u|v|^2 ; i v_t + v_xx + g2|v|^2 v + gamma v|u|", ""});
    add({"qnls-nls-vx", "coupled QNLS-NLS, v_x reading", {}, Kind::Coupled, {Fk::Schrodinger, Fk::Schrodinger},
         {"g1", "g2", "alpha", "gamma"}, "(6.55)",
         "i u_t + u_xx + g1|u|u + alpha u|v|^2 ; i v_t + v_xx + g2|v|^2 v_x + gamma v|u|",
         "alternative reading of the printed second equation"});
    return r;
}

const FieldJet& field(const FieldSample& s, std::size_t i, const ModelSpec& m)
{
    if (s.fields.size() <= i) {
        throw UsageError("model " + m.id + " needs " + std::to_string(m.field_count) + " field(s), sample has " +
                         std::to_string(s.fields.size()));
    }
    return s.fields[i];
}

cplx slot(const std::optional<cplx>& v, const char* name, std::size_t i, const ModelSpec& m)
{
    if (!v) throw UsageError("model " + m.id + " requires slot " + name + " of field " + std::to_string(i));
    return *v;
}

double mod(cplx u) { return std::abs(u); }
double mod2(cplx u) { return std::norm(u); }
double mod2_x(cplx u, cplx ux) { return 2.0 * std::real(std::conj(u) * ux); }
double mod_x(cplx u, cplx ux)
{
    const double a = std::abs(u);
    return a > 0.0 ? std::real(std::conj(u) * ux) / a : 0.0;
}

struct Ctx {
    const ModelSpec& m;
    const FieldSample& s;
    std::vector<EquationTerms>& out;

    double c(std::size_t i) const { return m.coef[i]; }
    const FieldJet& f(std::size_t i) const { return field(s, i, m); }
    cplx u(std::size_t i) const { return f(i).u; }
    cplx ux(std::size_t i) const { return slot(f(i).ux, "ux", i, m); }
    cplx uxx(std::size_t i) const { return slot(f(i).uxx, "uxx", i, m); }
    cplx uxxx(std::size_t i) const { return slot(f(i).uxxx, "uxxx", i, m); }
    cplx ut(std::size_t i) const { return slot(f(i).ut, "ut", i, m); }
    cplx next(std::size_t i) const { return slot(f(i).next, "next", i, m); }
    cplx prev(std::size_t i) const { return slot(f(i).prev, "prev", i, m); }
    void eq(std::initializer_list<cplx> terms) { out.push_back({std::vector<cplx>(terms)}); }
};

using Residual = std::function<void(Ctx&)>;

const std::map<std::string, Residual>& residual_table()
{
    static const std::map<std::string, Residual> table = {
        {"nls", [](Ctx& x) { x.eq({I * x.ut(0), x.uxx(0), x.c(0) * mod2(x.u(0)) * x.u(0)}); }},
        {"qcnls",
         [](Ctx& x) {
             const cplx u = x.u(0);
             x.eq({I * x.ut(0), x.uxx(0), x.c(0) * mod(u) * u, x.c(1) * mod2(u) * u});
         }},
        {"mkdv", [](Ctx& x) { x.eq({x.ut(0), x.uxxx(0), x.c(0) * x.u(0) * x.u(0) * x.ux(0)}); }},
        {"phi4",
         [](Ctx& x) {
             const cplx p = x.u(0);
             x.eq({x.uxx(0), -x.c(0) * p, -x.c(1) * p * p * p});
         }},
        {"phi234",
         [](Ctx& x) {
             const cplx p = x.u(0);
             x.eq({x.uxx(0), -x.c(0) * p, -x.c(1) * p * p, -x.c(2) * p * p * p});
         }},
        {"kdv-mkdv",
         [](Ctx& x) {
             const cplx u = x.u(0), ux = x.ux(0);
             x.eq({x.ut(0), x.c(0) * x.uxxx(0), x.c(1) * u * u * ux, x.c(2) * u * ux});
         }},
        {"coupled-phi4",
         [](Ctx& x) {
             const cplx p = x.u(0), q = x.u(1);
             const double a1 = x.c(0), a2 = x.c(1), b1 = x.c(2), b2 = x.c(3), g = x.c(4);
             x.eq({x.uxx(0), -2.0 * a1 * p, -4.0 * b1 * p * p * p, -2.0 * g * p * q * q});
             x.eq({x.uxx(1), -2.0 * a2 * q, -4.0 * b2 * q * q * q, -2.0 * g * q * p * p});
         }},
        {"nls-mkdv",
         [](Ctx& x) {
             const cplx u = x.u(0), v = x.u(1);
             const double g = x.c(0), al = x.c(1), ga = x.c(2);
             x.eq({I * x.ut(0), x.uxx(0), g * mod2(u) * u, al * u * v * v});
             x.eq({x.ut(1), x.uxxx(1), 6.0 * v * v * x.ux(1), ga * v * mod2_x(u, x.ux(0))});
         }},
        {"coupled-nls",
         [](Ctx& x) {
             const cplx u = x.u(0), v = x.u(1);
             const double a = x.c(0), b = x.c(1), e = x.c(2), f = x.c(3);
             x.eq({I * x.ut(0), x.uxx(0), a * mod2(u) * u, b * mod2(v) * u});
             x.eq({I * x.ut(1), x.uxx(1), f * mod2(u) * v, e * mod2(v) * v});
         }},
        {"al",
         [](Ctx& x) {
             const cplx u = x.u(0), s = x.next(0) + x.prev(0);
             x.eq({I * x.ut(0), s, x.c(0) * mod2(u) * s});
         }},
        {"saturable-dnls",
         [](Ctx& x) {
             const cplx u = x.u(0);
             const double p = mod2(u);
             x.eq({I * x.ut(0), x.next(0) + x.prev(0), -2.0 * u, x.c(0) * p * u / (1.0 + p)});
         }},
        {"discrete-phi4",
         [](Ctx& x) {
             const cplx p = x.u(0), s = x.next(0) + x.prev(0);
             const double lam = x.c(0), h = x.c(1);
             x.eq({s / (h * h), -2.0 * p / (h * h), lam * p, -0.5 * lam * p * p * s});
         }},
        {"discrete-cubic-quintic",
         [](Ctx& x) {
             const cplx u = x.u(0), s = x.next(0) + x.prev(0);
             const double p = mod2(u);
             x.eq({I * x.ut(0), s, x.c(0) * p * p * s, x.c(1) * p * u});
         }},
        {"discrete-mkdv",
         [](Ctx& x) {
             const cplx u = x.u(0), d = x.next(0) - x.prev(0);
             x.eq({x.ut(0), x.c(0) * d, mod2(u) * d});
         }},
        {"kdv", [](Ctx& x) { x.eq({x.ut(0), x.uxxx(0), x.c(0) * x.u(0) * x.ux(0)}); }},
        {"qnls", [](Ctx& x) { x.eq({I * x.ut(0), x.uxx(0), x.c(0) * mod(x.u(0)) * x.u(0)}); }},
        {"phi3",
         [](Ctx& x) {
             const cplx p = x.u(0);
             x.eq({x.uxx(0), -x.c(0) * p, -x.c(1) * p * p});
         }},
        {"qnls-kdv",
         [](Ctx& x) {
             const cplx u = x.u(0), v = x.u(1);
             const double g = x.c(0), al = x.c(1), ga = x.c(2);
             x.eq({I * x.ut(0), x.uxx(0), g * mod(u) * u, al * u * v});
             x.eq({x.ut(1), x.uxxx(1), 6.0 * v * x.ux(1), ga * v * mod_x(u, x.ux(0))});
         }},
        {"nls-kdv",
         [](Ctx& x) {
             const cplx u = x.u(0), v = x.u(1);
             const double g = x.c(0), al = x.c(1), ga = x.c(2);
             x.eq({I * x.ut(0), x.uxx(0), g * mod2(u) * u, al * u * v});
             x.eq({x.ut(1), x.uxxx(1), 6.0 * v * x.ux(1), ga * v * mod2_x(u, x.ux(0))});
         }},
        {"coupled-kdv-mkdv",
         [](Ctx& x) {
             const cplx u = x.u(0), v = x.u(1);
             const double al = x.c(0), ga = x.c(1);
             x.eq({x.ut(0), x.uxxx(0), 6.0 * u * x.ux(0), 2.0 * al * u * v * x.ux(1)});
             x.eq({x.ut(1), x.uxxx(1), 6.0 * v * v * x.ux(1), ga * v * x.ux(0)});
         }},
        {"qnls-mkdv",
         [](Ctx& x) {
             const cplx u = x.u(0), v = x.u(1);
             const double g = x.c(0), al = x.c(1), ga = x.c(2);
             x.eq({I * x.ut(0), x.uxx(0), g * mod(u) * u, al * u * v * v});
             x.eq({x.ut(1), x.uxxx(1), 6.0 * v * v * x.ux(1), ga * v * mod_x(u, x.ux(0))});
         }},
        {"qnls-nls",
         [](Ctx& x) {
             const cplx u = x.u(0), v = x.u(1);
             const double g1 = x.c(0), g2 = x.c(1), al = x.c(2), ga = x.c(3);
             x.eq({I * x.ut(0), x.uxx(0), g1 * mod(u) * u, al * u * mod2(v)});
             x.eq({I * x.ut(1), x.uxx(1), g2 * mod2(v) * v, ga * v * mod(u)});
         }},
        {"qnls-nls-vx",
         [](Ctx& x) {
             const cplx u = x.u(0), v = x.u(1);
             const double g1 = x.c(0), g2 = x.c(1), al = x.c(2), ga = x.c(3);
             x.eq({I * x.ut(0), x.uxx(0), g1 * mod(u) * u, al * u * mod2(v)});
             x.eq({I * x.ut(1), x.uxx(1), g2 * mod2(v) * x.ux(1), ga * v * mod(u)});
         }},
    };
    return table;
}

}  // namespace

const char* kind_name(Kind k)
{
    switch (k) {
        case Kind::ContinuumReal: return "continuum-real";
        case Kind::ContinuumComplex: return "continuum-complex";
        case Kind::LatticeComplex: return "lattice-complex";
        case Kind::LatticeRealStatic: return "lattice-real-static";
        case Kind::Coupled: return "coupled";
    }
    return "?";
}

double ModelSpec::operator[](std::string_view name) const
{
    auto it = coefficients.find(std::string(name));
    if (it == coefficients.end()) throw UsageError("model " + id + " has no coefficient " + std::string(name));
    return it->second;
}

bool ModelSpec::is_lattice() const
{
    return kind == Kind::LatticeComplex || kind == Kind::LatticeRealStatic;
}

bool ModelSpec::time_dependent() const
{
    for (FieldKind f : tmpl->fields) {
        if (f == FieldKind::Static || f == FieldKind::LatticeStatic) return false;
    }
    return true;
}

cplx EquationTerms::sum() const
{
    cplx s{};
    for (const cplx& t : terms) s += t;
    return s;
}

double EquationTerms::scale() const
{
    double s = 0.0;
    for (const cplx& t : terms) s = std::max(s, std::abs(t));
    return s;
}

const std::vector<ModelTemplate>& registry()
{
    static const std::vector<ModelTemplate> r = build_registry();
    return r;
}

const ModelTemplate& find_model(std::string_view query)
{
    const std::string q = lower(query);
    for (const auto& t : registry()) {
        if (t.id == q || lower(t.display) == q) return t;
        for (const auto& a : t.aliases) {
            if (a == q) return t;
        }
    }
    throw UsageError("unknown model '" + std::string(query) + "'");
}

ModelSpec make_model(std::string_view id, const std::map<std::string, double>& values)
{
    const ModelTemplate& t = find_model(id);
    ModelSpec m;
    m.id = t.id;
    m.kind = t.kind;
    m.field_count = static_cast<int>(t.fields.size());
    m.tmpl = &t;
    std::string missing;
    for (const auto& name : t.coefficients) {
        auto it = values.find(name);
        if (it == values.end()) {
            missing += (missing.empty() ? "" : ", ") + name;
            continue;
        }
        m.coefficients[name] = it->second;
        m.coef.push_back(it->second);
    }
    if (!missing.empty()) throw UsageError("model " + t.id + " is missing coefficient(s): " + missing);
    return m;
}

std::vector<EquationTerms> residual_terms(const ModelSpec& model, const FieldSample& sample)
{
    std::vector<EquationTerms> out;
    out.reserve(2);
    Ctx ctx{model, sample, out};
    residual_table().at(model.id)(ctx);
    return out;
}

std::vector<cplx> residual_at(const ModelSpec& model, const FieldSample& sample)
{
    std::vector<cplx> r;
    for (const auto& e : residual_terms(model, sample)) r.push_back(e.sum());
    return r;
}

std::string documentation_table()
{
    std::ostringstream os;
    os << "| model | equation | kind | coefficients | residual form |\n|---|---|---|---|---|\n";
    for (const auto& t : registry()) {
        os << "| " << t.id << " | " << t.equation << " | " << kind_name(t.kind) << " | ";
        for (std::size_t i = 0; i < t.coefficients.size(); ++i) os << (i ? ", " : "") << t.coefficients[i];
        os << " | " << t.form << " |\n";
    }
    return os.str();
}

}  // namespace ellwave::models
