#include "ellwave/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <numbers>
#include <ostream>
#include <random>
#include <set>

#include "ellwave/errors.hpp"
#include "ellwave/spectral.hpp"

namespace ellwave::evolve {

namespace {

const cplx I{0.0, 1.0};
using models::FieldKind;

// Models whose pointwise nonlinearity only rotates the phase of each Schroedinger field.
const std::set<std::string> kPhaseOnly = {"nls", "qcnls", "qnls", "coupled-nls", "qnls-nls"};

models::FieldSample zero_sample(int nf)
{
    models::FieldSample s;
    models::FieldJet j;
    j.u = 0.0;
    j.ux = j.uxx = j.uxxx = j.ut = cplx{};
    j.next = j.prev = cplx{};
    s.fields.assign(nf, j);
    return s;
}

std::string field_letter(int f, int nf) { return nf == 1 ? "" : std::string("_") + "uvwxyz"[f % 6]; }

struct System {
    models::ModelSpec model;
    int nf = 1;
    int n = 0;
    bool lattice = false;
    double length = 0.0;
    double h = 1.0;
    std::vector<double> k;
    std::vector<FieldKind> kinds;
    std::vector<cplx> ct;  // coefficient of the time derivative in each equation
    std::vector<double> xs;
    std::vector<std::vector<cplx>> phase;  // exp(i k_f x_j)
    std::vector<double> kappa;
    std::vector<std::vector<cplx>> symbol;  // linear part in Fourier space, shifted by k_f
    std::vector<bool> keep;                 // 2/3-rule mask
    std::unique_ptr<spectral::Fft> fft;

    bool real(int f) const { return kinds[f] == FieldKind::Kdv; }

    System(const InitialData& d) : model(d.model), lattice(d.lattice)
    {
        nf = model.field_count;
        if (static_cast<int>(d.w.size()) != nf) throw UsageError("initial data has the wrong number of fields");
        n = static_cast<int>(d.w[0].size());
        for (const auto& w : d.w) {
            if (static_cast<int>(w.size()) != n) throw UsageError("initial fields differ in length");
        }
        kinds = model.tmpl->fields;
        for (FieldKind fk : kinds) {
            if (fk == FieldKind::Static || fk == FieldKind::LatticeStatic) {
                throw UsageError("model " + model.id + " is static; check it with verify instead");
            }
        }
        if (lattice != model.is_lattice()) throw UsageError("initial data and model disagree on lattice vs continuum");
        k = d.k.empty() ? std::vector<double>(nf, 0.0) : d.k;
        if (static_cast<int>(k.size()) != nf) throw UsageError("one Bloch wavenumber per field expected");
        length = lattice ? n : d.length;
        if (!(length > 0.0)) throw UsageError("domain length must be positive");
        h = length / n;
        for (int j = 0; j < n; ++j) xs.push_back(lattice ? j : h * j);
        phase.resize(nf);
        for (int f = 0; f < nf; ++f) {
            for (int j = 0; j < n; ++j) phase[f].push_back(std::exp(I * k[f] * xs[j]));
        }
        for (int f = 0; f < nf; ++f) {
            auto s = zero_sample(nf);
            s.fields[f].ut = 1.0;
            ct.push_back(models::residual_terms(model, s)[f].terms[0]);
        }
        if (lattice) return;
        if (n < 16) throw UsageError("grid needs at least 16 points");
        fft = std::make_unique<spectral::Fft>(n);
        kappa = spectral::wavenumbers(n, length);
        for (int f = 0; f < nf; ++f) {
            auto s = zero_sample(nf);
            const int order = kinds[f] == FieldKind::Kdv ? 3 : 2;
            (order == 3 ? s.fields[f].uxxx : s.fields[f].uxx) = 1.0;
            const cplx lin = models::residual_terms(model, s)[f].terms[1];
            std::vector<cplx> sym(n);
            for (int j = 0; j < n; ++j) {
                const double q = (n % 2 == 0 && j == n / 2 && order == 3) ? 0.0 : kappa[j] + k[f];
                sym[j] = -lin * std::pow(I * q, order) / ct[f];
            }
            symbol.push_back(std::move(sym));
        }
        for (int j = 0; j < n; ++j) {
            const int idx = j <= n / 2 ? j : n - j;
            keep.push_back(3 * idx < n);
        }
    }

    // Time derivative of w minus the linear part (continuum), or the full time derivative (lattice).
    Fields nonlinear(const Fields& w) const
    {
        Fields out(nf, std::vector<cplx>(n));
        Fields u(nf), ux(nf);
        for (int f = 0; f < nf; ++f) {
            u[f].resize(n);
            for (int j = 0; j < n; ++j) u[f][j] = w[f][j] * phase[f][j];
            if (!lattice) {
                const auto wx = spectral::derivative(*fft, w[f], length, 1);
                ux[f].resize(n);
                for (int j = 0; j < n; ++j) ux[f][j] = (wx[j] + I * k[f] * w[f][j]) * phase[f][j];
            }
            if (real(f)) {
                for (auto& v : u[f]) v = v.real();
                for (auto& v : ux[f]) v = v.real();
            }
        }
        auto s = zero_sample(nf);
        for (int j = 0; j < n; ++j) {
            for (int f = 0; f < nf; ++f) {
                auto& jet = s.fields[f];
                jet.u = u[f][j];
                if (lattice) {
                    const int jn = (j + 1) % n, jp = (j + n - 1) % n;
                    jet.next = w[f][jn] * std::exp(I * k[f] * (xs[j] + 1.0));
                    jet.prev = w[f][jp] * std::exp(I * k[f] * (xs[j] - 1.0));
                } else {
                    jet.ux = ux[f][j];
                }
            }
            const auto terms = models::residual_terms(model, s);
            for (int f = 0; f < nf; ++f) {
                cplx sum{};
                const auto& t = terms[f].terms;
                for (std::size_t i = lattice ? 1 : 2; i < t.size(); ++i) sum += t[i];
                cplx r = -sum / ct[f] * std::conj(phase[f][j]);
                if (real(f)) r = r.real();
                out[f][j] = r;
            }
        }
        return out;
    }

    Fields physical(const Fields& w) const
    {
        Fields u(nf, std::vector<cplx>(n));
        for (int f = 0; f < nf; ++f) {
            for (int j = 0; j < n; ++j) {
                u[f][j] = w[f][j] * phase[f][j];
                if (real(f)) u[f][j] = u[f][j].real();
            }
        }
        return u;
    }
};

std::vector<Quantity> quantity_names(const System& s)
{
    std::vector<Quantity> q;
    for (int f = 0; f < s.nf; ++f) {
        const std::string suffix = field_letter(f, s.nf);
        if (s.lattice) {
            q.push_back({s.model.id == "al" ? "log_norm" + suffix : "norm" + suffix, {}, 0.0});
        } else if (s.real(f)) {
            q.push_back({"mean" + suffix, {}, 0.0});
            q.push_back({"l2_norm" + suffix, {}, 0.0});
        } else {
            q.push_back({"l2_norm" + suffix, {}, 0.0});
        }
    }
    return q;
}

void record_quantities(const System& s, const Fields& u, std::vector<Quantity>& q)
{
    std::size_t i = 0;
    for (int f = 0; f < s.nf; ++f) {
        if (s.lattice) {
            double sum = 0.0;
            const double g = s.model.id == "al" ? s.model["g"] : 0.0;
            for (const auto& v : u[f]) sum += g != 0.0 ? std::log1p(g * std::norm(v)) / g : std::norm(v);
            if (q[i].values.empty()) q[i].reference = std::abs(sum);
            q[i++].values.push_back(sum);
            continue;
        }
        if (s.real(f)) {
            double mean = 0.0, l1 = 0.0;
            for (const auto& v : u[f]) {
                mean += v.real() * s.h;
                l1 += std::abs(v) * s.h;
            }
            if (q[i].values.empty()) q[i].reference = l1;
            q[i++].values.push_back(mean);
        }
        double l2 = 0.0;
        for (const auto& v : u[f]) l2 += std::norm(v) * s.h;
        if (q[i].values.empty()) q[i].reference = l2;
        q[i++].values.push_back(l2);
    }
}

double relative_error(const Fields& u, const Fields& exact)
{
    double num = 0.0, den = 0.0;
    for (std::size_t f = 0; f < u.size(); ++f) {
        for (std::size_t j = 0; j < u[f].size(); ++j) {
            num += std::norm(u[f][j] - exact[f][j]);
            den += std::norm(exact[f][j]);
        }
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

void axpy(Fields& y, const Fields& x, cplx a)
{
    for (std::size_t f = 0; f < y.size(); ++f) {
        for (std::size_t j = 0; j < y[f].size(); ++j) y[f][j] += a * x[f][j];
    }
}

Fields to_hat(const System& s, const Fields& w)
{
    Fields out(s.nf);
    for (int f = 0; f < s.nf; ++f) s.fft->forward(w[f], out[f]);
    return out;
}

Fields from_hat(const System& s, const Fields& hat)
{
    Fields out(s.nf);
    for (int f = 0; f < s.nf; ++f) s.fft->inverse(hat[f], out[f]);
    return out;
}

// Rate of the fastest nonlinear mode at t = 0: advection by d N / d u_x at the highest kept wavenumber
// plus the local rate d N / d u.
double nonlinear_rate(const System& s, const Fields& w)
{
    const auto u = s.physical(w);
    Fields ux(s.nf);
    for (int f = 0; f < s.nf; ++f) {
        const auto wx = spectral::derivative(*s.fft, w[f], s.length, 1);
        ux[f].resize(s.n);
        for (int j = 0; j < s.n; ++j) ux[f][j] = (wx[j] + I * s.k[f] * w[f][j]) * s.phase[f][j];
    }
    double kmax = 0.0;
    for (int j = 0; j < s.n; ++j) {
        if (s.keep[j]) kmax = std::max(kmax, std::abs(s.kappa[j]));
    }
    double rate = 0.0;
    auto sample = zero_sample(s.nf);
    auto eval = [&](int f) {
        cplx sum{};
        const auto t = models::residual_terms(s.model, sample)[f].terms;
        for (std::size_t i = 2; i < t.size(); ++i) sum += t[i];
        return sum / s.ct[f];
    };
    for (int j = 0; j < s.n; ++j) {
        for (int f = 0; f < s.nf; ++f) {
            sample.fields[f].u = u[f][j];
            sample.fields[f].ux = ux[f][j];
        }
        for (int f = 0; f < s.nf; ++f) {
            const double du = 1e-6 * std::max(1.0, std::abs(u[f][j]));
            const double dx = 1e-6 * std::max(1.0, std::abs(*sample.fields[f].ux));
            const cplx u0 = sample.fields[f].u, x0 = *sample.fields[f].ux;
            const cplx base = eval(f);
            sample.fields[f].ux = x0 + dx;
            const double adv = std::abs(eval(f) - base) / dx;
            sample.fields[f].ux = x0;
            sample.fields[f].u = u0 + du;
            const double loc = std::abs(eval(f) - base) / du;
            sample.fields[f].u = u0;
            rate = std::max(rate, adv * kmax + loc);
        }
    }
    return rate;
}

ExactFn exact_of(const catalog::Ansatz& a, const std::vector<double>& xs)
{
    return [a, xs](double t) {
        Fields out(a.fields.size(), std::vector<cplx>(xs.size()));
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const auto v = catalog::evaluate_profile(a, xs[j], t);
            for (std::size_t f = 0; f < v.size(); ++f) out[f][j] = v[f];
        }
        return out;
    };
}

InitialData data_of(const catalog::ClosedSolution& sol, int n, double length, std::vector<double>& xs)
{
    const auto a = catalog::ansatz(sol);
    InitialData d;
    d.model = catalog::model_of(sol);
    d.lattice = a.lattice;
    d.length = length;
    xs.clear();
    for (int j = 0; j < n; ++j) xs.push_back(a.lattice ? j : length * j / n);
    for (const auto& f : a.fields) d.k.push_back(f.complex ? f.k : 0.0);
    const auto u0 = exact_of(a, xs)(0.0);
    d.w = u0;
    for (std::size_t f = 0; f < d.w.size(); ++f) {
        for (int j = 0; j < n; ++j) d.w[f][j] *= std::exp(-I * d.k[f] * xs[j]);
    }
    return d;
}

double continuum_length(const catalog::ClosedSolution& sol, const verify::GridSpec& grid)
{
    if (grid.points < 16) throw UsageError("grid needs at least 16 points");
    if (grid.period_multiples < 1) throw UsageError("grid needs a positive number of periods");
    try {
        return grid.period_multiples * catalog::fundamental_period(sol);
    } catch (const AperiodicError&) {
        throw UsageError("m = 1 solutions have no finite period to evolve on");
    }
}

}  // namespace

const char* integrator_name(Integrator i)
{
    switch (i) {
        case Integrator::SplitStep: return "split-step";
        case Integrator::IntegratingFactorRk4: return "integrating-factor-rk4";
        case Integrator::LatticeRk4: return "lattice-rk4";
    }
    return "?";
}

double EvolutionResult::max_drift() const
{
    double d = 0.0;
    for (const auto& q : quantities) d = std::max(d, q.drift);
    return d;
}

Integrator integrator_for(const models::ModelSpec& model)
{
    bool kdv = false;
    for (FieldKind f : model.tmpl->fields) {
        if (f == FieldKind::Static || f == FieldKind::LatticeStatic) {
            throw UsageError("model " + model.id + " is static; check it with verify instead");
        }
        if (f == FieldKind::Kdv) kdv = true;
    }
    if (model.is_lattice()) return Integrator::LatticeRk4;
    return kdv ? Integrator::IntegratingFactorRk4 : Integrator::SplitStep;
}

double nearest_admissible_k(double k, double length)
{
    if (!(length > 0.0)) throw UsageError("domain length must be positive");
    const double base = 2.0 * std::numbers::pi / length;
    return base * std::round(k / base);
}

EvolutionResult evolve_data(const InitialData& data, Integrator integrator, double dt, double T, int samples,
                            const ExactFn& exact)
{
    if (!(dt > 0.0)) throw UsageError("time step must be positive");
    if (!(T >= 0.0)) throw UsageError("final time must be non-negative");
    if (samples < 1) throw UsageError("at least one sample interval is needed");
    const System s(data);
    const bool lattice_integrator = integrator == Integrator::LatticeRk4;
    if (lattice_integrator != s.lattice) throw UsageError("integrator does not fit the model");
    if (integrator == Integrator::SplitStep) {
        for (FieldKind f : s.kinds) {
            if (f != FieldKind::Schrodinger) throw UsageError("split-step needs Schroedinger fields only");
        }
        if (dt > s.h * s.h / 4.0) {
            throw UsageError("time step " + std::to_string(dt) + " exceeds the stability bound (L/N)^2/4 = " +
                             std::to_string(s.h * s.h / 4.0));
        }
    }
    if (integrator == Integrator::IntegratingFactorRk4) {
        const double rate = nonlinear_rate(s, data.w);
        if (dt * rate > 2.5) {
            throw UsageError("time step " + std::to_string(dt) + " exceeds the nonlinear stability bound " +
                             std::to_string(2.5 / rate));
        }
    }
    if (lattice_integrator && dt > 1e-3) throw UsageError("lattice time step must not exceed 1e-3");

    EvolutionResult r;
    r.integrator = integrator;
    r.lattice = s.lattice;
    r.length = s.length;
    r.xs = s.xs;
    const int steps = T > 0.0 ? static_cast<int>(std::ceil(T / dt - 1e-9)) : 0;
    r.steps = steps;
    r.dt = steps > 0 ? T / steps : dt;
    const double h = r.dt;
    r.quantities = quantity_names(s);
    r.initial = s.physical(data.w);

    std::vector<int> marks;
    for (int i = 0; i <= samples; ++i) marks.push_back(static_cast<int>(std::llround(static_cast<double>(i) * steps / samples)));
    marks.erase(std::unique(marks.begin(), marks.end()), marks.end());

    Fields w = data.w;
    auto record = [&](int step) {
        const double t = step * h;
        const auto u = s.physical(w);
        r.times.push_back(t);
        if (exact) r.errors.push_back(relative_error(u, exact(t)));
        record_quantities(s, u, r.quantities);
    };

    // Linear propagators for the split-step and integrating-factor schemes.
    Fields half(s.nf), full(s.nf);
    if (!s.lattice) {
        for (int f = 0; f < s.nf; ++f) {
            for (int j = 0; j < s.n; ++j) {
                half[f].push_back(std::exp(s.symbol[f][j] * (h / 2.0)));
                full[f].push_back(std::exp(s.symbol[f][j] * h));
            }
        }
    }
    auto apply = [&](Fields& hat, const Fields& e) {
        for (int f = 0; f < s.nf; ++f) {
            for (int j = 0; j < s.n; ++j) hat[f][j] *= e[f][j];
        }
    };
    const bool phase_only = kPhaseOnly.count(s.model.id) > 0;

    auto split_step = [&] {
        Fields hat = to_hat(s, w);
        apply(hat, half);
        w = from_hat(s, hat);
        if (phase_only) {
            const auto rate = s.nonlinear(w);
            for (int f = 0; f < s.nf; ++f) {
                for (int j = 0; j < s.n; ++j) {
                    if (std::abs(w[f][j]) == 0.0) continue;
                    w[f][j] *= std::exp(I * (rate[f][j] / w[f][j]).imag() * h);
                }
            }
        } else {
            Fields mid = w;
            axpy(mid, s.nonlinear(w), h / 2.0);
            axpy(w, s.nonlinear(mid), h);
        }
        hat = to_hat(s, w);
        apply(hat, half);
        w = from_hat(s, hat);
    };

    auto nhat = [&](const Fields& hat) {
        Fields out = to_hat(s, s.nonlinear(from_hat(s, hat)));
        for (int f = 0; f < s.nf; ++f) {
            for (int j = 0; j < s.n; ++j) {
                if (!s.keep[j]) out[f][j] = 0.0;
            }
        }
        return out;
    };
    auto if_rk4 = [&] {
        Fields v = to_hat(s, w);
        const Fields k1 = nhat(v);
        Fields a = v;
        axpy(a, k1, h / 2.0);
        apply(a, half);
        const Fields k2 = nhat(a);
        Fields b = v;
        apply(b, half);
        Fields ev = b;
        axpy(b, k2, h / 2.0);
        const Fields k3 = nhat(b);
        Fields c = ev;
        apply(c, half);
        Fields k3e = k3;
        apply(k3e, half);
        axpy(c, k3e, h);
        const Fields k4 = nhat(c);
        Fields next = v;
        apply(next, full);
        Fields t1 = k1;
        apply(t1, full);
        Fields t23 = k2;
        axpy(t23, k3, 1.0);
        apply(t23, half);
        axpy(next, t1, h / 6.0);
        axpy(next, t23, h / 3.0);
        axpy(next, k4, h / 6.0);
        w = from_hat(s, next);
    };

    auto lattice_rk4 = [&] {
        const Fields k1 = s.nonlinear(w);
        Fields a = w;
        axpy(a, k1, h / 2.0);
        const Fields k2 = s.nonlinear(a);
        Fields b = w;
        axpy(b, k2, h / 2.0);
        const Fields k3 = s.nonlinear(b);
        Fields c = w;
        axpy(c, k3, h);
        const Fields k4 = s.nonlinear(c);
        axpy(w, k1, h / 6.0);
        axpy(w, k2, h / 3.0);
        axpy(w, k3, h / 3.0);
        axpy(w, k4, h / 6.0);
    };

    std::size_t next_mark = 0;
    for (int step = 0; step <= steps; ++step) {
        if (next_mark < marks.size() && marks[next_mark] == step) {
            record(step);
            ++next_mark;
        }
        if (step == steps) break;
        switch (integrator) {
            case Integrator::SplitStep: split_step(); break;
            case Integrator::IntegratingFactorRk4: if_rk4(); break;
            case Integrator::LatticeRk4: lattice_rk4(); break;
        }
    }
    r.final_fields = s.physical(w);
    for (auto& q : r.quantities) {
        const double q0 = q.values.front();
        for (double v : q.values) q.drift = std::max(q.drift, std::abs(v - q0) / (q.reference > 0.0 ? q.reference : 1.0));
    }
    return r;
}

EvolutionResult evolve_schrodinger(const catalog::ClosedSolution& sol, const verify::GridSpec& grid, double dt,
                                   double T, int samples)
{
    const auto model = catalog::model_of(sol);
    if (model.is_lattice()) throw UsageError("model " + model.id + " is a lattice; use the lattice integrator");
    for (FieldKind f : model.tmpl->fields) {
        if (f != FieldKind::Schrodinger) {
            throw UsageError("model " + model.id + " is not of Schroedinger type; use the KdV-family integrator");
        }
    }
    const double L = continuum_length(sol, grid);
    std::vector<double> xs;
    const auto data = data_of(sol, grid.points, L, xs);
    return evolve_data(data, Integrator::SplitStep, dt, T, samples, exact_of(catalog::ansatz(sol), xs));
}

EvolutionResult evolve_kdv_family(const catalog::ClosedSolution& sol, const verify::GridSpec& grid, double dt,
                                  double T, int samples)
{
    const auto model = catalog::model_of(sol);
    if (integrator_for(model) != Integrator::IntegratingFactorRk4) {
        throw UsageError("model " + model.id + " has no third-derivative field");
    }
    const double L = continuum_length(sol, grid);
    std::vector<double> xs;
    const auto data = data_of(sol, grid.points, L, xs);
    return evolve_data(data, Integrator::IntegratingFactorRk4, dt, T, samples, exact_of(catalog::ansatz(sol), xs));
}

EvolutionResult evolve_lattice(const catalog::ClosedSolution& sol, int sites, double dt, double T, int samples)
{
    const auto model = catalog::model_of(sol);
    if (!model.is_lattice()) throw UsageError("model " + model.id + " is not a lattice");
    if (integrator_for(model) != Integrator::LatticeRk4) throw UsageError("model " + model.id + " is static");
    if (sites < 3) throw UsageError("lattice needs at least 3 sites");
    const auto a = catalog::ansatz(sol);
    double period = 0.0;
    try {
        period = catalog::fundamental_period(a);
    } catch (const AperiodicError&) {
        throw UsageError("m = 1 lattice solutions do not wrap around a finite ring");
    }
    const double wraps = sites / period;
    if (std::round(wraps) < 1.0 || std::abs(wraps - std::round(wraps)) > 1e-9 * std::max(1.0, wraps)) {
        throw UsageError("ring of " + std::to_string(sites) + " sites holds " + std::to_string(wraps) +
                         " periods; beta * N must be a multiple of the envelope period in sites");
    }
    std::vector<double> xs;
    const auto data = data_of(sol, sites, sites, xs);
    return evolve_data(data, Integrator::LatticeRk4, dt, T, samples, exact_of(a, xs));
}

EvolutionResult evolve_solution(const catalog::ClosedSolution& sol, const verify::GridSpec& grid, double dt, double T,
                                int samples)
{
    switch (integrator_for(catalog::model_of(sol))) {
        case Integrator::SplitStep: return evolve_schrodinger(sol, grid, dt, T, samples);
        case Integrator::IntegratingFactorRk4: return evolve_kdv_family(sol, grid, dt, T, samples);
        case Integrator::LatticeRk4: return evolve_lattice(sol, grid.points, dt, T, samples);
    }
    throw UsageError("no integrator");
}

double suggested_dt(const catalog::ClosedSolution& sol, const verify::GridSpec& grid)
{
    const auto integ = integrator_for(catalog::model_of(sol));
    if (integ == Integrator::LatticeRk4) return 1e-4;
    const double L = continuum_length(sol, grid);
    if (integ == Integrator::SplitStep) return (L / grid.points) * (L / grid.points) / 8.0;
    std::vector<double> xs;
    const auto data = data_of(sol, grid.points, L, xs);
    return 0.25 / nonlinear_rate(System(data), data.w);
}

double measured_speed(const EvolutionResult& r, int field)
{
    if (r.lattice) throw UsageError("speed estimation needs a continuum profile");
    if (field < 0 || field >= static_cast<int>(r.initial.size())) throw UsageError("no such field");
    if (r.times.empty() || r.times.back() <= 0.0) throw UsageError("speed estimation needs a positive elapsed time");
    const int n = static_cast<int>(r.xs.size());
    const bool complex = std::any_of(r.initial[field].begin(), r.initial[field].end(),
                                     [](const cplx& v) { return v.imag() != 0.0; });
    auto profile = [&](const std::vector<cplx>& u) {
        std::vector<cplx> p(n);
        for (int j = 0; j < n; ++j) p[j] = complex ? std::norm(u[j]) : u[j].real();
        return p;
    };
    spectral::Fft fft(n);
    std::vector<cplx> a, b;
    fft.forward(profile(r.initial[field]), a);
    fft.forward(profile(r.final_fields[field]), b);
    const auto kappa = spectral::wavenumbers(n, r.length);
    std::vector<cplx> c(n);
    for (int j = 1; j < n; ++j) {
        if (n % 2 == 0 && j == n / 2) continue;
        c[j] = std::conj(a[j]) * b[j];
    }
    auto derivs = [&](double s, int order) {
        cplx sum{};
        for (int j = 0; j < n; ++j) sum += c[j] * std::pow(I * kappa[j], order) * std::exp(I * kappa[j] * s);
        return sum.real();
    };
    const int scan = 8 * n;
    double best = 0.0, best_value = -INFINITY;
    for (int i = 0; i < scan; ++i) {
        const double s = r.length * i / scan;
        const double v = derivs(s, 0);
        if (v > best_value) {
            best_value = v;
            best = s;
        }
    }
    for (int it = 0; it < 30; ++it) {
        const double d2 = derivs(best, 2);
        if (d2 >= 0.0) break;
        const double step = derivs(best, 1) / d2;
        best -= step;
        if (std::abs(step) < 1e-15 * r.length) break;
    }
    best = std::remainder(best, r.length);
    return best / r.times.back();
}

ProbeResult perturbation_probe(const catalog::ClosedSolution& sol, double epsilon, double T, int modes,
                               const ProbeOptions& o)
{
    if (!(epsilon >= 0.0)) throw UsageError("epsilon must be non-negative");
    if (modes < 1) throw UsageError("at least one perturbation mode is needed");
    const auto model = catalog::model_of(sol);
    const Integrator integ = integrator_for(model);
    const auto a = catalog::ansatz(sol);
    const int n = o.grid.points;
    double L = 0.0;
    if (integ == Integrator::LatticeRk4) {
        L = n;
        const double wraps = n / catalog::fundamental_period(a);
        if (std::abs(wraps - std::round(wraps)) > 1e-9 * std::max(1.0, wraps) || std::round(wraps) < 1.0) {
            throw UsageError("ring of " + std::to_string(n) + " sites does not hold a whole number of periods");
        }
    } else {
        L = continuum_length(sol, o.grid);
    }
    std::vector<double> xs;
    const auto base = data_of(sol, n, L, xs);
    double dt = o.dt;
    if (dt <= 0.0) {
        const double h = L / n;
        if (integ == Integrator::SplitStep) dt = h * h / 5.0;
        else if (integ == Integrator::LatticeRk4) dt = 5e-4;
        else dt = 1.0 / nonlinear_rate(System(base), base.w);
    }
    const double cell = integ == Integrator::LatticeRk4 ? 1.0 : L / n;

    ProbeResult out;
    out.epsilon = epsilon;
    out.T = T;
    out.modes.resize(modes);
    std::vector<EvolutionResult> runs(modes + 1);
    std::vector<double> initial(modes, 0.0);
    verify::parallel_for(modes + 1, o.threads, [&](int i) {
        InitialData d = base;
        if (i == modes) {
            runs[i] = evolve_data(d, integ, dt, T, 1, exact_of(a, xs));
            return;
        }
        const int mode = i + 1;
        std::mt19937_64 rng(o.seed * 1000003ULL + static_cast<unsigned long long>(mode));
        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        for (std::size_t f = 0; f < d.w.size(); ++f) {
            const double phi = angle(rng);
            const bool real = model.tmpl->fields[f] == FieldKind::Kdv;
            for (int j = 0; j < n; ++j) {
                const double arg = 2.0 * std::numbers::pi * mode * xs[j] / L + phi;
                const cplx delta = epsilon * (real ? cplx(std::cos(arg), 0.0) : std::exp(I * arg));
                d.w[f][j] += delta;
                initial[i] += std::norm(delta) * cell;
            }
        }
        runs[i] = evolve_data(d, integ, dt, T, 1);
    });
    const auto& ref = runs[modes];
    out.dt = ref.dt;
    out.reference_error = ref.final_error();
    for (int i = 0; i < modes; ++i) {
        double n1 = 0.0;
        for (std::size_t f = 0; f < ref.final_fields.size(); ++f) {
            for (int j = 0; j < n; ++j) n1 += std::norm(runs[i].final_fields[f][j] - ref.final_fields[f][j]) * cell;
        }
        ProbeMode& pm = out.modes[i];
        pm.mode = i + 1;
        pm.initial_norm = std::sqrt(initial[i]);
        pm.final_norm = std::sqrt(n1);
        pm.growth = initial[i] > 0.0 ? pm.final_norm / pm.initial_norm : 0.0;
    }
    return out;
}

namespace {

std::string num(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_series_csv(const EvolutionResult& r, std::ostream& out)
{
    out << "t,l2_error";
    for (const auto& q : r.quantities) out << ',' << q.name;
    out << '\n';
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        out << num(r.times[i]) << ',' << (r.errors.empty() ? "" : num(r.errors[i]));
        for (const auto& q : r.quantities) out << ',' << num(q.values[i]);
        out << '\n';
    }
}

void write_profile_csv(const EvolutionResult& r, std::ostream& out)
{
    out << (r.lattice ? "n" : "x") << ",field,real,imag\n";
    for (std::size_t f = 0; f < r.final_fields.size(); ++f) {
        for (std::size_t j = 0; j < r.xs.size(); ++j) {
            out << num(r.xs[j]) << ',' << f << ',' << num(r.final_fields[f][j].real()) << ','
                << num(r.final_fields[f][j].imag()) << '\n';
        }
    }
}

}  // namespace ellwave::evolve
