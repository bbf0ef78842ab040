#include "ellwave/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "ellwave/errors.hpp"
#include "ellwave/spectral.hpp"

namespace ellwave::verify {

using catalog::Ansatz;
using cplx = std::complex<double>;

namespace {

const cplx I{0.0, 1.0};

std::vector<cplx> periodic_fd(const std::vector<cplx>& f, double h, int order)
{
    const int n = static_cast<int>(f.size());
    auto at = [&](int j) { return f[((j % n) + n) % n]; };
    std::vector<cplx> d(n);
    for (int j = 0; j < n; ++j) {
        switch (order) {
            case 1:
                d[j] = (-at(j + 2) + 8.0 * at(j + 1) - 8.0 * at(j - 1) + at(j - 2)) / (12.0 * h);
                break;
            case 2:
                d[j] = (-at(j + 2) + 16.0 * at(j + 1) - 30.0 * at(j) + 16.0 * at(j - 1) - at(j - 2)) / (12.0 * h * h);
                break;
            default:
                d[j] = (-at(j + 3) + 8.0 * at(j + 2) - 13.0 * at(j + 1) + 13.0 * at(j - 1) - 8.0 * at(j - 2) +
                        at(j - 3)) /
                       (8.0 * h * h * h);
        }
    }
    return d;
}

// Samples with derivatives taken numerically from grid values of the field.
std::vector<models::FieldSample> sampled_jets(const Ansatz& a, const std::vector<double>& xs, double length, double t,
                                              Method method)
{
    const int n = static_cast<int>(xs.size());
    std::vector<models::FieldSample> out(n);
    std::vector<std::vector<cplx>> values(n);
    for (int j = 0; j < n; ++j) values[j] = catalog::evaluate_profile(a, xs[j], t);
    std::unique_ptr<spectral::Fft> fft;
    if (method == Method::Spectral && !a.lattice) fft = std::make_unique<spectral::Fft>(n);
    for (std::size_t fi = 0; fi < a.fields.size(); ++fi) {
        const auto& f = a.fields[fi];
        const double k = f.complex ? f.k : 0.0;
        const double w = f.complex ? f.omega : 0.0;
        std::vector<cplx> g(n);
        for (int j = 0; j < n; ++j) g[j] = values[j][fi] * std::exp(-I * k * xs[j]);
        if (a.lattice) {
            for (int j = 0; j < n; ++j) {
                const auto exact = catalog::analytic_sample(a, xs[j], t).fields[fi];
                models::FieldJet fj;
                fj.u = values[j][fi];
                fj.ut = exact.ut;
                fj.next = g[(j + 1) % n] * std::exp(I * k * (xs[j] + 1.0));
                fj.prev = g[(j + n - 1) % n] * std::exp(I * k * (xs[j] - 1.0));
                out[j].fields.push_back(fj);
            }
            continue;
        }
        std::vector<cplx> d1, d2, d3;
        if (fft) {
            d1 = spectral::derivative(*fft, g, length, 1);
            d2 = spectral::derivative(*fft, g, length, 2);
            d3 = spectral::derivative(*fft, g, length, 3);
        } else {
            const double h = length / n;
            d1 = periodic_fd(g, h, 1);
            d2 = periodic_fd(g, h, 2);
            d3 = periodic_fd(g, h, 3);
        }
        for (int j = 0; j < n; ++j) {
            const cplx E = std::exp(I * k * xs[j]);
            models::FieldJet fj;
            fj.u = values[j][fi];
            fj.ux = (d1[j] + I * k * g[j]) * E;
            fj.uxx = (d2[j] + 2.0 * I * k * d1[j] - k * k * g[j]) * E;
            fj.uxxx = (d3[j] + 3.0 * I * k * d2[j] - 3.0 * k * k * d1[j] - I * k * k * k * g[j]) * E;
            fj.ut = (-a.velocity * d1[j] - I * w * g[j]) * E;
            out[j].fields.push_back(fj);
        }
    }
    return out;
}

}  // namespace

const char* method_name(Method m)
{
    switch (m) {
        case Method::Analytic: return "analytic-derivative";
        case Method::Spectral: return "spectral-derivative";
        case Method::FiniteDifference: return "finite-difference";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name)
{
    if (name == "analytic" || name == "analytic-derivative") return Method::Analytic;
    if (name == "spectral" || name == "spectral-derivative") return Method::Spectral;
    if (name == "fd" || name == "finite-difference") return Method::FiniteDifference;
    return std::nullopt;
}

ResidualReport residual_report(const Ansatz& a, const models::ModelSpec& model, const GridSpec& grid, Method method,
                               std::vector<double> times)
{
    if (grid.points < 16) throw UsageError("grid needs at least 16 points");
    if (grid.period_multiples < 1) throw UsageError("grid needs a positive number of periods");
    if (static_cast<int>(a.fields.size()) != model.field_count) {
        throw UsageError("ansatz has " + std::to_string(a.fields.size()) + " field(s), model " + model.id + " needs " +
                         std::to_string(model.field_count));
    }
    if (times.empty()) times = {0.0, 0.37 / (std::abs(a.velocity) + 1.0)};
    const int n = grid.points;
    std::vector<double> xs(n);
    double length = 0.0;
    if (a.lattice) {
        length = n;
        for (int j = 0; j < n; ++j) xs[j] = j;
        if (method != Method::Analytic) {
            const double wraps = n / catalog::fundamental_period(a);
            if (std::abs(wraps - std::round(wraps)) > 1e-9 * std::max(1.0, wraps) || std::round(wraps) < 1.0) {
                throw UsageError("lattice of " + std::to_string(n) + " sites does not hold a whole number of periods");
            }
        }
    } else {
        length = grid.period_multiples * catalog::fundamental_period(a);
        for (int j = 0; j < n; ++j) xs[j] = length * j / n;
    }

    const std::size_t neq = static_cast<std::size_t>(model.field_count);
    std::vector<std::vector<double>> res(neq), scale(neq);
    for (double t : times) {
        std::vector<models::FieldSample> samples;
        if (method == Method::Analytic) {
            samples.reserve(n);
            for (int j = 0; j < n; ++j) samples.push_back(catalog::analytic_sample(a, xs[j], t));
        } else {
            samples = sampled_jets(a, xs, length, t, method);
        }
        for (const auto& s : samples) {
            const auto terms = models::residual_terms(model, s);
            for (std::size_t e = 0; e < neq; ++e) {
                res[e].push_back(std::abs(terms[e].sum()));
                scale[e].push_back(terms[e].scale());
            }
        }
    }

    ResidualReport r;
    r.method = method;
    r.times = times;
    r.points = n;
    double sumsq = 0.0;
    std::size_t count = 0;
    for (std::size_t e = 0; e < neq; ++e) {
        const double global = *std::max_element(scale[e].begin(), scale[e].end());
        const double floor = global > 0.0 ? 1e-6 * global : 1.0;
        EquationResidual er;
        er.index = static_cast<int>(e);
        for (std::size_t i = 0; i < res[e].size(); ++i) {
            er.max_abs = std::max(er.max_abs, res[e][i]);
            er.max_relative = std::max(er.max_relative, res[e][i] / std::max(scale[e][i], floor));
            sumsq += res[e][i] * res[e][i];
            ++count;
        }
        r.max_abs = std::max(r.max_abs, er.max_abs);
        r.max_relative = std::max(r.max_relative, er.max_relative);
        r.term_scale = std::max(r.term_scale, global);
        r.per_equation.push_back(er);
    }
    r.rms = count ? std::sqrt(sumsq / count) : 0.0;
    return r;
}

ResidualReport verify_solution(const ClosedSolution& sol, const GridSpec& grid, Method method)
{
    return residual_report(catalog::ansatz(sol), catalog::model_of(sol), grid, method);
}

void parallel_for(int n, unsigned threads, const std::function<void(int)>& f)
{
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max(n, 1)));
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (int i = next++; i < n; i = next++) {
            try {
                f(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < threads; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

FamilyResult verify_family(std::string_view model, std::string_view family, const Branch& branch,
                           const std::vector<ParamMap>& points, const VerifyAllOptions& o)
{
    const auto& spec = catalog::find_family(model, family);
    FamilyResult fr;
    fr.model = spec.model;
    fr.family = spec.id;
    fr.branch = branch.label();
    fr.relations = spec.relations;
    AuditOptions ao{o.audit_panel, o.seed, o.tolerance, {}};
    for (const auto& free : points) {
        PointResult p;
        p.free = free;
        try {
            const auto sol = catalog::close_family(spec.model, spec.id, free, branch);
            p.params = sol.params;
            p.residual = verify_solution(sol, o.grid, o.method);
            fr.worst = std::max(fr.worst, p.residual.max_relative);
        } catch (const std::exception& e) {
            p.error = e.what();
            fr.worst = INFINITY;
        }
        ao.extra_points.push_back(free);
        fr.points.push_back(std::move(p));
    }
    if (fr.points.empty()) fr.worst = INFINITY;
    fr.ledger = audit_constraints(spec.model, spec.id, branch, ao);
    const bool printed_ok = fr.worst <= o.tolerance;
    const bool ledger_ok = !fr.ledger.empty() && std::all_of(fr.ledger.begin(), fr.ledger.end(),
                                                             [](const LedgerEntry& e) { return e.resolved; });
    fr.status = printed_ok && fr.ledger.empty() ? "pass" : (ledger_ok ? "repaired" : "fail");
    return fr;
}

Summary verify_all(const VerifyAllOptions& o)
{
    if (!(o.tolerance > 0.0)) throw UsageError("tolerance must be positive");
    Summary s;
    s.options = o;
    std::vector<std::pair<const catalog::FamilySpec*, Branch>> tasks;
    const std::string model = o.model.empty() ? "" : models::find_model(o.model).id;
    for (const auto& f : catalog::all_families()) {
        if (!model.empty() && f.model != model) continue;
        if (!o.family.empty() && f.id != o.family && f.id.find(o.family) == std::string::npos) continue;
        for (const auto& b : catalog::branches(f)) tasks.emplace_back(&f, b);
    }
    if (tasks.empty()) throw UsageError("no family matches the selection");
    s.results.resize(tasks.size());
    const auto ids = identity_ids();
    const bool with_identities = model.empty() && o.family.empty() && o.identity_samples > 0;
    if (with_identities) s.identities.resize(ids.size());
    const int nfam = static_cast<int>(tasks.size());
    const int total = nfam + static_cast<int>(s.identities.size());
    parallel_for(total, o.threads, [&](int i) {
        if (i < nfam) s.results[i] = verify_family(tasks[i].first->model, tasks[i].first->id, tasks[i].second,
                                                       catalog::default_panel(*tasks[i].first, o.panel, tasks[i].second), o);
        else s.identities[i - nfam] = verify_identity(ids[i - nfam], o.identity_samples, o.seed);
    });
    for (const auto& r : s.results) {
        if (r.status == "pass") ++s.passed;
        else if (r.status == "repaired") ++s.repaired;
        else ++s.failed;
    }
    return s;
}

}  // namespace ellwave::verify
