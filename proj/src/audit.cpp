#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ellwave/errors.hpp"
#include "ellwave/verify.hpp"

namespace ellwave::verify {

using cplx = std::complex<double>;

namespace {

struct Collocation {
    std::vector<double> xs;
    std::vector<double> times;
};

struct Evaluation {
    Eigen::VectorXd r;    // residuals divided by the fixed scale, real and imaginary parts stacked
    double relative = 0;  // pointwise relative residual as in residual_report
    bool ok = false;
};

Evaluation evaluate(const ClosedSolution& sol, const Collocation& c, double fixed_scale)
{
    Evaluation ev;
    try {
        const auto a = catalog::ansatz(sol);
        const auto model = catalog::model_of(sol);
        std::vector<double> res, scl;
        std::vector<cplx> raw;
        double global = 0.0;
        for (double t : c.times) {
            for (double x : c.xs) {
                const auto terms = models::residual_terms(model, catalog::analytic_sample(a, x, t));
                for (const auto& eq : terms) {
                    const cplx v = eq.sum();
                    raw.push_back(v);
                    res.push_back(std::abs(v));
                    scl.push_back(eq.scale());
                    global = std::max(global, eq.scale());
                }
            }
        }
        ev.r.resize(2 * raw.size());
        for (std::size_t i = 0; i < raw.size(); ++i) {
            ev.r[2 * i] = raw[i].real() / fixed_scale;
            ev.r[2 * i + 1] = raw[i].imag() / fixed_scale;
        }
        const double floor = global > 0 ? 1e-6 * global : 1.0;
        for (std::size_t i = 0; i < res.size(); ++i) ev.relative = std::max(ev.relative, res[i] / std::max(scl[i], floor));
        ev.ok = ev.r.allFinite() && std::isfinite(ev.relative);
    } catch (const std::exception&) {
        ev.ok = false;
    }
    return ev;
}

double period_or_window(const catalog::Ansatz& a)
{
    try {
        return catalog::fundamental_period(a);
    } catch (const AperiodicError&) {
        return 16.0 / a.beta;
    }
}

bool agrees(double a, double b) { return std::abs(a - b) <= 1e-6 * std::max(std::abs(a), std::abs(b)) + 1e-9; }

double relative_residual(const ClosedSolution& sol)
{
    return verify_solution(sol, GridSpec{128, 1}).max_relative;
}

}  // namespace

NewtonResult newton_rederive(const ClosedSolution& start, const std::vector<std::string>& unknowns, double tolerance,
                             int collocation)
{
    NewtonResult out;
    out.params = start.params;
    std::vector<std::string> names;
    for (const auto& u : unknowns) {
        if (start.params.count(u)) names.push_back(u);
    }
    const auto a0 = catalog::ansatz(start);
    const double L = period_or_window(a0);
    const int npts = collocation > 0 ? collocation : std::max<int>(2 * (static_cast<int>(names.size()) + 3), 24);
    Collocation c;
    for (int j = 0; j < npts; ++j) c.xs.push_back(0.5 * L * (1.0 - std::cos(std::numbers::pi * (j + 0.5) / npts)));
    c.times = {0.0, 0.37 / (std::abs(a0.velocity) + 1.0)};

    double fixed = 1.0;
    {
        const auto a = catalog::ansatz(start);
        const auto model = catalog::model_of(start);
        double g = 0.0;
        for (double t : c.times) {
            for (double x : c.xs) {
                for (const auto& eq : models::residual_terms(model, catalog::analytic_sample(a, x, t))) {
                    g = std::max(g, eq.scale());
                }
            }
        }
        if (g > 0.0) fixed = g;
    }

    ClosedSolution cur = start;
    Evaluation ev = evaluate(cur, c, fixed);
    if (!ev.ok) return out;
    const int n = static_cast<int>(names.size());
    double lambda = 1e-3;
    std::vector<bool> active(n, true);
    const double target = std::min(tolerance * 1e-3, 1e-12);
    int stalled = 0;
    for (int it = 0; it < 60 && ev.relative > target && n > 0 && stalled < 8; ++it) {
        out.iterations = it + 1;
        Eigen::MatrixXd J(ev.r.size(), n);
        for (int i = 0; i < n; ++i) {
            const double v = cur.params.at(names[i]);
            const double h = 1e-7 * std::max(1.0, std::abs(v));
            ClosedSolution p = cur, q = cur;
            p.params[names[i]] = v + h;
            q.params[names[i]] = v - h;
            const auto ep = evaluate(p, c, fixed), eq = evaluate(q, c, fixed);
            if (!ep.ok || !eq.ok) {
                J.col(i).setZero();
                continue;
            }
            J.col(i) = (ep.r - eq.r) / (2.0 * h);
        }
        const double maxcol = J.colwise().norm().maxCoeff();
        for (int i = 0; i < n; ++i) {
            active[i] = J.col(i).norm() > 1e-12 * maxcol;
            if (!active[i]) J.col(i).setZero();
        }
        const Eigen::MatrixXd A = J.transpose() * J;
        const Eigen::VectorXd g = J.transpose() * ev.r;
        bool accepted = false;
        double moved = 0.0;
        while (lambda < 1e14) {
            Eigen::MatrixXd M = A;
            for (int i = 0; i < n; ++i) M(i, i) = active[i] ? (1.0 + lambda) * A(i, i) : 1.0;
            const Eigen::VectorXd step = M.ldlt().solve(-g);
            ClosedSolution trial = cur;
            for (int i = 0; i < n; ++i) {
                if (active[i]) trial.params[names[i]] += step[i];
            }
            const auto et = evaluate(trial, c, fixed);
            if (et.ok && et.r.squaredNorm() < ev.r.squaredNorm()) {
                stalled = et.r.squaredNorm() > (1.0 - 1e-3) * ev.r.squaredNorm() ? stalled + 1 : 0;
                moved = step.norm();
                cur = std::move(trial);
                ev = et;
                lambda = std::max(lambda * 0.1, 1e-15);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted || moved <= 1e-15) break;
    }
    for (int i = 0; i < n; ++i) {
        if (active[i]) out.solved.push_back(names[i]);
    }
    out.params = cur.params;
    out.residual = ev.relative;
    for (const auto& name : out.solved) {
        const double s0 = std::abs(start.params.at(name));
        if (s0 > 1e-8 && std::abs(out.params.at(name)) < 1e-6 * s0) out.collapsed = true;
    }
    out.converged = ev.relative <= tolerance && !out.collapsed;
    return out;
}

std::vector<LedgerEntry> audit_constraints(std::string_view model, std::string_view family, const Branch& branch,
                                           const AuditOptions& o)
{
    const auto& spec = catalog::find_family(model, family);
    const Branch br = catalog::parse_branch(spec, branch.label() == "default" ? "" : branch.label());
    const auto repairs = catalog::repairs(spec.model, spec.id);

    std::vector<ParamMap> points = o.extra_points;
    for (auto& p : catalog::random_panel(spec, o.panel, o.seed, br)) points.push_back(std::move(p));

    LedgerEntry e;
    e.model = spec.model;
    e.family = spec.id;
    e.branch = br.label();
    e.evaluated_model = spec.model;
    std::vector<bool> repair_passes(repairs.size(), true), repair_agrees(repairs.size(), true);
    bool all_converged = true;
    std::string notes;

    for (const auto& free : points) {
        ClosedSolution sol;
        try {
            sol = catalog::close_family(spec.model, spec.id, free, br);
        } catch (const std::exception&) {
            continue;
        }
        ++e.panel_points;
        const double before = relative_residual(sol);
        if (before <= o.tolerance) continue;
        ++e.failing_points;
        e.residual_before = std::max(e.residual_before, before);

        NewtonResult nr = newton_rederive(sol, spec.unknowns, o.tolerance);
        std::string start_note, solved_model = spec.model;
        std::vector<ClosedSolution> repaired(repairs.size());
        std::vector<bool> ok(repairs.size(), false);
        for (std::size_t i = 0; i < repairs.size(); ++i) {
            try {
                repaired[i] = catalog::close_with_repair(spec.model, spec.id, repairs[i].name, free, br);
                ok[i] = relative_residual(repaired[i]) <= o.tolerance;
            } catch (const std::exception&) {
                ok[i] = false;
            }
        }
        const bool collapsed = nr.collapsed;
        if (!nr.converged) {
            for (std::size_t i = 0; i < repairs.size() && !nr.converged; ++i) {
                if (!ok[i]) continue;
                NewtonResult alt = newton_rederive(repaired[i], spec.unknowns, o.tolerance);
                if (alt.converged) {
                    nr = alt;
                    start_note = std::string(collapsed ? "Newton from the printed values collapsed to a trivial solution"
                                                       : "Newton from the printed values stalled") +
                                 "; converged from the '" + repairs[i].name + "' closure";
                    solved_model = repaired[i].model;
                }
            }
        }
        ClosedSolution after = sol;
        after.params = nr.params;
        after.model = solved_model;
        double residual_after = INFINITY;
        try {
            residual_after = relative_residual(after);
        } catch (const std::exception&) {
        }
        const bool converged = nr.converged && residual_after <= o.tolerance;
        all_converged = all_converged && converged;
        e.residual_after = std::max(e.residual_after, residual_after);
        for (std::size_t i = 0; i < repairs.size(); ++i) {
            repair_passes[i] = repair_passes[i] && ok[i];
            bool same = ok[i] && converged;
            for (const auto& name : nr.solved) {
                if (!same) break;
                same = repaired[i].params.count(name) && agrees(repaired[i].params.at(name), nr.params.at(name));
            }
            repair_agrees[i] = repair_agrees[i] && same;
        }
        if (e.failing_points == 1) {
            e.free = free;
            for (const auto& name : nr.solved) {
                e.printed[name] = sol.params.at(name);
                e.rederived[name] = nr.params.at(name);
            }
            if (nr.solved.empty()) {
                for (const auto& name : spec.unknowns) {
                    if (sol.params.count(name)) e.printed[name] = sol.params.at(name);
                }
            }
            if (!start_note.empty()) notes = start_note;
        }
    }
    if (e.failing_points == 0) return {};

    e.newton_converged = all_converged;
    int chosen = -1;
    for (std::size_t i = 0; i < repairs.size() && chosen < 0; ++i) {
        if (repair_passes[i] && repair_agrees[i]) chosen = static_cast<int>(i);
    }
    if (chosen < 0) {
        for (std::size_t i = 0; i < repairs.size() && chosen < 0; ++i) {
            if (repair_passes[i]) {
                chosen = static_cast<int>(i);
                notes += (notes.empty() ? "" : "; ") + std::string("repair passes but Newton settled on another root");
            }
        }
    }
    if (chosen >= 0) {
        e.repair = repairs[chosen].name;
        e.repair_description = repairs[chosen].description;
        e.relations = repairs[chosen].relations;
        if (!repairs[chosen].model_override.empty()) e.evaluated_model = repairs[chosen].model_override;
    } else {
        e.relations = spec.relations;
    }
    e.resolved = all_converged && chosen >= 0;
    if (!all_converged) {
        notes += (notes.empty() ? "" : "; ") +
                 std::string("Newton found no closure of this ansatz within tolerance at ") +
                 std::to_string(e.failing_points) + " of " + std::to_string(e.panel_points) + " panel points";
    }
    e.note = notes;
    return {e};
}

std::vector<LedgerEntry> audit_constraints(std::string_view model, std::string_view family, const AuditOptions& o)
{
    std::vector<LedgerEntry> out;
    const auto& spec = catalog::find_family(model, family);
    for (const auto& b : catalog::branches(spec)) {
        for (auto& e : audit_constraints(model, family, b, o)) out.push_back(std::move(e));
    }
    return out;
}

}  // namespace ellwave::verify
