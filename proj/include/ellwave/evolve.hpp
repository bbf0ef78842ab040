#pragma once

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ellwave/catalog.hpp"
#include "ellwave/verify.hpp"

namespace ellwave::evolve {

using cplx = std::complex<double>;
using Fields = std::vector<std::vector<cplx>>;

enum class Integrator { SplitStep, IntegratingFactorRk4, LatticeRk4 };

const char* integrator_name(Integrator i);

struct Quantity {
    std::string name;
    std::vector<double> values;  // one per sample time
    double reference = 0.0;      // drift normaliser: |Q(0)|, or the L1 norm of the field for the mean
    double drift = 0.0;          // max |Q(t) - Q(0)| / reference
};

struct EvolutionResult {
    Integrator integrator = Integrator::SplitStep;
    double dt = 0.0;
    int steps = 0;
    double length = 0.0;  // domain length, or number of sites
    bool lattice = false;
    std::vector<double> times;
    std::vector<double> errors;  // relative L2 error against the exact solution; empty without a reference
    std::vector<Quantity> quantities;
    std::vector<double> xs;
    Fields initial;
    Fields final_fields;

    double final_error() const { return errors.empty() ? 0.0 : errors.back(); }
    double max_drift() const;
};

// Arbitrary initial data on a periodic domain. Field j is u_j(x) = w_j(x) exp(i k_j x) with w_j periodic.
struct InitialData {
    models::ModelSpec model;
    Fields w;
    std::vector<double> k;  // Bloch wavenumber per field; empty means all zero
    double length = 0.0;    // continuum domain length; lattice: ignored (sites = w[0].size())
    bool lattice = false;
};

using ExactFn = std::function<Fields(double t)>;

// Continuum-complex models (and pairs of Schroedinger fields): Strang splitting, dispersion exact in Fourier space.
EvolutionResult evolve_schrodinger(const catalog::ClosedSolution& sol, const verify::GridSpec& grid, double dt,
                                   double T, int samples = 10);

// Models with a third-derivative field: integrating factor for the linear parts, RK4 on the dealiased remainder.
EvolutionResult evolve_kdv_family(const catalog::ClosedSolution& sol, const verify::GridSpec& grid, double dt,
                                  double T, int samples = 10);

// Time-dependent lattices: RK4 on the periodic ring of `sites` sites.
EvolutionResult evolve_lattice(const catalog::ClosedSolution& sol, int sites, double dt, double T, int samples = 10);

// Stable step for the integrator that fits the solution: (L/N)^2/8 for split-step, 1e-4 on lattices,
// a quarter of the nonlinear stability bound for IF-RK4.
double suggested_dt(const catalog::ClosedSolution& sol, const verify::GridSpec& grid);

// Picks the integrator that fits the model.
Integrator integrator_for(const models::ModelSpec& model);
EvolutionResult evolve_solution(const catalog::ClosedSolution& sol, const verify::GridSpec& grid, double dt, double T,
                                int samples = 10);

EvolutionResult evolve_data(const InitialData& data, Integrator integrator, double dt, double T, int samples = 10,
                            const ExactFn& exact = {});

// Closest wavenumber on the Fourier lattice 2 pi j / L.
double nearest_admissible_k(double k, double length);

// Shift between the initial and final profile of a field (|u|^2 for complex fields) divided by the elapsed time,
// from the peak of the trigonometric cross-correlation. Continuum only.
double measured_speed(const EvolutionResult& r, int field = 0);

struct ProbeMode {
    int mode = 0;
    double initial_norm = 0.0;
    double final_norm = 0.0;
    double growth = 0.0;  // final_norm / initial_norm; 0 when epsilon = 0
};

struct ProbeResult {
    double epsilon = 0.0;
    double T = 0.0;
    double dt = 0.0;
    double reference_error = 0.0;  // relative L2 error of the unperturbed run against the exact solution
    std::vector<ProbeMode> modes;
};

struct ProbeOptions {
    verify::GridSpec grid{128, 1};
    double dt = 0.0;  // 0: a stable default for the integrator
    unsigned long long seed = 1;
    unsigned threads = 0;
};

// Evolves sol + epsilon * (random periodic perturbation in Fourier mode j), j = 1..modes, and subtracts the
// unperturbed solution carried by the same integrator and step.
ProbeResult perturbation_probe(const catalog::ClosedSolution& sol, double epsilon, double T, int modes,
                               const ProbeOptions& options = {});

// CSV: t, l2_error, one column per conserved quantity.
void write_series_csv(const EvolutionResult& r, std::ostream& out);
// CSV: x (or n), field, real, imag.
void write_profile_csv(const EvolutionResult& r, std::ostream& out);

}  // namespace ellwave::evolve
