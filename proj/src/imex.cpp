#include "buruli/imex.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "buruli/coefficients.hpp"

namespace buruli {

void validate(const StepperConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("StepperConfig: dt must be positive");
    if (!(cfg.linear_tol > 0.0)) throw std::invalid_argument("StepperConfig: linear_tol must be positive");
    if (cfg.max_linear_iters < 0) throw std::invalid_argument("StepperConfig: max_linear_iters must be >= 0");
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0)) {
        throw std::invalid_argument("StepperConfig: cfl_safety must lie in (0,1]");
    }
    if (!(cfg.negativity_tol >= 0.0)) throw std::invalid_argument("StepperConfig: negativity_tol must be nonnegative");
    if (!(cfg.bound_tol >= 0.0)) throw std::invalid_argument("StepperConfig: bound_tol must be nonnegative");
}

namespace {

inline double pos(double x) { return x > 0.0 ? x : 0.0; }

double kahan_sum(const std::vector<double>& v) {
    double sum = 0.0, c = 0.0;
    for (double x : v) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return sum;
}

double norm2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

// Spectral solver for (I - c*div(grad)) x = b with no-flux boundaries: the
// cell-centered Neumann Laplacian diagonalizes in the DCT-II basis with
// eigenvalues -(4/h^2) sin^2(pi k / (2 n)) per axis.
struct DctSolver {
    int nx = 0, ny = 0;
    double* buf = nullptr;
    fftw_plan fwd{}, bwd{};
    std::vector<double> lamx, lamy;

    DctSolver(const Grid& g) : nx(g.nx), ny(g.ny) {
        buf = fftw_alloc_real(static_cast<std::size_t>(nx) * ny);
        // First plan dimension is the slow (y) index; data is row-major in x.
        fwd = fftw_plan_r2r_2d(ny, nx, buf, buf, FFTW_REDFT10, FFTW_REDFT10, FFTW_ESTIMATE);
        bwd = fftw_plan_r2r_2d(ny, nx, buf, buf, FFTW_REDFT01, FFTW_REDFT01, FFTW_ESTIMATE);
        lamx.resize(nx);
        lamy.resize(ny);
        for (int k = 0; k < nx; ++k) {
            double s = std::sin(0.5 * M_PI * k / nx);
            lamx[k] = 4.0 * nx * nx * s * s; // 4/hx^2 sin^2, hx = 1/nx
        }
        for (int k = 0; k < ny; ++k) {
            double s = std::sin(0.5 * M_PI * k / ny);
            lamy[k] = 4.0 * ny * ny * s * s;
        }
    }
    DctSolver(const DctSolver&) = delete;
    DctSolver& operator=(const DctSolver&) = delete;
    ~DctSolver() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }

    void solve(double c, const std::vector<double>& b, std::vector<double>& x) {
        const std::size_t n = static_cast<std::size_t>(nx) * ny;
        std::copy(b.begin(), b.end(), buf);
        fftw_execute(fwd);
        const double scale = 4.0 * nx * ny; // REDFT10 then REDFT01 gains 2n per axis
        for (int ky = 0; ky < ny; ++ky) {
            double ly = lamy[ky];
            double* row = buf + static_cast<std::size_t>(ky) * nx;
            for (int kx = 0; kx < nx; ++kx) {
                row[kx] /= scale * (1.0 + c * (lamx[kx] + ly));
            }
        }
        fftw_execute(bwd);
        x.assign(buf, buf + n);
    }
};

DctSolver& dct_for(const Grid& g) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<DctSolver>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(g.nx, g.ny);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache.emplace(key, std::make_unique<DctSolver>(g)).first;
    }
    return *it->second;
}

// The operator has zero column sums, so the exact solution of
// (I - dt*A) x = b conserves the cell sum. Restore it explicitly; the
// correction lies within the solver tolerance.
void conservation_shift(const std::vector<double>& b, std::vector<double>& x) {
    double delta = (kahan_sum(b) - kahan_sum(x)) / static_cast<double>(x.size());
    for (double& xi : x) xi += delta;
}

void check_residual(const DiffusionOperator& A, double dt, const Field& x, const Field& b,
                    double tol, const char* what) {
    Field ax(x.grid);
    A.apply(x, ax);
    std::vector<double> r(b.data.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        r[k] = b.data[k] - (x.data[k] - dt * ax.data[k]);
    }
    double rn = norm2(r);
    double bn = norm2(b.data);
    double bound = tol * std::max(bn, std::numeric_limits<double>::min());
    if (!(rn <= bound)) {
        std::ostringstream msg;
        msg << what << ": implicit solve residual " << rn << " exceeds " << bound
            << " (tol " << tol << ", |b| " << bn << ")";
        throw SolverError(msg.str());
    }
}

struct Stepper {
    Grid grid;
    ModelKind model;
    NondimParams np;
    StepperConfig cfg;

    DiffusionOperator op_u;   // linear: constant; nonlinear: refilled per step
    DiffusionOperator op_m;   // unit diffusivity
    Field kappa_cells;        // nonlinear diffusion coefficient (lagged)
    Field taxis;
    double drift_max = 0.0;
    Field work, rhs;

    Stepper(const Grid& g, ModelKind mk, const NondimParams& p, const StepperConfig& c)
        : grid(g), model(mk), np(p), cfg(c) {
        validate(cfg);
        op_m = diffusion_operator(g, 1.0);
        if (model == ModelKind::Linear) {
            op_u = diffusion_operator(g, np.Du_t);
        } else {
            kappa_cells = Field(g);
            op_u = diffusion_operator(g, 0.0);
        }
        work = Field(g);
        rhs = Field(g);
    }

    // Taxis divergence and CFL drift of the entry state; must precede advance.
    void prepare(const State& s) {
        taxis = advect_all_taxis(s, model, np, &drift_max);
    }

    int max_iters() const {
        return cfg.max_linear_iters > 0 ? cfg.max_linear_iters
                                        : 10 * std::max(grid.nx, grid.ny);
    }

    void solve_spectral(const DiffusionOperator& A, double c, double dt, const Field& b,
                        Field& x, const char* what) {
        if (x.data.size() != b.data.size()) x = Field(grid);
        dct_for(grid).solve(c, b.data, x.data);
        conservation_shift(b.data, x.data);
        check_residual(A, dt, x, b, cfg.linear_tol, what);
    }

    void solve_krylov(const DiffusionOperator& A, double dt, const Field& b, Field& x,
                      const char* what) {
        x = b; // warm start
        Field diag(grid);
        A.diagonal(diag);
        std::vector<double> idiag(diag.data.size());
        for (std::size_t k = 0; k < idiag.size(); ++k) {
            idiag[k] = 1.0 / (1.0 - dt * diag.data[k]);
        }
        Field t1(grid);
        auto apply = [&](const std::vector<double>& in, std::vector<double>& out) {
            Field xin;
            xin.grid = grid;
            xin.data = in; // copy; CG calls dominate elsewhere, keep it simple
            A.apply(xin, t1);
            out.resize(in.size());
            for (std::size_t k = 0; k < out.size(); ++k) {
                out[k] = in[k] - dt * t1.data[k];
            }
        };
        auto prec = [&](const std::vector<double>& in, std::vector<double>& out) {
            out.resize(in.size());
            for (std::size_t k = 0; k < out.size(); ++k) out[k] = in[k] * idiag[k];
        };
        double target = 0.5 * cfg.linear_tol * norm2(b.data);
        bool ok = conjugate_gradient(apply, prec, b.data, x.data, target, max_iters());
        if (!ok) {
            std::ostringstream msg;
            msg << what << ": conjugate gradient exhausted " << max_iters()
                << " iterations without reaching tolerance";
            throw SolverError(msg.str());
        }
        conservation_shift(b.data, x.data);
        check_residual(A, dt, x, b, cfg.linear_tol, what);
    }

    void advance_prepared(State& s, double dt) {
        const std::size_t n = s.u.data.size();
        // Bacteria: explicit taxis and proliferation, implicit diffusion.
        for (std::size_t k = 0; k < n; ++k) {
            double g = coeff::growth(pos(s.u.data[k]), pos(s.v.data[k]), pos(s.n.data[k]));
            rhs.data[k] = s.u.data[k] + dt * (taxis.data[k] + g);
        }
        if (model == ModelKind::Linear) {
            solve_spectral(op_u, dt * np.Du_t, dt, rhs, work, "bacteria");
        } else {
            for (std::size_t k = 0; k < n; ++k) {
                kappa_cells.data[k] =
                    coeff::D_u_nl(pos(s.u.data[k]), pos(s.v.data[k]), np.D_t);
            }
            update_diffusion_operator(op_u, kappa_cells);
            solve_krylov(op_u, dt, rhs, work, "bacteria");
        }
        std::swap(s.u.data, work.data);
        // work now holds the pre-step u, still needed for the m source.
        for (std::size_t k = 0; k < n; ++k) {
            double pu = pos(work.data[k]);
            rhs.data[k] = s.m.data[k] + dt * (np.delta_t * pu / (1.0 + pu) - np.lam_t * s.m.data[k]);
        }
        solve_spectral(op_m, dt, dt, rhs, work, "mycolactone");
        // Tissue ODEs use the pre-step m.
        for (std::size_t k = 0; k < n; ++k) {
            double mv = s.m.data[k] * s.v.data[k];
            s.v.data[k] += dt * (-np.b1_t * mv);
            s.n.data[k] += dt * (np.b2_t * mv - np.gam_t * s.n.data[k]);
        }
        std::swap(s.m.data, work.data);
        s.t += dt;

        double floor = std::min({min_value(s.u), min_value(s.m), min_value(s.v), min_value(s.n)});
        if (floor < -cfg.negativity_tol) {
            std::ostringstream msg;
            msg << "step produced value " << floor << " below -" << cfg.negativity_tol
                << " at t=" << s.t << "; reduce dt";
            throw StabilityError(msg.str());
        }
    }
};

double reaction_bound(const State& s, const NondimParams& np) {
    return 1.0 / (np.lam_t + np.b1_t * pos(max_value(s.m)) + 1.0);
}

} // namespace

double stable_dt(const State& s, ModelKind model, const NondimParams& np,
                 const StepperConfig& cfg) {
    validate(cfg);
    double dmax = max_face_drift(s, model, np);
    double dt_adv = dmax > 0.0 ? std::min(s.grid().hx, s.grid().hy) / dmax
                               : std::numeric_limits<double>::infinity();
    return cfg.cfl_safety * std::min(dt_adv, reaction_bound(s, np));
}

State step(const State& s, ModelKind model, const NondimParams& np,
           const StepperConfig& cfg) {
    Stepper st(s.grid(), model, np, cfg);
    st.prepare(s);
    State out = s;
    st.advance_prepared(out, cfg.dt);
    return out;
}

std::vector<State> run(const State& initial, ModelKind model, const NondimParams& np,
                       const StepperConfig& cfg, double horizon,
                       const std::vector<double>& snapshot_times) {
    validate(cfg);
    validate_state(initial, cfg.negativity_tol);
    if (!(horizon >= initial.t)) {
        throw std::invalid_argument("run: horizon precedes the initial time");
    }
    for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
        double t = snapshot_times[k];
        if (t < initial.t || t > horizon) {
            throw std::invalid_argument("run: snapshot time outside [t0, horizon]");
        }
        if (k > 0 && !(t > snapshot_times[k - 1])) {
            throw std::invalid_argument("run: snapshot times must be strictly ascending");
        }
    }

    const double m_cap = np.lam_t > 0.0
        ? max_value(initial.m) + np.delta_t / np.lam_t + cfg.bound_tol
        : std::numeric_limits<double>::infinity();
    auto near = [](double a, double b) {
        return std::fabs(a - b) <= 1e-9 * std::max({1.0, std::fabs(a), std::fabs(b)});
    };

    std::vector<State> out;
    std::size_t snap = 0;
    while (snap < snapshot_times.size() && near(snapshot_times[snap], initial.t)) {
        out.push_back(initial);
        ++snap;
    }

    Stepper st(initial.grid(), model, np, cfg);
    State s = initial;
    while (s.t < horizon && !near(s.t, horizon)) {
        st.prepare(s);
        double dt_adv = st.drift_max > 0.0
            ? std::min(s.grid().hx, s.grid().hy) / st.drift_max
            : std::numeric_limits<double>::infinity();
        double guard = cfg.cfl_safety * std::min(dt_adv, reaction_bound(s, np));
        double dt = std::min(cfg.dt, guard);
        double target = snap < snapshot_times.size() ? snapshot_times[snap] : horizon;
        dt = std::min(dt, target - s.t);
        st.advance_prepared(s, dt);
        if (near(s.t, target)) s.t = target;

        validate_state(s, cfg.negativity_tol);
        double mmax = max_value(s.m);
        if (mmax > m_cap) {
            std::ostringstream msg;
            msg << "mycolactone sup bound violated at t=" << s.t << ": max(m)=" << mmax
                << " exceeds " << m_cap;
            throw std::runtime_error(msg.str());
        }
        while (snap < snapshot_times.size() && near(s.t, snapshot_times[snap])) {
            out.push_back(s);
            ++snap;
        }
    }
    if (snapshot_times.empty()) out.push_back(s);
    return out;
}

} // namespace buruli
