#include "buruli/discretization.hpp"

#include <cmath>
#include <cstddef>
#include <stdexcept>

#include "buruli/coefficients.hpp"

namespace buruli {

namespace {

inline double pos(double x) { return x > 0.0 ? x : 0.0; }

std::size_t x_face_count(const Grid& g) {
    return static_cast<std::size_t>(g.nx - 1) * g.ny;
}

std::size_t y_face_count(const Grid& g) {
    return static_cast<std::size_t>(g.nx) * (g.ny - 1);
}

} // namespace

FaceCoeffs FaceCoeffs::zeros(const Grid& g) {
    FaceCoeffs fc;
    fc.x.assign(x_face_count(g), 0.0);
    fc.y.assign(y_face_count(g), 0.0);
    return fc;
}

FaceCoeffs FaceCoeffs::constant(const Grid& g, double value) {
    FaceCoeffs fc;
    fc.x.assign(x_face_count(g), value);
    fc.y.assign(y_face_count(g), value);
    return fc;
}

void DiffusionOperator::apply(const Field& x, Field& out) const {
    if (!(x.grid == grid)) {
        throw std::invalid_argument("DiffusionOperator::apply: grid mismatch");
    }
    if (out.grid == Grid{}) out = Field(grid);
    if (!(out.grid == grid)) {
        throw std::invalid_argument("DiffusionOperator::apply: output grid mismatch");
    }
    const int nx = grid.nx, ny = grid.ny;
    const double ihx2 = 1.0 / (grid.hx * grid.hx);
    const double ihy2 = 1.0 / (grid.hy * grid.hy);
    std::fill(out.data.begin(), out.data.end(), 0.0);
    const double* xv = x.data.data();
    double* ov = out.data.data();
    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        const std::size_t frow = static_cast<std::size_t>(j) * (nx - 1);
        for (int i = 0; i < nx - 1; ++i) {
            // q/hx with q = kappa*(x_r - x_l)/hx
            double q = kappa.x[frow + i] * (xv[row + i + 1] - xv[row + i]) * ihx2;
            ov[row + i] += q;
            ov[row + i + 1] -= q;
        }
    }
    for (int j = 0; j < ny - 1; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            double q = kappa.y[row + i] * (xv[row + nx + i] - xv[row + i]) * ihy2;
            ov[row + i] += q;
            ov[row + nx + i] -= q;
        }
    }
}

void DiffusionOperator::diagonal(Field& out) const {
    if (out.grid == Grid{}) out = Field(grid);
    const int nx = grid.nx, ny = grid.ny;
    const double ihx2 = 1.0 / (grid.hx * grid.hx);
    const double ihy2 = 1.0 / (grid.hy * grid.hy);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            double d = 0.0;
            if (i > 0) d += kappa.x[static_cast<std::size_t>(j) * (nx - 1) + i - 1] * ihx2;
            if (i < nx - 1) d += kappa.x[static_cast<std::size_t>(j) * (nx - 1) + i] * ihx2;
            if (j > 0) d += kappa.y[static_cast<std::size_t>(j - 1) * nx + i] * ihy2;
            if (j < ny - 1) d += kappa.y[static_cast<std::size_t>(j) * nx + i] * ihy2;
            out(i, j) = -d;
        }
    }
}

DiffusionOperator diffusion_operator(const Grid& g, double kappa) {
    if (!(kappa >= 0.0)) {
        throw std::invalid_argument("diffusion_operator: kappa must be nonnegative");
    }
    DiffusionOperator op;
    op.grid = g;
    op.kappa = FaceCoeffs::constant(g, kappa);
    return op;
}

DiffusionOperator diffusion_operator(const Field& kappa_cells) {
    DiffusionOperator op;
    op.grid = kappa_cells.grid;
    op.kappa = FaceCoeffs::zeros(kappa_cells.grid);
    update_diffusion_operator(op, kappa_cells);
    return op;
}

void update_diffusion_operator(DiffusionOperator& op, const Field& kappa_cells) {
    const Grid& g = kappa_cells.grid;
    if (!(op.grid == g) || op.kappa.x.size() != x_face_count(g) ||
        op.kappa.y.size() != y_face_count(g)) {
        throw std::invalid_argument("update_diffusion_operator: operator/grid mismatch");
    }
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx - 1; ++i) {
            double k = 0.5 * (kappa_cells(i, j) + kappa_cells(i + 1, j));
            if (!(k >= 0.0)) {
                throw std::invalid_argument("update_diffusion_operator: negative face kappa");
            }
            op.kappa.x[static_cast<std::size_t>(j) * (g.nx - 1) + i] = k;
        }
    }
    for (int j = 0; j < g.ny - 1; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double k = 0.5 * (kappa_cells(i, j) + kappa_cells(i, j + 1));
            if (!(k >= 0.0)) {
                throw std::invalid_argument("update_diffusion_operator: negative face kappa");
            }
            op.kappa.y[static_cast<std::size_t>(j) * g.nx + i] = k;
        }
    }
}

Field upwind_taxis_div(const Field& carried, const FaceCoeffs& sensitivity,
                       const Field& potential) {
    require_same_grid(carried, potential, "upwind_taxis_div");
    const Grid& g = carried.grid;
    if (sensitivity.x.size() != x_face_count(g) || sensitivity.y.size() != y_face_count(g)) {
        throw std::invalid_argument("upwind_taxis_div: face coefficient count mismatch");
    }
    Field out(g);
    const int nx = g.nx, ny = g.ny;
    const double* uv = carried.data.data();
    const double* pv = potential.data.data();
    double* ov = out.data.data();
    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        const std::size_t frow = static_cast<std::size_t>(j) * (nx - 1);
        for (int i = 0; i < nx - 1; ++i) {
            double grad = (pv[row + i + 1] - pv[row + i]) / g.hx;
            double flux = upwind_face_flux(sensitivity.x[frow + i] * grad,
                                           uv[row + i], uv[row + i + 1]);
            ov[row + i] -= flux / g.hx;
            ov[row + i + 1] += flux / g.hx;
        }
    }
    for (int j = 0; j < ny - 1; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            double grad = (pv[row + nx + i] - pv[row + i]) / g.hy;
            double flux = upwind_face_flux(sensitivity.y[row + i] * grad,
                                           uv[row + i], uv[row + nx + i]);
            ov[row + i] -= flux / g.hy;
            ov[row + nx + i] += flux / g.hy;
        }
    }
    return out;
}

namespace {

// Face-evaluated signed drifts of the active taxis terms. `accumulate` is
// called once per interior face with (left cell, right cell, spacing).
template <class FaceFn>
void for_each_face(const Grid& g, FaceFn&& fn) {
    const int nx = g.nx, ny = g.ny;
    for (int j = 0; j < ny; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx - 1; ++i) {
            fn(row + i, row + i + 1, g.hx);
        }
    }
    for (int j = 0; j < ny - 1; ++j) {
        const std::size_t row = static_cast<std::size_t>(j) * nx;
        for (int i = 0; i < nx; ++i) {
            fn(row + i, row + nx + i, g.hy);
        }
    }
}

struct LinearTerms {
    const State& s;
    const NondimParams& np;
    bool chemo; // include the -div(g3_t u grad m) term

    // Signed drifts at one face; donors are applied by the caller.
    template <class Emit>
    void drifts(std::size_t l, std::size_t r, double h, Emit&& emit) const {
        double vbar = pos(0.5 * (s.v.data[l] + s.v.data[r]));
        double nbar = pos(0.5 * (s.n.data[l] + s.n.data[r]));
        double a = coeff::a_sens(vbar, nbar) * np.Du_t;
        emit(a * np.g1_t * (s.n.data[r] - s.n.data[l]) / h);
        emit(a * np.g2_t * (s.v.data[r] - s.v.data[l]) / h);
        if (chemo) {
            emit(np.g3_t * (s.m.data[r] - s.m.data[l]) / h);
        }
    }
};

struct NonlinearTerms {
    const State& s;
    const NondimParams& np;

    template <class Emit>
    void drifts(std::size_t l, std::size_t r, double h, Emit&& emit) const {
        double ubar = pos(0.5 * (s.u.data[l] + s.u.data[r]));
        double vbar = pos(0.5 * (s.v.data[l] + s.v.data[r]));
        double nbar = pos(0.5 * (s.n.data[l] + s.n.data[r]));
        // chi1_nl carries u^2; one power rides with the donor cell.
        double sv = 1.0 + ubar * vbar;
        double s_tissue = np.D_t * ubar / (sv * sv);
        emit(s_tissue * (s.v.data[r] - s.v.data[l]) / h);
        double sn = 1.0 + nbar;
        double s_necro = np.chin_t / (sn * sn * (1.0 + ubar * nbar));
        emit(s_necro * (s.n.data[r] - s.n.data[l]) / h);
    }
};

template <class Terms>
Field accumulate_taxis(const State& state, const Terms& terms, double* dmax_out) {
    Field out(state.grid());
    const double* uv = state.u.data.data();
    double* ov = out.data.data();
    double dmax = 0.0;
    const bool track = dmax_out != nullptr;
    for_each_face(state.grid(), [&](std::size_t l, std::size_t r, double h) {
        double flux = 0.0;
        double d = 0.0;
        terms.drifts(l, r, h, [&](double drift) {
            flux += upwind_face_flux(drift, uv[l], uv[r]);
            if (track) d += std::fabs(drift);
        });
        if (track && d > dmax) dmax = d;
        ov[l] -= flux / h;
        ov[r] += flux / h;
    });
    if (dmax_out) *dmax_out = dmax;
    return out;
}

template <class Terms>
double accumulate_max_drift(const State& state, const Terms& terms) {
    double dmax = 0.0;
    for_each_face(state.grid(), [&](std::size_t l, std::size_t r, double h) {
        double d = 0.0;
        terms.drifts(l, r, h, [&](double drift) { d += std::fabs(drift); });
        if (d > dmax) dmax = d;
    });
    return dmax;
}

} // namespace

Field advect_all_taxis(const State& state, ModelKind model, const NondimParams& np) {
    return advect_all_taxis(state, model, np, nullptr);
}

Field advect_all_taxis(const State& state, ModelKind model, const NondimParams& np,
                       double* max_drift_out) {
    if (model == ModelKind::Linear) {
        LinearTerms terms{state, np, np.g3_t > 0.0};
        return accumulate_taxis(state, terms, max_drift_out);
    }
    NonlinearTerms terms{state, np};
    return accumulate_taxis(state, terms, max_drift_out);
}

double max_face_drift(const State& state, ModelKind model, const NondimParams& np) {
    if (model == ModelKind::Linear) {
        LinearTerms terms{state, np, np.g3_t > 0.0};
        return accumulate_max_drift(state, terms);
    }
    NonlinearTerms terms{state, np};
    return accumulate_max_drift(state, terms);
}

} // namespace buruli
