#include "buruli/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace buruli {

Grid Grid::uniform(int nx, int ny) {
    if (nx < 4 || ny < 4) {
        throw std::invalid_argument("Grid::uniform: nx and ny must be at least 4");
    }
    Grid g;
    g.nx = nx;
    g.ny = ny;
    g.hx = 1.0 / nx;
    g.hy = 1.0 / ny;
    return g;
}

double integrate(const Field& f) {
    // Kahan compensated sum.
    double sum = 0.0;
    double c = 0.0;
    for (double x : f.data) {
        double y = x - c;
        double t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    return f.grid.hx * f.grid.hy * sum;
}

double sup_norm(const Field& f) {
    double m = 0.0;
    for (double x : f.data) {
        double a = std::fabs(x);
        if (a > m) m = a;
    }
    return m;
}

double min_value(const Field& f) {
    double m = f.data.empty() ? 0.0 : f.data[0];
    for (double x : f.data) {
        if (x < m) m = x;
    }
    return m;
}

double max_value(const Field& f) {
    double m = f.data.empty() ? 0.0 : f.data[0];
    for (double x : f.data) {
        if (x > m) m = x;
    }
    return m;
}

bool all_finite(const Field& f) {
    for (double x : f.data) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

Field diff(const Field& a, const Field& b) {
    require_same_grid(a, b, "diff");
    Field d(a.grid);
    for (std::size_t k = 0; k < d.data.size(); ++k) {
        d.data[k] = b.data[k] - a.data[k];
    }
    return d;
}

void require_same_grid(const Field& a, const Field& b, const char* what) {
    if (!(a.grid == b.grid)) {
        throw std::invalid_argument(std::string(what) + ": fields live on different grids");
    }
}

State State::zeros(const Grid& g) {
    State s;
    s.u = Field(g);
    s.m = Field(g);
    s.v = Field(g);
    s.n = Field(g);
    s.t = 0.0;
    return s;
}

namespace {

void check_field(const Field& f, const char* name, double t, double negativity_tol) {
    const Grid& g = f.grid;
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            double x = f(i, j);
            if (!std::isfinite(x) || x < -negativity_tol) {
                std::ostringstream msg;
                msg << "state invariant violated: field " << name << " at cell (" << i << ","
                    << j << "), t=" << t << ", value=" << x
                    << " (floor -" << negativity_tol << ")";
                throw std::runtime_error(msg.str());
            }
        }
    }
}

} // namespace

void validate_state(const State& s, double negativity_tol) {
    require_same_grid(s.u, s.m, "validate_state");
    require_same_grid(s.u, s.v, "validate_state");
    require_same_grid(s.u, s.n, "validate_state");
    check_field(s.u, "u", s.t, negativity_tol);
    check_field(s.m, "m", s.t, negativity_tol);
    check_field(s.v, "v", s.t, negativity_tol);
    check_field(s.n, "n", s.t, negativity_tol);
}

} // namespace buruli
