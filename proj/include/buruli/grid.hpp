// Cell-centered uniform grid on the unit square, scalar fields and the
// four-component simulation state (bacteria u, toxin m, normal tissue v,
// necrotic matter n).
#ifndef BURULI_GRID_HPP
#define BURULI_GRID_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace buruli {

// Uniform cell-centered grid on (0,1)x(0,1). Cell (i,j) has center
// ((i+0.5)*hx, (j+0.5)*hy). No-flux boundaries coincide with the outer faces.
struct Grid {
    int nx = 0;
    int ny = 0;
    double hx = 0.0;
    double hy = 0.0;

    static Grid uniform(int nx, int ny);

    int cells() const { return nx * ny; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    double xc(int i) const { return (i + 0.5) * hx; }
    double yc(int j) const { return (j + 0.5) * hy; }
    bool operator==(const Grid&) const = default;
};

// Scalar field stored row-major (x fastest).
struct Field {
    Grid grid;
    std::vector<double> data;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0)
        : grid(g), data(static_cast<std::size_t>(g.cells()), fill) {}

    double& operator()(int i, int j) { return data[grid.index(i, j)]; }
    double operator()(int i, int j) const { return data[grid.index(i, j)]; }
};

// integrate(f) = hx*hy * sum of cell values, compensated summation so that
// conservation checks are limited by the operators, not by the reduction.
double integrate(const Field& f);
double sup_norm(const Field& f);
double min_value(const Field& f);
double max_value(const Field& f);
bool all_finite(const Field& f);

// b - a, grids must match.
Field diff(const Field& a, const Field& b);

void require_same_grid(const Field& a, const Field& b, const char* what);

struct State {
    Field u; // bacteria (volume fraction)
    Field m; // mycolactone
    Field v; // normal tissue
    Field n; // necrotic matter
    double t = 0.0;

    static State zeros(const Grid& g);
    const Grid& grid() const { return u.grid; }
};

// Checks grid consistency, finiteness and the floor value >= -negativity_tol
// on every field. Throws std::runtime_error naming field and cell on breach.
void validate_state(const State& s, double negativity_tol);

} // namespace buruli

#endif
