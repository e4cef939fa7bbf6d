#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nsac::grid {

enum class Bc { Periodic };

/// Uniform structured grid, 1D or 2D, periodic in every direction.
/// Cell i (or (i,j)) sits at x = i*hx (y = j*hy); row-major storage.
struct GridSpec {
  int dim = 2;
  int nx = 0;
  int ny = 1;
  double lx = 1.0;
  double ly = 1.0;
  Bc bc = Bc::Periodic;

  double hx() const { return lx / nx; }
  double hy() const { return dim == 2 ? ly / ny : 1.0; }
  double cell_area() const { return dim == 2 ? hx() * hy() : hx(); }
  std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }

  void validate() const;
  bool operator==(const GridSpec& o) const {
    return dim == o.dim && nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
  }
};

struct ShapeMismatchError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScalarField {
  GridSpec grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g, double fill = 0.0)
      : grid(g), v(g.cells(), fill) {}
  ScalarField(const GridSpec& g, std::vector<double> data)
      : grid(g), v(std::move(data)) {
    if (v.size() != g.cells())
      throw ShapeMismatchError("field data does not match grid size");
  }

  double& at(int i, int j) { return v[static_cast<std::size_t>(j) * grid.nx + i]; }
  double at(int i, int j) const { return v[static_cast<std::size_t>(j) * grid.nx + i]; }
  std::size_t size() const { return v.size(); }
};

struct VectorField {
  GridSpec grid;
  std::vector<double> x;  // component u1
  std::vector<double> y;  // component u2 (kept zero in 1D)

  VectorField() = default;
  explicit VectorField(const GridSpec& g, double fx = 0.0, double fy = 0.0)
      : grid(g), x(g.cells(), fx), y(g.cells(), fy) {}

  double& xat(int i, int j) { return x[static_cast<std::size_t>(j) * grid.nx + i]; }
  double xat(int i, int j) const { return x[static_cast<std::size_t>(j) * grid.nx + i]; }
  double& yat(int i, int j) { return y[static_cast<std::size_t>(j) * grid.nx + i]; }
  double yat(int i, int j) const { return y[static_cast<std::size_t>(j) * grid.nx + i]; }
};

/// Symmetric 2x2 tensor field (xx, xy, yy); xy doubles for the 1D case
/// where only xx is meaningful.
struct SymTensorField {
  GridSpec grid;
  std::vector<double> xx, xy, yy;

  SymTensorField() = default;
  explicit SymTensorField(const GridSpec& g)
      : grid(g), xx(g.cells(), 0.0), xy(g.cells(), 0.0), yy(g.cells(), 0.0) {}
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b,
                              const char* what) {
  if (!(a == b)) throw ShapeMismatchError(std::string("shape mismatch in ") + what);
}

// Second-order central differences, periodic wrap.
VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& v);
VectorField divergence(const SymTensorField& t);

/// Compact 3-point (1D) / 5-point (2D) Laplacian.
ScalarField laplacian(const ScalarField& f);

/// Wide-stencil Laplacian over step 2h; identical to divergence(gradient(f)).
ScalarField laplacian_wide(const ScalarField& f);

SymTensorField deformation_tensor(const VectorField& u);

/// Viscous stress S = 2 nu D(u) + lambda (div u) I.
SymTensorField viscous_stress(const VectorField& u, double nu, double lambda);

// Pointwise helpers used by the solver.
double field_min(const ScalarField& f);
double field_max(const ScalarField& f);
double field_max_abs(const ScalarField& f);
double field_sum(const ScalarField& f);
bool all_finite(const ScalarField& f);

/// Bilinear interpolation at physical position (px, py), periodic wrap.
double interp(const ScalarField& f, double px, double py);

}  // namespace nsac::grid
