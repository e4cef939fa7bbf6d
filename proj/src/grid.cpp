#include "nsac/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace nsac::grid {

void GridSpec::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid.dim must be 1 or 2");
  if (nx < 8) throw std::invalid_argument("grid.nx must be >= 8");
  if (dim == 2 && ny < 8) throw std::invalid_argument("grid.ny must be >= 8");
  if (dim == 1 && ny != 1) throw std::invalid_argument("grid.ny must be 1 in 1D");
  if (lx <= 0.0 || (dim == 2 && ly <= 0.0))
    throw std::invalid_argument("grid domain lengths must be > 0");
}

namespace {
inline int wrap(int i, int n) { return i >= n ? i - n : (i < 0 ? i + n : i); }
}  // namespace

VectorField gradient(const ScalarField& f) {
  const GridSpec& g = f.grid;
  VectorField out(g);
  const double ix = 1.0 / (2.0 * g.hx());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      out.xat(i, j) = (f.at(wrap(i + 1, g.nx), j) - f.at(wrap(i - 1, g.nx), j)) * ix;
    }
  }
  if (g.dim == 2) {
    const double iy = 1.0 / (2.0 * g.hy());
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        out.yat(i, j) = (f.at(i, wrap(j + 1, g.ny)) - f.at(i, wrap(j - 1, g.ny))) * iy;
      }
    }
  }
  return out;
}

ScalarField divergence(const VectorField& v) {
  const GridSpec& g = v.grid;
  ScalarField out(g);
  const double ix = 1.0 / (2.0 * g.hx());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      out.at(i, j) = (v.xat(wrap(i + 1, g.nx), j) - v.xat(wrap(i - 1, g.nx), j)) * ix;
    }
  }
  if (g.dim == 2) {
    const double iy = 1.0 / (2.0 * g.hy());
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        out.at(i, j) += (v.yat(i, wrap(j + 1, g.ny)) - v.yat(i, wrap(j - 1, g.ny))) * iy;
      }
    }
  }
  return out;
}

VectorField divergence(const SymTensorField& t) {
  const GridSpec& g = t.grid;
  VectorField out(g);
  const double ix = 1.0 / (2.0 * g.hx());
  const double iy = g.dim == 2 ? 1.0 / (2.0 * g.hy()) : 0.0;
  auto idx = [&](int i, int j) { return static_cast<std::size_t>(j) * g.nx + i; };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int ip = wrap(i + 1, g.nx), im = wrap(i - 1, g.nx);
      double dx = (t.xx[idx(ip, j)] - t.xx[idx(im, j)]) * ix;
      double dy = 0.0;
      if (g.dim == 2) {
        const int jp = wrap(j + 1, g.ny), jm = wrap(j - 1, g.ny);
        dx += (t.xy[idx(i, jp)] - t.xy[idx(i, jm)]) * iy;
        dy = (t.xy[idx(ip, j)] - t.xy[idx(im, j)]) * ix +
             (t.yy[idx(i, jp)] - t.yy[idx(i, jm)]) * iy;
      }
      out.xat(i, j) = dx;
      out.yat(i, j) = dy;
    }
  }
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  const GridSpec& g = f.grid;
  ScalarField out(g);
  const double ix = 1.0 / (g.hx() * g.hx());
  const double iy = g.dim == 2 ? 1.0 / (g.hy() * g.hy()) : 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double s = (f.at(wrap(i + 1, g.nx), j) - 2.0 * f.at(i, j) +
                  f.at(wrap(i - 1, g.nx), j)) * ix;
      if (g.dim == 2) {
        s += (f.at(i, wrap(j + 1, g.ny)) - 2.0 * f.at(i, j) +
              f.at(i, wrap(j - 1, g.ny))) * iy;
      }
      out.at(i, j) = s;
    }
  }
  return out;
}

ScalarField laplacian_wide(const ScalarField& f) {
  // Defined as the literal composition so the identity with
  // divergence(gradient(f)) holds bit for bit, not just to round-off.
  return divergence(gradient(f));
}

SymTensorField deformation_tensor(const VectorField& u) {
  const GridSpec& g = u.grid;
  SymTensorField out(g);
  const double ix = 1.0 / (2.0 * g.hx());
  const double iy = g.dim == 2 ? 1.0 / (2.0 * g.hy()) : 0.0;
  auto idx = [&](int i, int j) { return static_cast<std::size_t>(j) * g.nx + i; };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int ip = wrap(i + 1, g.nx), im = wrap(i - 1, g.nx);
      const double dux_dx = (u.x[idx(ip, j)] - u.x[idx(im, j)]) * ix;
      out.xx[idx(i, j)] = dux_dx;
      if (g.dim == 2) {
        const int jp = wrap(j + 1, g.ny), jm = wrap(j - 1, g.ny);
        const double dux_dy = (u.x[idx(i, jp)] - u.x[idx(i, jm)]) * iy;
        const double duy_dx = (u.y[idx(ip, j)] - u.y[idx(im, j)]) * ix;
        const double duy_dy = (u.y[idx(i, jp)] - u.y[idx(i, jm)]) * iy;
        out.xy[idx(i, j)] = 0.5 * (dux_dy + duy_dx);
        out.yy[idx(i, j)] = duy_dy;
      }
    }
  }
  return out;
}

SymTensorField viscous_stress(const VectorField& u, double nu, double lambda) {
  SymTensorField d = deformation_tensor(u);
  const std::size_t n = d.grid.cells();
  for (std::size_t c = 0; c < n; ++c) {
    const double divu = d.xx[c] + d.yy[c];
    d.xx[c] = 2.0 * nu * d.xx[c] + lambda * divu;
    d.xy[c] = 2.0 * nu * d.xy[c];
    d.yy[c] = 2.0 * nu * d.yy[c] + lambda * divu;
  }
  return d;
}

double field_min(const ScalarField& f) {
  return *std::min_element(f.v.begin(), f.v.end());
}

double field_max(const ScalarField& f) {
  return *std::max_element(f.v.begin(), f.v.end());
}

double field_max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double field_sum(const ScalarField& f) {
  return std::accumulate(f.v.begin(), f.v.end(), 0.0);
}

bool all_finite(const ScalarField& f) {
  for (double x : f.v)
    if (!std::isfinite(x)) return false;
  return true;
}

double interp(const ScalarField& f, double px, double py) {
  const GridSpec& g = f.grid;
  const double fx = px / g.hx();
  double i0f = std::floor(fx);
  const double tx = fx - i0f;
  const int i0 = ((static_cast<int>(i0f) % g.nx) + g.nx) % g.nx;
  const int i1 = wrap(i0 + 1, g.nx);
  if (g.dim == 1) {
    return (1.0 - tx) * f.at(i0, 0) + tx * f.at(i1, 0);
  }
  const double fy = py / g.hy();
  double j0f = std::floor(fy);
  const double ty = fy - j0f;
  const int j0 = ((static_cast<int>(j0f) % g.ny) + g.ny) % g.ny;
  const int j1 = wrap(j0 + 1, g.ny);
  return (1.0 - tx) * (1.0 - ty) * f.at(i0, j0) + tx * (1.0 - ty) * f.at(i1, j0) +
         (1.0 - tx) * ty * f.at(i0, j1) + tx * ty * f.at(i1, j1);
}

}  // namespace nsac::grid
