#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "nsac/grid.hpp"

using namespace nsac::grid;

namespace {

constexpr double kPi = 3.14159265358979323846;

GridSpec grid1d(int nx, double lx = 1.0) {
  GridSpec g;
  g.dim = 1;
  g.nx = nx;
  g.ny = 1;
  g.lx = lx;
  return g;
}

GridSpec grid2d(int nx, int ny, double lx = 1.0, double ly = 1.0) {
  GridSpec g;
  g.dim = 2;
  g.nx = nx;
  g.ny = ny;
  g.lx = lx;
  g.ly = ly;
  return g;
}

ScalarField sample1d(const GridSpec& g, double (*f)(double)) {
  ScalarField out(g);
  for (int i = 0; i < g.nx; ++i) out.at(i, 0) = f(i * g.hx());
  return out;
}

double max_err(const ScalarField& got, double (*ref)(double)) {
  double m = 0.0;
  for (int i = 0; i < got.grid.nx; ++i)
    m = std::max(m, std::abs(got.at(i, 0) - ref(i * got.grid.hx())));
  return m;
}

double sin2pi(double x) { return std::sin(2.0 * kPi * x); }
double dsin2pi(double x) { return 2.0 * kPi * std::cos(2.0 * kPi * x); }
double d2sin2pi(double x) { return -4.0 * kPi * kPi * std::sin(2.0 * kPi * x); }

}  // namespace

TEST_CASE("gradient of a constant vanishes") {
  ScalarField f(grid2d(16, 16), 3.7);
  VectorField g = gradient(f);
  for (double v : g.x) CHECK(v == 0.0);
  for (double v : g.y) CHECK(v == 0.0);
}

TEST_CASE("1D gradient of sin(2 pi x) matches the analytic derivative") {
  GridSpec g = grid1d(128);
  VectorField grad = gradient(sample1d(g, sin2pi));
  double m = 0.0;
  for (int i = 0; i < g.nx; ++i)
    m = std::max(m, std::abs(grad.xat(i, 0) - dsin2pi(i * g.hx())));
  // central-difference truncation (2*pi)^3 h^2 / 6 ~ 2.5e-3 at nx=128
  CHECK(m <= 2.6e-3);
}

TEST_CASE("divergence of gradient equals the wide-stencil laplacian bit for bit") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (const GridSpec& g : {grid1d(64), grid2d(24, 40, 1.0, 2.0)}) {
    ScalarField f(g);
    for (double& v : f.v) v = dist(rng);
    ScalarField a = divergence(gradient(f));
    ScalarField b = laplacian_wide(f);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(a.v[i] == b.v[i]);
  }
}

TEST_CASE("laplacian of sin(2 pi x) matches -4 pi^2 sin(2 pi x)") {
  CHECK(max_err(laplacian(sample1d(grid1d(128), sin2pi)), d2sin2pi) <= 0.02);
}

TEST_CASE("laplacian error drops by at least 3.8x from nx=64 to nx=128") {
  double e64 = max_err(laplacian(sample1d(grid1d(64), sin2pi)), d2sin2pi);
  double e128 = max_err(laplacian(sample1d(grid1d(128), sin2pi)), d2sin2pi);
  CHECK(e64 / e128 >= 3.8);
}

TEST_CASE("operators are second order on smooth 2D data") {
  auto run = [](int n) {
    GridSpec g = grid2d(n, n);
    ScalarField f(g);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        f.at(i, j) = std::sin(2.0 * kPi * i * g.hx()) *
                     std::cos(4.0 * kPi * j * g.hy());
    VectorField gr = gradient(f);
    ScalarField lap = laplacian(f);
    double eg = 0.0, el = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const double x = i * g.hx(), y = j * g.hy();
        const double sx = std::sin(2.0 * kPi * x), cx = std::cos(2.0 * kPi * x);
        const double sy = std::sin(4.0 * kPi * y), cy = std::cos(4.0 * kPi * y);
        eg = std::max(eg, std::abs(gr.xat(i, j) - 2.0 * kPi * cx * cy));
        eg = std::max(eg, std::abs(gr.yat(i, j) + 4.0 * kPi * sx * sy));
        el = std::max(el, std::abs(lap.at(i, j) + 20.0 * kPi * kPi * sx * cy));
      }
    return std::pair{eg, el};
  };
  auto [eg1, el1] = run(64);
  auto [eg2, el2] = run(128);
  const double pg = std::log2(eg1 / eg2);
  const double pl = std::log2(el1 / el2);
  CHECK(pg >= 1.8);
  CHECK(pg <= 2.2);
  CHECK(pl >= 1.8);
  CHECK(pl <= 2.2);
}

TEST_CASE("sum of divergence over a periodic grid is zero to round-off") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  GridSpec g = grid2d(32, 48);
  VectorField v(g);
  for (double& a : v.x) a = dist(rng);
  for (double& a : v.y) a = dist(rng);
  ScalarField d = divergence(v);
  CHECK(std::abs(field_sum(d)) <= 1e-11);
}

TEST_CASE("operators are linear") {
  std::mt19937 rng(99);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  GridSpec g = grid1d(64);
  ScalarField f(g), h(g);
  for (double& v : f.v) v = dist(rng);
  for (double& v : h.v) v = dist(rng);
  const double a = 1.5, b = -0.25;
  ScalarField comb(g);
  for (std::size_t i = 0; i < comb.size(); ++i) comb.v[i] = a * f.v[i] + b * h.v[i];
  ScalarField lc = laplacian(comb), lf = laplacian(f), lh = laplacian(h);
  VectorField gc = gradient(comb), gf = gradient(f), gh = gradient(h);
  for (std::size_t i = 0; i < comb.size(); ++i) {
    CHECK(lc.v[i] == doctest::Approx(a * lf.v[i] + b * lh.v[i]).epsilon(1e-12));
    CHECK(gc.x[i] == doctest::Approx(a * gf.x[i] + b * gh.x[i]).epsilon(1e-12));
  }
}

TEST_CASE("deformation tensor of a linear shear and of a rigid rotation") {
  const double gamma = 0.8, omega = 1.3;
  GridSpec g = grid2d(16, 16);
  VectorField shear(g), rot(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      const double x = i * g.hx(), y = j * g.hy();
      shear.xat(i, j) = gamma * y;
      shear.yat(i, j) = 0.0;
      rot.xat(i, j) = -omega * y;
      rot.yat(i, j) = omega * x;
    }
  SymTensorField ds = deformation_tensor(shear);
  SymTensorField dr = deformation_tensor(rot);
  // interior rows only: the periodic wrap of a non-periodic linear profile
  // contaminates the first/last rows
  for (int j = 2; j < g.ny - 2; ++j)
    for (int i = 2; i < g.nx - 2; ++i) {
      const std::size_t c = static_cast<std::size_t>(j) * g.nx + i;
      CHECK(ds.xx[c] == doctest::Approx(0.0));
      CHECK(ds.xy[c] == doctest::Approx(gamma / 2.0).epsilon(1e-12));
      CHECK(ds.yy[c] == doctest::Approx(0.0));
      CHECK(dr.xx[c] == doctest::Approx(0.0));
      CHECK(std::abs(dr.xy[c]) <= 1e-12);
      CHECK(dr.yy[c] == doctest::Approx(0.0));
    }
}

TEST_CASE("constant velocity gives zero deformation and zero viscous stress") {
  GridSpec g = grid2d(16, 16);
  VectorField u(g, 0.4, -0.7);
  SymTensorField d = deformation_tensor(u);
  SymTensorField s = viscous_stress(u, 0.3, 0.2);
  for (std::size_t c = 0; c < g.cells(); ++c) {
    CHECK(d.xx[c] == 0.0);
    CHECK(d.xy[c] == 0.0);
    CHECK(s.xx[c] == 0.0);
    CHECK(s.yy[c] == 0.0);
  }
}

TEST_CASE("shape mismatch is rejected") {
  ScalarField a(grid1d(16));
  CHECK_THROWS_AS(ScalarField(grid1d(16), std::vector<double>(8, 0.0)),
                  ShapeMismatchError);
  GridSpec bad = grid1d(16);
  bad.nx = 4;  // below the minimum cell count
  CHECK_THROWS(bad.validate());
}

TEST_CASE("bilinear interpolation reproduces cell values and wraps periodically") {
  GridSpec g = grid2d(16, 16);
  ScalarField f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f.at(i, j) = std::sin(2.0 * kPi * i * g.hx());
  CHECK(interp(f, 3 * g.hx(), 5 * g.hy()) == doctest::Approx(f.at(3, 5)));
  // halfway between cells 0 and 1 along x
  CHECK(interp(f, 0.5 * g.hx(), 0.0) ==
        doctest::Approx(0.5 * (f.at(0, 0) + f.at(1, 0))));
  // one full period away
  CHECK(interp(f, 1.0 + 3 * g.hx(), 5 * g.hy()) == doctest::Approx(f.at(3, 5)));
}
