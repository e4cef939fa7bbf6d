#include "nsac/geom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <tuple>

namespace nsac::geom {

using grid::GridSpec;
using grid::ScalarField;
using grid::VectorField;

namespace {

double periodic_delta(double d, double l) {
  while (d > 0.5 * l) d -= l;
  while (d < -0.5 * l) d += l;
  return d;
}

std::vector<InterfaceSample> extract_1d(const ScalarField& phi) {
  const GridSpec& g = phi.grid;
  std::vector<InterfaceSample> out;
  for (int i = 0; i < g.nx; ++i) {
    const int ip = (i + 1) % g.nx;
    const double a = phi.at(i, 0), b = phi.at(ip, 0);
    if (a == 0.0 || a * b < 0.0) {
      InterfaceSample s;
      const double frac = a == 0.0 ? 0.0 : a / (a - b);
      s.x = std::fmod(i * g.hx() + frac * g.hx(), g.lx);
      s.y = 0.0;
      s.nx = b > a ? 1.0 : -1.0;  // toward phi > 0
      s.ny = 0.0;
      s.arc = s.x;
      out.push_back(s);
    }
  }
  if (out.empty()) throw GeomError("extract_interface: phi has uniform sign");
  return out;
}

// Edge key for marching squares stitching: (axis, i, j) identifies the
// grid edge from node (i,j) toward +x (axis 0) or +y (axis 1).
struct EdgeKey {
  int axis, i, j;
  bool operator<(const EdgeKey& o) const {
    return std::tie(axis, i, j) < std::tie(o.axis, o.i, o.j);
  }
};

struct MsVertex {
  double x, y;
};

struct MsSegment {
  EdgeKey e1, e2;
  MsVertex v1, v2;
};

std::vector<InterfaceSample> extract_2d(const ScalarField& phi) {
  const GridSpec& g = phi.grid;
  const double hx = g.hx(), hy = g.hy();

  std::vector<MsSegment> segs;
  auto edge_vertex = [&](int axis, int i, int j) -> MsVertex {
    // linear interpolation of the zero along the edge
    const int i2 = axis == 0 ? (i + 1) % g.nx : i;
    const int j2 = axis == 1 ? (j + 1) % g.ny : j;
    const double a = phi.at(i, j), b = phi.at(i2, j2);
    const double frac = a / (a - b);
    return {i * hx + (axis == 0 ? frac * hx : 0.0),
            j * hy + (axis == 1 ? frac * hy : 0.0)};
  };

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int ip = (i + 1) % g.nx, jp = (j + 1) % g.ny;
      const double c0 = phi.at(i, j), c1 = phi.at(ip, j);
      const double c2 = phi.at(ip, jp), c3 = phi.at(i, jp);
      int code = (c0 > 0.0) | ((c1 > 0.0) << 1) | ((c2 > 0.0) << 2) |
                 ((c3 > 0.0) << 3);
      if (code == 0 || code == 15) continue;

      const EdgeKey bottom{0, i, j}, right{1, ip, j}, top{0, i, jp}, left{1, i, j};
      auto add = [&](EdgeKey ea, EdgeKey eb) {
        segs.push_back({ea, eb, edge_vertex(ea.axis, ea.i, ea.j),
                        edge_vertex(eb.axis, eb.i, eb.j)});
      };
      switch (code) {
        case 1: case 14: add(left, bottom); break;
        case 2: case 13: add(bottom, right); break;
        case 3: case 12: add(left, right); break;
        case 4: case 11: add(right, top); break;
        case 6: case 9: add(bottom, top); break;
        case 7: case 8: add(left, top); break;
        case 5: case 10: {
          // saddle; disambiguate with the center average
          const double center = 0.25 * (c0 + c1 + c2 + c3);
          const bool pos = center > 0.0;
          if ((code == 5) == pos) {
            add(left, bottom);
            add(right, top);
          } else {
            add(left, top);
            add(bottom, right);
          }
          break;
        }
        default: break;
      }
    }
  }
  if (segs.empty()) throw GeomError("extract_interface: phi has uniform sign");

  // Stitch segments into ordered contours by shared edges.
  std::multimap<EdgeKey, std::size_t> by_edge;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    by_edge.insert({segs[s].e1, s});
    by_edge.insert({segs[s].e2, s});
  }
  std::vector<bool> used(segs.size(), false);
  std::vector<InterfaceSample> out;

  auto next_at = [&](EdgeKey e, std::size_t current) -> std::ptrdiff_t {
    auto [lo, hi] = by_edge.equal_range(e);
    for (auto it = lo; it != hi; ++it)
      if (it->second != current && !used[it->second]) return it->second;
    return -1;
  };

  for (std::size_t start = 0; start < segs.size(); ++start) {
    if (used[start]) continue;
    std::vector<std::pair<MsVertex, EdgeKey>> chain;
    used[start] = true;
    chain.push_back({segs[start].v1, segs[start].e1});
    chain.push_back({segs[start].v2, segs[start].e2});
    for (;;) {
      const EdgeKey tail = chain.back().second;
      const std::ptrdiff_t nxt = next_at(tail, SIZE_MAX);
      if (nxt < 0) break;
      used[nxt] = true;
      const MsSegment& s = segs[nxt];
      if (s.e1.axis == tail.axis && s.e1.i == tail.i && s.e1.j == tail.j)
        chain.push_back({s.v2, s.e2});
      else
        chain.push_back({s.v1, s.e1});
      const EdgeKey& h = chain.front().second;
      const EdgeKey& t = chain.back().second;
      if (h.axis == t.axis && h.i == t.i && h.j == t.j) break;  // closed loop
    }
    double arc = out.empty() ? 0.0 : out.back().arc;
    for (std::size_t v = 0; v + 1 < chain.size(); ++v) {  // drop duplicate closure
      InterfaceSample s;
      s.x = chain[v].first.x;
      s.y = chain[v].first.y;
      if (v > 0) {
        const double dx = periodic_delta(s.x - chain[v - 1].first.x, g.lx);
        const double dy = periodic_delta(s.y - chain[v - 1].first.y, g.ly);
        arc += std::hypot(dx, dy);
      }
      s.arc = arc;
      out.push_back(s);
    }
  }
  return out;
}

}  // namespace

std::vector<InterfaceSample> extract_interface(const ScalarField& phi) {
  return phi.grid.dim == 1 ? extract_1d(phi) : extract_2d(phi);
}

void geometry(const ScalarField& phi, std::vector<InterfaceSample>& samples) {
  const GridSpec& g = phi.grid;
  VectorField gp = grid::gradient(phi);

  if (g.dim == 1) {
    for (auto& s : samples) {
      const double gx = grid::interp({g, gp.x}, s.x, 0.0);
      if (std::abs(gx) < 1e-8) throw GeomError("geometry: degenerate gradient");
      s.nx = gx > 0 ? 1.0 : -1.0;
      s.ny = 0.0;
      s.kappa = 0.0;
    }
    return;
  }

  // Regularized level-set normal and curvature fields.
  VectorField nf(g);
  for (std::size_t c = 0; c < phi.size(); ++c) {
    const double norm = std::hypot(gp.x[c], gp.y[c]);
    if (norm > 1e-8) {
      nf.x[c] = gp.x[c] / norm;
      nf.y[c] = gp.y[c] / norm;
    }
  }
  ScalarField kappa = grid::divergence(nf);

  ScalarField gxf{g, gp.x}, gyf{g, gp.y};
  for (auto& s : samples) {
    const double gx = grid::interp(gxf, s.x, s.y);
    const double gy = grid::interp(gyf, s.x, s.y);
    const double norm = std::hypot(gx, gy);
    if (norm < 1e-8) throw GeomError("geometry: degenerate gradient at sample");
    s.nx = gx / norm;
    s.ny = gy / norm;
    s.kappa = grid::interp(kappa, s.x, s.y);
  }
}

namespace {

// First-order signed-distance estimate d = phi/|grad phi| at (x, y).
double local_distance(const ScalarField& phi, const VectorField& gp, double x,
                      double y) {
  const double p = grid::interp(phi, x, y);
  const double gx = grid::interp({phi.grid, gp.x}, x, y);
  const double gy = grid::interp({phi.grid, gp.y}, x, y);
  const double norm = std::hypot(gx, gy);
  if (norm < 1e-8) throw GeomError("normal_velocity: degenerate gradient");
  return p / norm;
}

}  // namespace

void normal_velocity(std::vector<InterfaceSample>& samples, const ScalarField& phi1,
                     const ScalarField& phi2, double dt_pair) {
  grid::require_same_grid(phi1.grid, phi2.grid, "normal_velocity");
  if (!(dt_pair > 0.0)) throw std::invalid_argument("normal_velocity: dt_pair <= 0");
  const double h = phi1.grid.hx();
  const double lx = phi1.grid.lx, ly = phi1.grid.ly;
  // Displacement against the later contour: much less biased than
  // differencing the phi/|grad phi| distance estimate, whose gradient
  // carries an O((h/eps)^2) profile-steepness error.
  const std::vector<InterfaceSample> later = extract_interface(phi2);
  if (later.empty()) throw GeomError("normal_velocity: later contour is empty");

  auto wrap = [](double d, double l) {
    while (d > 0.5 * l) d -= l;
    while (d < -0.5 * l) d += l;
    return d;
  };

  for (auto& s : samples) {
    double best = std::numeric_limits<double>::max();
    double disp = 0.0;
    for (std::size_t i = 0; i < later.size(); ++i) {
      const double px = wrap(later[i].x - s.x, lx);
      const double py = phi1.grid.dim == 2 ? wrap(later[i].y - s.y, ly) : 0.0;
      // Project onto the segment to the next sample of the same chain.
      double qx = px, qy = py;
      if (phi1.grid.dim == 2 && i + 1 < later.size() &&
          later[i + 1].arc > later[i].arc) {
        const double ex = wrap(later[i + 1].x - later[i].x, lx);
        const double ey = phi1.grid.dim == 2 ? wrap(later[i + 1].y - later[i].y, ly) : 0.0;
        const double e2 = ex * ex + ey * ey;
        if (e2 > 0.0) {
          const double tproj = std::clamp(-(px * ex + py * ey) / e2, 0.0, 1.0);
          qx = px + tproj * ex;
          qy = py + tproj * ey;
        }
      }
      const double dist2 = qx * qx + qy * qy;
      if (dist2 < best) {
        best = dist2;
        disp = qx * s.nx + qy * s.ny;
      }
    }
    if (std::abs(disp) > 2.0 * h)
      throw GeomError("normal_velocity: interface displacement exceeds 2 cells");
    s.vn = disp / dt_pair;
  }
}

void one_sided_traces(const solver::State& state, const thermo::EosModel& eos,
                      const thermo::ViscosityHeat& visc,
                      std::vector<InterfaceSample>& samples, double delta,
                      double eps) {
  const GridSpec& g = state.rho.grid;
  if (delta < 3.0 * eps)
    throw std::invalid_argument("one_sided_traces: delta must be >= 3 eps");
  const double span = g.dim == 2 ? std::min(g.lx, g.ly) : g.lx;
  if (2.0 * delta > 0.25 * span)
    throw GeomError("one_sided_traces: offset leaves the valid band");

  ScalarField p(g);
  for (std::size_t c = 0; c < g.cells(); ++c)
    p.v[c] = thermo::eos_eval(eos, state.rho.v[c], state.theta.v[c]).p;
  grid::SymTensorField S = grid::viscous_stress(state.u, visc.nu, visc.lambda);
  for (std::size_t c = 0; c < g.cells(); ++c) {
    S.xx[c] -= p.v[c];
    S.yy[c] -= p.v[c];
  }
  ScalarField ux{g, state.u.x}, uy{g, state.u.y};
  ScalarField sxx{g, S.xx}, sxy{g, S.xy}, syy{g, S.yy};

  auto richardson = [&](const ScalarField& f, const InterfaceSample& s,
                        double side) {
    const double f1 = grid::interp(f, s.x + side * delta * s.nx,
                                   s.y + side * delta * s.ny);
    const double f2 = grid::interp(f, s.x + side * 2.0 * delta * s.nx,
                                   s.y + side * 2.0 * delta * s.ny);
    return 2.0 * f1 - f2;
  };

  for (auto& s : samples) {
    SideTraces& t = s.traces;
    t.rho_plus = richardson(state.rho, s, +1.0);
    t.rho_minus = richardson(state.rho, s, -1.0);
    t.ux_plus = richardson(ux, s, +1.0);
    t.ux_minus = richardson(ux, s, -1.0);
    t.uy_plus = richardson(uy, s, +1.0);
    t.uy_minus = richardson(uy, s, -1.0);
    t.theta_plus = richardson(state.theta, s, +1.0);
    t.theta_minus = richardson(state.theta, s, -1.0);
    t.p_plus = richardson(p, s, +1.0);
    t.p_minus = richardson(p, s, -1.0);
    t.sxx_plus = richardson(sxx, s, +1.0);
    t.sxx_minus = richardson(sxx, s, -1.0);
    t.sxy_plus = richardson(sxy, s, +1.0);
    t.sxy_minus = richardson(sxy, s, -1.0);
    t.syy_plus = richardson(syy, s, +1.0);
    t.syy_minus = richardson(syy, s, -1.0);
  }
}

SignedDistanceField signed_distance(const ScalarField& phi, double band) {
  const GridSpec& g = phi.grid;
  std::vector<InterfaceSample> samples = extract_interface(phi);

  SignedDistanceField out;
  out.d = ScalarField(g);
  out.valid.assign(g.cells(), 0);
  out.band = band;

  if (g.dim == 1) {
    for (int i = 0; i < g.nx; ++i) {
      const double x = i * g.hx();
      double best = std::numeric_limits<double>::max();
      for (const auto& s : samples)
        best = std::min(best, std::abs(periodic_delta(x - s.x, g.lx)));
      const double d = (phi.at(i, 0) < 0 ? -1.0 : 1.0) * best;
      if (std::abs(d) <= band) {
        out.d.at(i, 0) = d;
        out.valid[i] = 1;
      }
    }
    return out;
  }

  // Point-to-polyline distance; coarse vertex prefilter, then exact
  // point-to-segment minimization with periodic wrapping.
  const std::size_t nv = samples.size();
  double seg_max = 0.0;
  for (std::size_t v = 0; v + 1 < nv; ++v) {
    const double dx = periodic_delta(samples[v + 1].x - samples[v].x, g.lx);
    const double dy = periodic_delta(samples[v + 1].y - samples[v].y, g.ly);
    seg_max = std::max(seg_max, std::hypot(dx, dy));
  }
  const std::size_t stride = std::max<std::size_t>(1, nv / 128);

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double x = i * g.hx(), y = j * g.hy();
      double rough = std::numeric_limits<double>::max();
      for (std::size_t v = 0; v < nv; v += stride) {
        const double dx = periodic_delta(x - samples[v].x, g.lx);
        const double dy = periodic_delta(y - samples[v].y, g.ly);
        rough = std::min(rough, std::hypot(dx, dy));
      }
      if (rough > band + (stride + 1) * seg_max) continue;

      double best2 = std::numeric_limits<double>::max();
      for (std::size_t v = 0; v < nv; ++v) {
        const auto& a = samples[v];
        const auto& b = samples[(v + 1) % nv];
        const double abx = periodic_delta(b.x - a.x, g.lx);
        const double aby = periodic_delta(b.y - a.y, g.ly);
        const double apx = periodic_delta(x - a.x, g.lx);
        const double apy = periodic_delta(y - a.y, g.ly);
        const double len2 = abx * abx + aby * aby;
        double tpar = len2 > 0 ? (apx * abx + apy * aby) / len2 : 0.0;
        tpar = std::clamp(tpar, 0.0, 1.0);
        const double ex = apx - tpar * abx, ey = apy - tpar * aby;
        best2 = std::min(best2, ex * ex + ey * ey);
      }
      const double d = (phi.at(i, j) < 0 ? -1.0 : 1.0) * std::sqrt(best2);
      if (std::abs(d) <= band) {
        out.d.at(i, j) = d;
        out.valid[static_cast<std::size_t>(j) * g.nx + i] = 1;
      }
    }
  }
  return out;
}

double bubble_radius(const ScalarField& phi) {
  double area = 0.0;
  for (double p : phi.v) area += 0.5 * (1.0 - p);
  area *= phi.grid.cell_area();
  return std::sqrt(std::max(area, 0.0) / std::numbers::pi);
}

void write_samples_csv(const std::vector<InterfaceSample>& samples,
                       const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write samples csv: " + path);
  f << "arc,x,y,nx,ny,kappa,Vn,rho_plus,rho_minus,un_plus,un_minus,"
       "theta_plus,theta_minus,p_plus,p_minus,stress_jump_x,stress_jump_y\n";
  f.precision(12);
  for (const auto& s : samples) {
    const SideTraces& t = s.traces;
    const double un_p = t.ux_plus * s.nx + t.uy_plus * s.ny;
    const double un_m = t.ux_minus * s.nx + t.uy_minus * s.ny;
    const double sjx = (t.sxx_plus - t.sxx_minus) * s.nx +
                       (t.sxy_plus - t.sxy_minus) * s.ny;
    const double sjy = (t.sxy_plus - t.sxy_minus) * s.nx +
                       (t.syy_plus - t.syy_minus) * s.ny;
    f << s.arc << ',' << s.x << ',' << s.y << ',' << s.nx << ',' << s.ny << ','
      << s.kappa << ',' << s.vn << ',' << t.rho_plus << ',' << t.rho_minus << ','
      << un_p << ',' << un_m << ',' << t.theta_plus << ',' << t.theta_minus << ','
      << t.p_plus << ',' << t.p_minus << ',' << sjx << ',' << sjy << '\n';
  }
}

}  // namespace nsac::geom
