// First-order Godunov finite-volume reference solver for convex scalar laws.
// Test-only: independent of the front-tracking code path it checks.
#ifndef WFT_TESTS_ORACLES_GODUNOV_HPP_
#define WFT_TESTS_ORACLES_GODUNOV_HPP_

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "wft/profile.hpp"

namespace oracle {

struct ConvexFlux {
  std::function<double(double)> f;
  std::function<double(double)> df;
};

// Exact Godunov flux for a convex f.
inline double godunov_flux(const ConvexFlux& flux, double ul, double ur) {
  if (ul > ur) return std::max(flux.f(ul), flux.f(ur));
  if (flux.df(ul) >= 0) return flux.f(ul);
  if (flux.df(ur) <= 0) return flux.f(ur);
  // Sonic point inside (ul, ur): bisection on f'.
  double lo = ul, hi = ur;
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    double mid = 0.5 * (lo + hi);
    (flux.df(mid) < 0 ? lo : hi) = mid;
  }
  return flux.f(0.5 * (lo + hi));
}

struct Grid {
  double x_lo;
  double dx;
  std::vector<double> cells;
};

// Exact cell averages of a piecewise-constant profile.
inline Grid cell_averages(const wft::Profile<double>& p, double x_lo, double x_hi, double dx) {
  Grid g{x_lo, dx, {}};
  const int n = static_cast<int>(std::llround((x_hi - x_lo) / dx));
  g.cells.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double a = x_lo + i * dx;
    g.cells[static_cast<std::size_t>(i)] = wft::integral(p, a, a + dx) / dx;
  }
  return g;
}

// Advances the cell averages to each requested time (increasing), CFL 0.45,
// with zero-gradient boundaries. Returns one grid per time.
inline std::map<double, Grid> evolve(const ConvexFlux& flux, Grid grid,
                                     const std::vector<double>& times, double max_speed) {
  std::map<double, Grid> out;
  double t = 0.0;
  const std::size_t n = grid.cells.size();
  std::vector<double> fluxes(n + 1);
  for (double target : times) {
    while (t < target) {
      double dt = std::min(0.45 * grid.dx / max_speed, target - t);
      for (std::size_t i = 0; i <= n; ++i) {
        const double ul = grid.cells[i == 0 ? 0 : i - 1];
        const double ur = grid.cells[i == n ? n - 1 : i];
        fluxes[i] = godunov_flux(flux, ul, ur);
      }
      const double r = dt / grid.dx;
      for (std::size_t i = 0; i < n; ++i) grid.cells[i] -= r * (fluxes[i + 1] - fluxes[i]);
      t += dt;
    }
    out.emplace(target, grid);
  }
  return out;
}

// Exact L1 distance between a profile and the piecewise-constant grid data.
inline double l1_distance(const wft::Profile<double>& p, const Grid& g) {
  double sum = 0.0;
  const auto& br = p.breakpoints();
  for (std::size_t i = 0; i < g.cells.size(); ++i) {
    const double a = g.x_lo + static_cast<double>(i) * g.dx;
    const double b = a + g.dx;
    const double c = g.cells[i];
    double cursor = a;
    auto it = std::upper_bound(br.begin(), br.end(), a);
    while (cursor < b) {
      double next = (it != br.end() && *it < b) ? *it : b;
      sum += std::abs(p(cursor) - c) * (next - cursor);
      cursor = next;
      if (it != br.end()) ++it;
    }
  }
  return sum;
}

}  // namespace oracle

#endif  // WFT_TESTS_ORACLES_GODUNOV_HPP_
