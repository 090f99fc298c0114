#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "locflow/field.hpp"
#include "locflow/grid.hpp"

namespace testsup {

using locflow::Boundary;
using locflow::ChartGrid;
using locflow::MetricField;
using locflow::ScalarField;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Coordinate of a node: origin + i*h per axis.
struct Coords {
  std::array<double, 4> origin{};
  const ChartGrid* grid;
  explicit Coords(const ChartGrid& g, std::array<double, 4> o = {}) : origin(o), grid(&g) {}
  std::array<double, 4> operator()(const int* c) const {
    std::array<double, 4> x{};
    for (int a = 0; a < grid->dim(); ++a) x[a] = origin[a] + c[a] * grid->spacing(a);
    return x;
  }
};

// Periodic torus grid [0, 2pi)^dim with n points per axis.
inline ChartGrid torus_grid(int dim, int n) {
  std::vector<int> ext(dim, n);
  std::vector<double> h(dim, kTwoPi / n);
  return ChartGrid(dim, ext, h, Boundary::periodic);
}

// Frozen box [lo, hi]^dim with n points per axis.
inline ChartGrid box_grid(int dim, int n, double lo, double hi) {
  std::vector<int> ext(dim, n);
  std::vector<double> h(dim, (hi - lo) / (n - 1));
  return ChartGrid(dim, ext, h, Boundary::frozen);
}

inline ScalarField sample_scalar(const ChartGrid& g,
                                 const std::function<double(const std::array<double, 4>&)>& f,
                                 std::array<double, 4> origin = {}) {
  ScalarField out(g);
  Coords xy(g, origin);
  locflow::for_each_node(g, [&](std::int64_t n, const int* c) { out[n] = f(xy(c)); });
  return out;
}

inline MetricField sample_metric(
    const ChartGrid& g,
    const std::function<void(const std::array<double, 4>&, double* /*packed*/)>& f,
    std::array<double, 4> origin = {}) {
  MetricField out(g);
  Coords xy(g, origin);
  locflow::for_each_node(g, [&](std::int64_t n, const int* c) {
    double m[10];
    f(xy(c), m);
    double* dst = out.node(n);
    for (int k = 0; k < out.comps(); ++k) dst[k] = m[k];
  });
  out.invalidate_cache();
  return out;
}

// e^{2u} delta on a torus; u analytic.
inline MetricField conformal_metric(const ChartGrid& g,
                                    const std::function<double(const std::array<double, 4>&)>& u,
                                    std::array<double, 4> origin = {}) {
  const int d = g.dim();
  return sample_metric(
      g,
      [&](const std::array<double, 4>& x, double* m) {
        const double s = std::exp(2.0 * u(x));
        int c = 0;
        for (int i = 0; i < d; ++i)
          for (int j = i; j < d; ++j) m[c++] = i == j ? s : 0.0;
      },
      origin);
}

// Stereographic round sphere chart of dimension d and given radius:
// g = 4 rho^2 / (1 + |x|^2)^2 * delta.
inline MetricField sphere_metric(const ChartGrid& g, double radius,
                                 std::array<double, 4> origin) {
  const int d = g.dim();
  return sample_metric(
      g,
      [&](const std::array<double, 4>& x, double* m) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += x[a] * x[a];
        const double lam = 4.0 * radius * radius / ((1.0 + r2) * (1.0 + r2));
        int c = 0;
        for (int i = 0; i < d; ++i)
          for (int j = i; j < d; ++j) m[c++] = i == j ? lam : 0.0;
      },
      origin);
}

// Product of two unit 2-spheres on a 4D chart (bi-stereographic).
inline MetricField s2xs2_metric(const ChartGrid& g, std::array<double, 4> origin) {
  return sample_metric(
      g,
      [&](const std::array<double, 4>& x, double* m) {
        const double ra = x[0] * x[0] + x[1] * x[1];
        const double rb = x[2] * x[2] + x[3] * x[3];
        const double la = 4.0 / ((1.0 + ra) * (1.0 + ra));
        const double lb = 4.0 / ((1.0 + rb) * (1.0 + rb));
        for (int k = 0; k < 10; ++k) m[k] = 0.0;
        m[locflow::sym_pair_index(4, 0, 0)] = la;
        m[locflow::sym_pair_index(4, 1, 1)] = la;
        m[locflow::sym_pair_index(4, 2, 2)] = lb;
        m[locflow::sym_pair_index(4, 3, 3)] = lb;
      },
      origin);
}

// Mirror of the frozen-oracle metric (see oracle_data.hpp).
inline MetricField generic4d_metric(const ChartGrid& g) {
  const double a = 0.05;
  return sample_metric(g, [&](const std::array<double, 4>& x, double* m) {
    const double x1 = x[0], x2 = x[1], x3 = x[2], x4 = x[3];
    auto P = [](int i, int j) { return locflow::sym_pair_index(4, i, j); };
    m[P(0, 0)] = 1 + a * std::sin(x1) * std::cos(x2);
    m[P(0, 1)] = a * std::sin(x1 + x2);
    m[P(0, 2)] = a * std::cos(x2 + 2 * x3);
    m[P(0, 3)] = 0.0;
    m[P(1, 1)] = 1 + a * std::cos(x2) * std::sin(2 * x3);
    m[P(1, 2)] = a * std::sin(x3 + x4);
    m[P(1, 3)] = 0.0;
    m[P(2, 2)] = 1 + a * std::sin(x3) * std::cos(x4);
    m[P(2, 3)] = a * std::cos(x1 + x4);
    m[P(3, 3)] = 1 + a * std::sin(x4) * std::cos(2 * x1);
  });
}

// Least-squares slope of log2(err) against refinement level (order fit).
inline double fitted_order(const std::vector<double>& errs) {
  const int n = static_cast<int>(errs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = i, y = -std::log2(errs[static_cast<std::size_t>(i)]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace testsup
