#include "cdyn/seidel.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cdyn {

namespace {

constexpr double kEps = 1e-9;

double dot(const std::vector<double>& a, const std::vector<double>& x) {
  double s = 0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * x[j];
  return s;
}

double tol(const HalfSpace& h, const std::vector<double>& x) {
  double s = std::abs(h.b);
  for (std::size_t j = 0; j < x.size(); ++j) s += std::abs(h.a[j] * x[j]);
  return kEps * (1.0 + s);
}

std::optional<std::vector<double>> solve(const std::vector<double>& c, const std::vector<HalfSpace>& rows,
                                         const std::vector<double>& lo, const std::vector<double>& hi) {
  std::size_t d = c.size();
  if (d == 0) {
    for (const auto& h : rows)
      if (h.b < -kEps * (1.0 + std::abs(h.b))) return std::nullopt;
    return std::vector<double>{};
  }
  for (std::size_t j = 0; j < d; ++j)
    if (lo[j] > hi[j]) return std::nullopt;

  std::vector<double> x(d);
  for (std::size_t j = 0; j < d; ++j) x[j] = c[j] >= 0 ? hi[j] : lo[j];

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const HalfSpace& h = rows[i];
    if (dot(h.a, x) <= h.b + tol(h, x)) continue;

    std::size_t p = 0;
    for (std::size_t j = 1; j < d; ++j)
      if (std::abs(h.a[j]) > std::abs(h.a[p])) p = j;
    if (std::abs(h.a[p]) < kEps) return std::nullopt;

    // on the boundary x_p = g0 + g.x'
    double g0 = h.b / h.a[p];
    std::vector<double> g(d - 1);
    auto drop = [p](const std::vector<double>& v) {
      std::vector<double> r;
      r.reserve(v.size() - 1);
      for (std::size_t j = 0; j < v.size(); ++j)
        if (j != p) r.push_back(v[j]);
      return r;
    };
    for (std::size_t j = 0, k = 0; j < d; ++j)
      if (j != p) g[k++] = -h.a[j] / h.a[p];

    std::vector<HalfSpace> sub;
    sub.reserve(i + 2);
    for (std::size_t k = 0; k < i; ++k) {
      const HalfSpace& r = rows[k];
      HalfSpace s{drop(r.a), r.b - r.a[p] * g0};
      for (std::size_t j = 0; j + 1 < d; ++j) s.a[j] += r.a[p] * g[j];
      sub.push_back(std::move(s));
    }
    sub.push_back({g, hi[p] - g0});
    std::vector<double> ng(g);
    for (double& v : ng) v = -v;
    sub.push_back({ng, g0 - lo[p]});

    std::vector<double> sc = drop(c);
    for (std::size_t j = 0; j + 1 < d; ++j) sc[j] += c[p] * g[j];

    auto y = solve(sc, sub, drop(lo), drop(hi));
    if (!y) return std::nullopt;
    double xp = g0;
    for (std::size_t j = 0; j + 1 < d; ++j) xp += g[j] * (*y)[j];
    for (std::size_t j = 0, k = 0; j < d; ++j) x[j] = j == p ? xp : (*y)[k++];
  }
  return x;
}

} // namespace

std::optional<std::vector<double>> seidel_lp(const std::vector<double>& c, std::vector<HalfSpace> rows,
                                             const std::vector<double>& lo, const std::vector<double>& hi,
                                             std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::shuffle(rows.begin(), rows.end(), rng);
  return solve(c, rows, lo, hi);
}

} // namespace cdyn
