#include "cdyn/hillsim.hpp"
#include "cdyn/seidel.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace cdyn {

using nlohmann::json;

namespace {

// values of the node's input combinations and its sorted thresholds, in log space for products
struct NodeRealization {
  std::vector<double> lo, hi;  // per input position
  std::vector<double> thresholds;  // ascending
};

std::vector<double> random_weights(std::size_t n, const BandMap& band, std::mt19937_64& rng, std::size_t vertices) {
  auto base = separating_weights(n, band, std::vector<double>(n, -1.0));
  if (!base) throw std::logic_error("band map is not realizable");
  double top = 2 * *std::max_element(base->begin(), base->end()) + 1;
  std::uniform_real_distribution<double> u(-1, 1);
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> w(n, 0.0);
  double wsum = ex(rng);
  for (std::size_t e = 0; e < n; ++e) w[e] = wsum * (*base)[e];
  for (std::size_t k = 0; k < vertices; ++k) {
    std::vector<double> c(n);
    for (auto& x : c) x = u(rng);
    auto v = separating_weights(n, band, c, top);
    if (!v) continue;
    double a = ex(rng);
    wsum += a;
    for (std::size_t e = 0; e < n; ++e) w[e] += a * (*v)[e];
  }
  for (auto& x : w) x /= wsum;
  return w;
}

std::vector<double> place_thresholds(const std::vector<double>& values, const BandMap& band, std::size_t m,
                                     double pad, std::mt19937_64& rng) {
  double vmin = *std::min_element(values.begin(), values.end());
  double vmax = *std::max_element(values.begin(), values.end());
  std::vector<std::pair<double, double>> gap(m);
  for (std::size_t k = 1; k <= m; ++k) {
    double lo = vmin - pad, hi = vmax + pad;
    for (std::size_t s = 0; s < values.size(); ++s) {
      if (band[s] < k) lo = std::max(lo, values[s]);
      else hi = std::min(hi, values[s]);
    }
    if (!(lo < hi)) throw std::logic_error("empty threshold gap");
    gap[k - 1] = {lo, hi};
  }
  std::uniform_real_distribution<double> jitter(-0.15, 0.15);
  std::vector<double> t(m);
  for (std::size_t k = 0; k < m;) {
    std::size_t r = k;
    while (r < m && gap[r] == gap[k]) ++r;
    auto [lo, hi] = gap[k];
    double step = (hi - lo) / double(r - k + 1);
    for (std::size_t j = k; j < r; ++j) t[j] = lo + step * (double(j - k + 1) + jitter(rng));
    k = r;
  }
  return t;
}

NodeRealization realize_node(const RegulatoryNetwork& net, std::size_t i, const FactorParameter& fp,
                             std::mt19937_64& rng, const SampleOptions& opt) {
  std::size_t n = net.in_degree(i), m = net.out_degree(i);
  NodeRealization r;
  std::size_t states = std::size_t(1) << n;
  if (net.interaction(i) == Interaction::mixed) {
    const auto& set = realizable_logic(net.group_sizes(i), m);
    auto it = set.lookup.find(std::string(fp.logic.begin(), fp.logic.end()));
    if (it == set.lookup.end()) throw std::invalid_argument("factor parameter of " + net.name(i) + " is not realizable");
    const auto& w = set.sampled[it->second];
    r.lo.assign(w.begin(), w.begin() + std::ptrdiff_t(n));
    r.hi.assign(w.begin() + std::ptrdiff_t(n), w.begin() + std::ptrdiff_t(2 * n));
    r.thresholds.assign(w.begin() + std::ptrdiff_t(2 * n), w.end());
    return r;
  }
  auto w = random_weights(n, fp.logic, rng, opt.vertices);
  std::vector<double> values(states);
  if (net.interaction(i) == Interaction::product) {
    std::uniform_real_distribution<double> a(-1, 1);
    for (std::size_t e = 0; e < n; ++e) {
      double la = a(rng);
      r.lo.push_back(la);
      r.hi.push_back(la + opt.log_margin * w[e]);
    }
    for (std::size_t s = 0; s < states; ++s) {
      double v = 0;
      for (std::size_t e = 0; e < n; ++e) v += (s >> e & 1) ? r.hi[e] : r.lo[e];
      values[s] = v;
    }
    auto t = place_thresholds(values, fp.logic, m, opt.log_margin, rng);
    for (auto& x : r.lo) x = std::exp(x);
    for (auto& x : r.hi) x = std::exp(x);
    for (auto& x : t) x = std::exp(x);
    r.thresholds = t;
  } else {
    std::uniform_real_distribution<double> a(0.2, 1.0);
    for (std::size_t e = 0; e < n; ++e) {
      double l = a(rng);
      r.lo.push_back(l);
      r.hi.push_back(l + w[e]);
    }
    for (std::size_t s = 0; s < states; ++s) {
      double v = 0;
      for (std::size_t e = 0; e < n; ++e) v += (s >> e & 1) ? r.hi[e] : r.lo[e];
      values[s] = v;
    }
    double pad = std::min(0.5, 0.5 * values[0]);
    r.thresholds = place_thresholds(values, fp.logic, m, pad, rng);
  }
  return r;
}

} // namespace

RealParameterization sample_region(const RegulatoryNetwork& net, const std::vector<FactorParameter>& params,
                                   std::uint64_t seed, const SampleOptions& opt) {
  if (params.size() != net.size()) throw std::invalid_argument("one factor parameter per node is required");
  std::mt19937_64 rng(seed);
  RealParameterization rp;
  rp.edges.resize(net.edges().size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    auto r = realize_node(net, i, params[i], rng, opt);
    for (std::size_t p = 0; p < net.in_degree(i); ++p) {
      rp.edges[net.inputs(i)[p]].l = r.lo[p];
      rp.edges[net.inputs(i)[p]].h = r.hi[p];
    }
    for (std::size_t k = 0; k < net.out_degree(i); ++k) rp.edges[net.outputs(i)[params[i].order[k]]].theta = r.thresholds[k];
  }
  if (classify(net, rp) != params) throw std::logic_error("sampled parameterization left its region");
  return rp;
}

RealParameterization sample_region(const ParameterGraph& pg, std::uint64_t k, std::uint64_t seed,
                                   const SampleOptions& opt) {
  auto t = pg.index_to_tuple(k);
  std::vector<FactorParameter> params;
  for (std::size_t i = 0; i < t.size(); ++i) params.push_back(pg.factor(i).at(t[i]));
  return sample_region(pg.network(), params, seed, opt);
}

std::vector<FactorParameter> classify(const RegulatoryNetwork& net, const RealParameterization& rp) {
  std::vector<FactorParameter> out(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& outs = net.outputs(i);
    std::vector<std::uint8_t> order(outs.size());
    std::iota(order.begin(), order.end(), std::uint8_t(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return rp.edges[outs[a]].theta < rp.edges[outs[b]].theta; });
    std::size_t n = net.in_degree(i);
    BandMap band(std::size_t(1) << n);
    for (std::size_t s = 0; s < band.size(); ++s) {
      double v = 1;
      std::size_t p = 0;
      for (std::size_t g : net.group_sizes(i)) {
        double sum = 0;
        for (std::size_t k = 0; k < g; ++k, ++p) {
          const auto& ev = rp.edges[net.inputs(i)[p]];
          sum += (s >> p & 1) ? ev.h : ev.l;
        }
        v *= sum;
      }
      std::size_t b = 0;
      for (std::size_t e : outs) b += rp.edges[e].theta < v;
      band[s] = std::uint8_t(b);
    }
    out[i] = {order, band};
  }
  return out;
}

double hill_input(const RegulatoryNetwork& net, const RealParameterization& rp, std::size_t i,
                  const std::vector<double>& x) {
  double prod = 1;
  std::size_t p = 0;
  const auto& in = net.inputs(i);
  for (std::size_t g : net.group_sizes(i)) {
    double sum = 0;
    for (std::size_t k = 0; k < g; ++k, ++p) {
      const Edge& e = net.edge(in[p]);
      const EdgeValues& v = rp.edges[in[p]];
      double r = std::pow(std::max(x[e.source], 0.0) / v.theta, rp.hill_n);
      double frac = std::isinf(r) ? 1.0 : r / (1 + r);
      if (e.sign == Sign::repressing) frac = 1 - frac;
      sum += v.l + (v.h - v.l) * frac;
    }
    prod *= sum;
  }
  return prod;
}

std::vector<double> vector_field(const RegulatoryNetwork& net, const RealParameterization& rp,
                                 const std::vector<double>& x) {
  std::vector<double> f(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) f[i] = -x[i] + hill_input(net, rp, i, x);
  return f;
}

std::vector<double> Trajectory::final_state() const {
  std::vector<double> x;
  for (const auto& v : values) x.push_back(v.back());
  return x;
}

Trajectory simulate(const RegulatoryNetwork& net, const RealParameterization& rp, const std::vector<double>& x0,
                    const SimOptions& opt) {
  std::size_t n = net.size();
  if (x0.size() != n) throw std::invalid_argument("initial condition has wrong dimension");
  if (!(opt.dt > 0) || !(opt.t_end > 0)) throw std::invalid_argument("dt and t_end must be positive");
  Trajectory tr;
  tr.values.resize(n);
  std::vector<double> x = x0, k1, k2, k3, k4, tmp(n);
  auto record = [&](double t) {
    tr.times.push_back(t);
    for (std::size_t i = 0; i < n; ++i) tr.values[i].push_back(x[i]);
  };
  record(0);
  std::size_t steps = std::size_t(std::llround(opt.t_end / opt.dt));
  double h = opt.dt;
  for (std::size_t s = 1; s <= steps; ++s) {
    k1 = vector_field(net, rp, x);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
    k2 = vector_field(net, rp, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
    k3 = vector_field(net, rp, tmp);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
    k4 = vector_field(net, rp, tmp);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      if (!std::isfinite(x[i]))
        throw NumericalError("state of " + net.name(i) + " became non-finite at t=" + std::to_string(double(s) * h));
    }
    if (s % opt.stride == 0 || s == steps) record(double(s) * h);
  }
  return tr;
}

std::vector<std::size_t> domain_of(const RegulatoryNetwork& net, const RealParameterization& rp,
                                   const std::vector<double>& x) {
  std::vector<std::size_t> c(net.size());
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t e : net.outputs(i)) c[i] += rp.edges[e].theta < x[i];
  return c;
}

std::vector<std::vector<double>> initial_conditions(const RegulatoryNetwork& net, const RealParameterization& rp,
                                                    std::size_t count, std::uint64_t seed) {
  std::size_t n = net.size();
  std::vector<double> lo(n), hi(n);
  for (std::size_t i = 0; i < n; ++i) {
    double a = 1e300, b = 0;
    for (std::size_t e : net.outputs(i)) {
      a = std::min(a, rp.edges[e].theta);
      b = std::max(b, rp.edges[e].theta);
    }
    // extreme values of the input function
    double pmin = 1, pmax = 1;
    std::size_t p = 0;
    for (std::size_t g : net.group_sizes(i)) {
      double smin = 0, smax = 0;
      for (std::size_t k = 0; k < g; ++k, ++p) {
        smin += rp.edges[net.inputs(i)[p]].l;
        smax += rp.edges[net.inputs(i)[p]].h;
      }
      pmin *= smin;
      pmax *= smax;
    }
    lo[i] = std::min(a, pmin) / 2;
    hi[i] = std::max(b, pmax) * 2;
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<double>> out(count, std::vector<double>(n));
  for (auto& x : out)
    for (std::size_t i = 0; i < n; ++i)
      x[i] = std::exp(std::uniform_real_distribution<double>(std::log(lo[i]), std::log(hi[i]))(rng));
  return out;
}

std::vector<double> refine_equilibrium(const RegulatoryNetwork& net, const RealParameterization& rp,
                                       std::vector<double> x) {
  std::size_t n = x.size();
  for (int iter = 0; iter < 100; ++iter) {
    auto f = vector_field(net, rp, x);
    double norm = 0;
    for (double v : f) norm = std::max(norm, std::abs(v));
    if (norm < 1e-13) break;
    // Jacobian by central differences, then Gaussian elimination with partial pivoting
    std::vector<std::vector<double>> J(n, std::vector<double>(n + 1));
    for (std::size_t j = 0; j < n; ++j) {
      double hstep = 1e-7 * std::max(1.0, std::abs(x[j]));
      auto xp = x, xm = x;
      xp[j] += hstep;
      xm[j] -= hstep;
      auto fp = vector_field(net, rp, xp), fm = vector_field(net, rp, xm);
      for (std::size_t i = 0; i < n; ++i) J[i][j] = (fp[i] - fm[i]) / (2 * hstep);
    }
    for (std::size_t i = 0; i < n; ++i) J[i][n] = -f[i];
    for (std::size_t c = 0; c < n; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < n; ++r)
        if (std::abs(J[r][c]) > std::abs(J[piv][c])) piv = r;
      std::swap(J[c], J[piv]);
      if (std::abs(J[c][c]) < 1e-300) throw NumericalError("singular Jacobian during equilibrium refinement");
      for (std::size_t r = 0; r < n; ++r) {
        if (r == c) continue;
        double fac = J[r][c] / J[c][c];
        for (std::size_t k = c; k <= n; ++k) J[r][k] -= fac * J[c][k];
      }
    }
    for (std::size_t i = 0; i < n; ++i) x[i] += J[i][n] / J[i][i];
  }
  return x;
}

std::vector<TrajectoryEvent> extrema_order(const Trajectory& traj, double eps, double transient) {
  if (traj.times.size() < 3) throw std::invalid_argument("trajectory too short");
  double t0 = traj.times.front() + transient * (traj.times.back() - traj.times.front());
  std::size_t start = std::size_t(std::lower_bound(traj.times.begin(), traj.times.end(), t0) - traj.times.begin());
  std::vector<double> times(traj.times.begin() + std::ptrdiff_t(start), traj.times.end());
  if (times.size() < 3) throw std::invalid_argument("transient leaves too few samples");

  std::vector<std::vector<ExtremalInterval>> ext(traj.values.size());
  std::vector<std::size_t> osc;
  for (std::size_t v = 0; v < traj.values.size(); ++v) {
    std::vector<double> w(traj.values[v].begin() + std::ptrdiff_t(start), traj.values[v].end());
    auto [mn, mx] = std::minmax_element(w.begin(), w.end());
    double scale = std::max(std::abs(*mn), std::abs(*mx));
    if (!(*mx - *mn > eps * scale)) continue;
    osc.push_back(v);
    for (const auto& e : extremal_intervals(times, w, eps))
      if (e.t_star > times.front() && e.t_star < times.back()) ext[v].push_back(e);
  }
  if (osc.empty()) throw NoOscillationError("no variable oscillates after the transient");
  std::size_t ref = osc.front();
  std::vector<double> peaks;
  for (const auto& e : ext[ref])
    if (e.kind == ExtremumKind::max) peaks.push_back(e.t_star);
  if (peaks.size() < 2) throw IrregularOscillationError("reference variable shows fewer than two maxima");
  double a = peaks[peaks.size() - 2], b = peaks.back();
  std::vector<TrajectoryEvent> out;
  for (std::size_t v : osc) {
    std::size_t n_min = 0, n_max = 0;
    for (const auto& e : ext[v])
      if (e.t_star >= a && e.t_star < b) {
        out.push_back({v, e.kind, e.t_star});
        (e.kind == ExtremumKind::min ? n_min : n_max)++;
      }
    if (n_min == 0 || n_max == 0)
      throw IrregularOscillationError("variable " + std::to_string(v) + " lacks a min or max within one period");
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.time < y.time; });
  return out;
}

std::string witness_json(const RegulatoryNetwork& net, const RealParameterization& rp) {
  json j;
  j["hill_n"] = rp.hill_n;
  j["edges"] = json::array();
  for (std::size_t e = 0; e < net.edges().size(); ++e) {
    const Edge& ed = net.edge(e);
    j["edges"].push_back({{"source", net.name(ed.source)},
                          {"target", net.name(ed.target)},
                          {"sign", ed.sign == Sign::activating ? "+" : "-"},
                          {"l", rp.edges[e].l},
                          {"h", rp.edges[e].h},
                          {"theta", rp.edges[e].theta}});
  }
  return j.dump(2);
}

RealParameterization parse_witness(const RegulatoryNetwork& net, const std::string& text) {
  json j = json::parse(text);
  RealParameterization rp;
  rp.hill_n = j.value("hill_n", 10.0);
  rp.edges.resize(net.edges().size());
  std::vector<bool> seen(net.edges().size(), false);
  for (const auto& x : j.at("edges")) {
    std::size_t s = net.index(x.at("source").get<std::string>()), t = net.index(x.at("target").get<std::string>());
    std::size_t found = SIZE_MAX;
    for (std::size_t e = 0; e < net.edges().size(); ++e)
      if (net.edge(e).source == s && net.edge(e).target == t) found = e;
    if (found == SIZE_MAX) throw std::invalid_argument("witness names an edge missing from the network");
    rp.edges[found] = {x.at("l").get<double>(), x.at("h").get<double>(), x.at("theta").get<double>()};
    seen[found] = true;
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw std::invalid_argument("witness misses edges");
  return rp;
}

} // namespace cdyn
