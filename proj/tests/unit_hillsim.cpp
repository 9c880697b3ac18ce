#include "cdyn/hillsim.hpp"

#include "doctest.h"
#include "oracle.hpp"

#include <cmath>

using namespace cdyn;

namespace {

const RegulatoryNetwork& three_node() {
  static auto net = parse_network("X : (Y)(~Z)\nY : (~X)\nZ : (~Y)");
  return net;
}

double norm_inf(const std::vector<double>& v) {
  double m = 0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

} // namespace

TEST_CASE("sampled parameterizations classify back to their parameter") {
  ParameterGraph pg(three_node());
  for (std::uint64_t k = 0; k < pg.size(); ++k) {
    auto rp = sample_region(pg, k, 17 + k);
    std::vector<FactorParameter> want;
    for (auto t : pg.index_to_tuple(k)) want.push_back(pg.factor(want.size()).at(t));
    CHECK(classify(pg.network(), rp) == want);
    for (const auto& e : rp.edges) {
      CHECK(e.l > 0);
      CHECK(e.l < e.h);
      CHECK(e.theta > 0);
    }
  }
  // the same seed gives the same point
  auto a = sample_region(pg, 98, 4), b = sample_region(pg, 98, 4);
  CHECK(witness_json(pg.network(), a) == witness_json(pg.network(), b));
}

TEST_CASE("witness json round trip") {
  ParameterGraph pg(three_node());
  auto rp = sample_region(pg, 51, 2);
  rp.hill_n = 7;
  auto back = parse_witness(pg.network(), witness_json(pg.network(), rp));
  CHECK(back.hill_n == 7);
  REQUIRE(back.edges.size() == rp.edges.size());
  for (std::size_t e = 0; e < rp.edges.size(); ++e) {
    CHECK(back.edges[e].l == rp.edges[e].l);
    CHECK(back.edges[e].h == rp.edges[e].h);
    CHECK(back.edges[e].theta == rp.edges[e].theta);
  }
  CHECK_THROWS(parse_witness(pg.network(), R"({"edges":[]})"));
  CHECK_THROWS(parse_witness(parse_network("A : (~A)"), witness_json(pg.network(), rp)));
}

TEST_CASE("hill input against the closed form") {
  const auto& net = three_node();
  ParameterGraph pg(net);
  auto rp = sample_region(pg, 98, 1);
  rp.hill_n = 6;
  std::vector<double> x{0.7, 1.3, 2.1};
  auto sig = [&](std::size_t e) {
    const auto& v = rp.edges[e];
    double xs = std::pow(x[net.edge(e).source], rp.hill_n), ts = std::pow(v.theta, rp.hill_n);
    double up = xs / (xs + ts);
    if (net.edge(e).sign == Sign::repressing) up = 1 - up;
    return v.l + (v.h - v.l) * up;
  };
  // X = (Y)(~Z): product of two terms; Y and Z have one input each
  double want_x = sig(net.inputs(0)[0]) * sig(net.inputs(0)[1]);
  CHECK(hill_input(net, rp, 0, x) == doctest::Approx(want_x).epsilon(1e-12));
  CHECK(hill_input(net, rp, 1, x) == doctest::Approx(sig(net.inputs(1)[0])).epsilon(1e-12));
  auto f = vector_field(net, rp, x);
  for (std::size_t i = 0; i < 3; ++i) CHECK(f[i] == doctest::Approx(-x[i] + hill_input(net, rp, i, x)));

  // steep limit inside a domain matches the step function
  rp.hill_n = 200;
  auto stg_point = oracle::domain_point(net, rp, {1, 1, 0});
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(hill_input(net, rp, i, stg_point) == doctest::Approx(oracle::step_production(net, rp, i, stg_point)).epsilon(1e-6));
  CHECK(domain_of(net, rp, stg_point) == std::vector<std::size_t>{1, 1, 0});
}

TEST_CASE("simulation of pure decay") {
  // A : (~A) with l = h behaves like dx/dt = -x + c
  auto net = parse_network("A : (~A)");
  RealParameterization rp;
  rp.edges = {{2.0, 2.0 + 1e-12, 1.0}};
  auto tr = simulate(net, rp, {5.0}, {.t_end = 3, .dt = 0.01, .stride = 1});
  REQUIRE(tr.times.size() == 301);
  CHECK(tr.times.back() == doctest::Approx(3));
  for (std::size_t s = 0; s < tr.times.size(); s += 50)
    CHECK(tr.values[0][s] == doctest::Approx(2 + 3 * std::exp(-tr.times[s])).epsilon(1e-8));
  CHECK_THROWS_AS(simulate(net, rp, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(simulate(net, rp, {1}, {.t_end = 1, .dt = 0}), std::invalid_argument);
}

TEST_CASE("initial conditions and equilibria") {
  ParameterGraph pg(three_node());
  auto rp = sample_region(pg, 52, 3);
  auto a = initial_conditions(pg.network(), rp, 10, 9), b = initial_conditions(pg.network(), rp, 10, 9);
  CHECK(a == b);
  CHECK(a.size() == 10);
  for (const auto& x : a)
    for (double v : x) CHECK(v > 0);
  auto tr = simulate(pg.network(), rp, a[0], {.t_end = 60});
  auto x = refine_equilibrium(pg.network(), rp, tr.final_state());
  CHECK(norm_inf(vector_field(pg.network(), rp, x)) < 1e-9);
}

TEST_CASE("extrema order of shifted sines") {
  Trajectory tr;
  for (int s = 0; s <= 4000; ++s) tr.times.push_back(s * 0.01);
  tr.values.resize(3);
  for (double t : tr.times) {
    tr.values[0].push_back(2 + std::sin(t));
    tr.values[1].push_back(2 + std::sin(t - 1));
    tr.values[2].push_back(1.0);
  }
  auto ev = extrema_order(tr, 0.05);
  REQUIRE(ev.size() == 4);
  // one period starting at a peak of variable 0
  CHECK(ev[0].var == 0);
  CHECK(ev[0].kind == ExtremumKind::max);
  CHECK(ev[1].var == 1);
  CHECK(ev[1].kind == ExtremumKind::max);
  CHECK(ev[1].time - ev[0].time == doctest::Approx(1).epsilon(0.02));
  CHECK(ev[2].var == 0);
  CHECK(ev[2].kind == ExtremumKind::min);
  CHECK(ev[3].var == 1);

  Trajectory flat;
  flat.times = {0, 1, 2, 3, 4};
  flat.values = {{1, 1, 1, 1, 1}};
  CHECK_THROWS_AS(extrema_order(flat, 0.05), NoOscillationError);
}
