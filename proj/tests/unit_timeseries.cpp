#include "cdyn/timeseries.hpp"

#include "doctest.h"

#include <cmath>
#include <random>

using namespace cdyn;

namespace {

std::size_t csv_error_line(const std::string& text) {
  try {
    parse_csv(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

double triangle(double t, double period) {
  double u = std::fmod(t, period) / period;
  return u < 0.5 ? 4 * u - 1 : 3 - 4 * u;
}

} // namespace

TEST_CASE("csv parsing") {
  auto ts = parse_csv("time,A,B,C\n0,1,2,3\n1,4,5,6\n2.5,7,8,9e-1\n");
  CHECK(ts.times == std::vector<double>{0, 1, 2.5});
  CHECK(ts.genes == std::vector<std::string>{"A", "B", "C"});
  CHECK(ts.values[2][2] == doctest::Approx(0.9));
  auto sel = parse_csv("time,A,B,C\n0,1,2,3\n1,4,5,6\n", {"C", "P"}, {{"P", "A"}});
  CHECK(sel.genes == std::vector<std::string>{"C", "P"});
  CHECK(sel.values[1] == std::vector<double>{1, 4});
  CHECK(sel.gene_index("P") == 1);
  CHECK_THROWS(sel.gene_index("A"));
  CHECK_THROWS(parse_csv("time,A\n0,1\n", {"Q"}));

  CHECK(csv_error_line("time,A\n0,1\n0,2\n") == 3);
  CHECK(csv_error_line("time,A\n0,1\n1,x\n") == 3);
  CHECK(csv_error_line("time,A\n0,1\n1,nan\n") == 3);
  CHECK(csv_error_line("time,A\n0,1,2\n") == 2);
  CHECK(csv_error_line("time,A,A\n0,1,2\n") == 1);
  CHECK(csv_error_line("time\n0\n") == 1);
  CHECK(csv_error_line("time,A\n") != 0);
}

TEST_CASE("extremal intervals of a noisy triangle wave") {
  std::mt19937_64 rng(31);
  for (double eps : {0.02, 0.05, 0.1}) {
    // noise stays below eps times the clean range, so every true turn is found and its
    // interval contains the true turning time
    std::uniform_real_distribution<double> noise(-0.9 * eps * 2, 0.9 * eps * 2);
    std::vector<double> t, v;
    const double period = 10;
    for (int s = 0; s <= 1000; ++s) {
      t.push_back(2.5 + s * 0.05);  // starts on a rising flank
      v.push_back(triangle(t.back(), period) + noise(rng));
    }
    auto iv = extremal_intervals(t, v, eps);
    std::vector<std::pair<double, ExtremumKind>> truth;
    for (int k = 0; k < 12; ++k) {
      double tm = k * period + period / 2, tn = k * period;
      if (tm > t.front() && tm < t.back()) truth.push_back({tm, ExtremumKind::max});
      if (tn > t.front() && tn < t.back()) truth.push_back({tn, ExtremumKind::min});
    }
    std::size_t interior = 0;
    for (const auto& e : iv) {
      CHECK(e.t_lo <= e.t_star);
      CHECK(e.t_star <= e.t_hi);
      interior += e.t_star > t.front() + 1 && e.t_star < t.back() - 1;
    }
    CHECK(interior == truth.size());
    for (std::size_t k = 1; k < iv.size(); ++k) CHECK(iv[k].kind != iv[k - 1].kind);
    for (auto [tt, kind] : truth) {
      bool covered = false;
      for (const auto& e : iv) covered |= e.kind == kind && e.t_lo <= tt && tt <= e.t_hi;
      CAPTURE(eps);
      CAPTURE(tt);
      CHECK(covered);
    }
  }
}

TEST_CASE("larger noise levels never add extrema") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> N(0, 0.1);
  std::vector<double> t, v;
  for (int s = 0; s < 400; ++s) {
    t.push_back(s);
    v.push_back(std::sin(s * 0.07) + 0.5 * std::sin(s * 0.31) + N(rng));
  }
  std::size_t prev = SIZE_MAX;
  for (double eps = 0; eps <= 0.5; eps += 0.025) {
    auto n = extremal_intervals(t, v, eps).size();
    CHECK(n <= prev);
    prev = n;
  }
  CHECK(extremal_intervals(t, std::vector<double>(400, 2.0), 0.1).empty());
  CHECK_THROWS(extremal_intervals({0, 0}, {1, 2}, 0.1));
  CHECK_THROWS(extremal_intervals({0, 1}, {1, 2}, -0.1));
  CHECK_THROWS(extremal_intervals({0, 1}, {1, NAN}, 0.1));
}

TEST_CASE("pattern diagrams from intervals") {
  using K = ExtremumKind;
  std::vector<std::vector<ExtremalInterval>> iv{
      {{K::min, 0, 1, 0.5, 0}, {K::max, 2, 3, 2.5, 1}},
      {{K::max, 0.5, 2.5, 1.5, 1}, {K::min, 4, 5, 4.5, 0}},
  };
  auto pd = build_pattern_diagram({"X", "Y"}, iv);
  REQUIRE(pd.size() == 4);
  // X min [0,1], X max [2,3], Y max [0.5,2.5], Y min [4,5]
  CHECK(pd.less(0, 1));
  CHECK(pd.less(2, 3));
  CHECK_FALSE(pd.less(0, 2));
  CHECK_FALSE(pd.less(2, 0));
  CHECK(pd.less(1, 3));
  CHECK(pd.less(0, 3));
  CHECK_FALSE(pd.less(2, 1));
  CHECK(pd.chain("Y") == std::vector<std::size_t>{2, 3});
  CHECK(pd.genes() == std::vector<std::string>{"X", "Y"});
  CHECK(linear_extensions(pd, 100).orders.size() == 3);

  auto capped = build_pattern_diagram({"X", "Y"}, iv, {.max_events_per_gene = 1});
  CHECK(capped.size() == 2);

  auto back = parse_pattern(write_pattern(pd));
  REQUIRE(back.size() == pd.size());
  for (std::size_t a = 0; a < 4; ++a) {
    CHECK(back.event(a).gene == pd.event(a).gene);
    CHECK(back.event(a).kind == pd.event(a).kind);
    for (std::size_t b = 0; b < 4; ++b) CHECK(back.less(a, b) == pd.less(a, b));
  }
  CHECK(pattern_dot(pd).rfind("digraph", 0) == 0);
}

TEST_CASE("pattern validation") {
  using K = ExtremumKind;
  CHECK_THROWS(PatternDiagram({{"X", K::min}, {"Y", K::max}}, {{0, 1}, {1, 0}}));
  CHECK_THROWS(PatternDiagram({{"X", K::min}, {"X", K::max}}, {}));
  CHECK_THROWS(PatternDiagram({{"X", K::min}}, {{0, 3}}));
  CHECK_THROWS_AS(parse_pattern("{\"type\":\"event\",\"id\":\"a\",\"gene\":\"X\"}\n"), ParseError);
  CHECK_THROWS_AS(parse_pattern("{\"type\":\"order\",\"from\":\"a\",\"to\":\"b\"}\n"), ParseError);
  CHECK_THROWS_AS(parse_pattern("not json\n"), ParseError);
}

TEST_CASE("linear extensions") {
  using K = ExtremumKind;
  // an antichain of four events has 24 orders
  PatternDiagram free({{"A", K::min}, {"B", K::min}, {"C", K::min}, {"D", K::min}}, {});
  auto all = linear_extensions(free, 1000);
  CHECK(all.orders.size() == 24);
  CHECK_FALSE(all.capped);
  CHECK(std::is_sorted(all.orders.begin(), all.orders.end()));
  auto few = linear_extensions(free, 5);
  CHECK(few.orders.size() == 5);
  CHECK(few.capped);
}
