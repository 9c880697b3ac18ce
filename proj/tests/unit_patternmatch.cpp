#include "cdyn/patternmatch.hpp"

#include "doctest.h"
#include "oracle.hpp"

#include <random>

using namespace cdyn;

namespace {

using Kind = ExtremumKind;

// Random graph on up to five domains over X, Y and Z; the patterns only mention X and Y, so Z
// events must be ignored.
EventLabeledSubgraph random_graph(std::mt19937_64& rng) {
  EventLabeledSubgraph g;
  g.variables = {"X", "Y", "Z"};
  std::size_t n = 2 + rng() % 4;
  g.out.resize(n);
  for (std::size_t u = 0; u < n; ++u) {
    g.domains.push_back(std::uint32_t(u));
    g.labels.emplace_back();
    std::vector<std::size_t> targets(n);
    std::iota(targets.begin(), targets.end(), 0);
    std::shuffle(targets.begin(), targets.end(), rng);
    std::size_t deg = 1 + rng() % 2;
    for (std::size_t k = 0; k < deg && k < n; ++k) {
      EventMask m = 0;
      for (std::size_t v = 0; v < 3; ++v)
        if (rng() % 5 < 3) m |= event_bit(v, rng() % 2 ? Kind::max : Kind::min);
      g.out[u].push_back({targets[k], m});
    }
  }
  return g;
}

PatternDiagram random_pattern(std::mt19937_64& rng) {
  for (;;) {
    std::vector<PatternEvent> ev;
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (const char* gene : {"X", "Y"}) {
      std::size_t len = 1 + rng() % (rng() % 2 ? 2 : 3);
      Kind k = rng() % 2 ? Kind::max : Kind::min;
      for (std::size_t j = 0; j < len; ++j) {
        if (j) rel.emplace_back(ev.size() - 1, ev.size());
        ev.push_back({gene, k, 0});
        k = k == Kind::min ? Kind::max : Kind::min;
      }
    }
    std::size_t extra = rng() % 3;
    for (std::size_t j = 0; j < extra; ++j) {
      std::size_t a = rng() % ev.size(), b = rng() % ev.size();
      if (ev[a].gene != ev[b].gene) rel.emplace_back(a, b);
    }
    try {
      return PatternDiagram(ev, rel);
    } catch (const std::invalid_argument&) {
    }
  }
}

PatternDiagram make(std::vector<PatternEvent> ev, std::vector<std::pair<std::size_t, std::size_t>> rel) {
  return PatternDiagram(std::move(ev), rel);
}

} // namespace

TEST_CASE("cycle matcher agrees with brute force") {
  std::mt19937_64 rng(2024);
  std::size_t matched = 0, unmatched = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    auto g = random_graph(rng);
    auto pd = random_pattern(rng);
    auto ref = oracle::ref_pattern(pd, g.variables, true);
    oracle::Walker w{g, 6};
    w.run();
    bool brute = false;
    for (const auto& p : w.paths)
      if ((brute = oracle::cyclic_match(ref, p))) break;
    auto r = match_cycle(pd, g);
    CAPTURE(trial);
    if (brute) CHECK(r.matched);
    if (r.matched) {
      ++matched;
      REQUIRE(r.witness.walk.size() >= 2);
      CHECK(r.witness.walk.front() == r.witness.walk.back());
      CHECK(r.witness.consumed.size() == r.witness.walk.size() - 1);
      auto masks = oracle::walk_masks(g, r.witness.walk);
      REQUIRE(masks);
      CHECK(oracle::cyclic_match(ref, *masks));
      std::set<std::size_t> used;
      for (const auto& c : r.witness.consumed) used.insert(c.begin(), c.end());
      CHECK(used.size() == pd.size());
    } else {
      ++unmatched;
    }
  }
  CHECK(matched > 30);
  CHECK(unmatched > 30);
}

TEST_CASE("path matcher agrees with brute force") {
  std::mt19937_64 rng(99);
  std::size_t matched = 0, unmatched = 0;
  for (int trial = 0; trial < 1500; ++trial) {
    auto g = random_graph(rng);
    auto pd = random_pattern(rng);
    auto ref = oracle::ref_pattern(pd, g.variables, false);
    oracle::Walker w{g, 6, false};
    w.run();
    bool brute = false;
    for (const auto& p : w.paths)
      if ((brute = oracle::path_match(ref, p))) break;
    auto r = match_path(pd, g);
    CAPTURE(trial);
    if (brute) CHECK(r.matched);
    if (r.matched) {
      ++matched;
      auto masks = oracle::walk_masks(g, r.witness.walk);
      REQUIRE(masks);
      CHECK(oracle::path_match(ref, *masks));
    } else {
      ++unmatched;
    }
  }
  CHECK(matched > 30);
  CHECK(unmatched > 30);
}

TEST_CASE("event rings") {
  // X: min max, Y: max min, with X min before Y max and X max before Y min
  auto pd = make({{"X", Kind::min}, {"X", Kind::max}, {"Y", Kind::max}, {"Y", Kind::min}},
                 {{0, 1}, {2, 3}, {0, 2}, {1, 3}});
  std::vector<std::string> vars{"X", "Y"};
  CHECK(match_cycle(pd, event_ring(vars, {{0, Kind::min}, {1, Kind::max}, {0, Kind::max}, {1, Kind::min}})).matched);
  CHECK(match_cycle(pd, event_ring(vars, {{0, Kind::min}, {0, Kind::max}, {1, Kind::max}, {1, Kind::min}})).matched);
  // Y max ahead of X min violates the order in every rotation
  CHECK_FALSE(
      match_cycle(pd, event_ring(vars, {{0, Kind::min}, {1, Kind::min}, {0, Kind::max}, {1, Kind::max}})).matched);
  // a ring read twice per period
  auto one = make({{"X", Kind::max}}, {});
  CHECK(match_cycle(one, event_ring(vars, {{0, Kind::max}, {0, Kind::min}})).matched);
  CHECK_FALSE(match_cycle(one, event_ring(vars, {{1, Kind::max}, {1, Kind::min}})).matched);
  // a path matcher consumes each event once and may stop early
  CHECK(match_path(pd, event_ring(vars, {{0, Kind::min}, {1, Kind::max}, {0, Kind::max}, {1, Kind::min}})).matched);
}

TEST_CASE("matcher errors") {
  std::vector<std::string> vars{"X"};
  auto g = event_ring(vars, {{0, Kind::min}});
  CHECK_THROWS_AS(match_cycle(make({{"Q", Kind::min}}, {}), g), PatternError);
  CHECK_THROWS_AS(match_cycle(make({{"X", Kind::min}, {"X", Kind::min}}, {{0, 1}}), g), PatternError);
}

TEST_CASE("edge events on a domain graph") {
  auto net = parse_network("X1 : (~X2)\nX2 : (~X1)");
  ParameterGraph pg(net);
  for (std::uint64_t k = 0; k < pg.size(); ++k) {
    auto stg = build_stg(pg, k);
    for (std::size_t u = 0; u < stg.size(); ++u)
      for (auto v : stg.successors(u)) {
        EventMask m = edge_events(stg, u, v);
        for (std::size_t j = 0; j < 2; ++j) {
          char a = stg.label(u, j), b = stg.label(v, j);
          CHECK(bool(m & event_bit(j, Kind::min)) == (a != 'I' && b == 'I'));
          CHECK(bool(m & event_bit(j, Kind::max)) == (a != 'D' && b == 'D'));
        }
      }
    auto g = label_events(stg, net, morse_graph(stg).sets[0]);
    CHECK(g.labels.size() == g.domains.size());
  }
}
