#pragma once

#include "cdyn/dynamics.hpp"
#include "cdyn/timeseries.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cdyn {

class PatternError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Bit 2j marks a minimum of variable j on the edge, bit 2j+1 a maximum.
using EventMask = std::uint64_t;

inline EventMask event_bit(std::size_t var, ExtremumKind k) {
  return EventMask(1) << (2 * var + (k == ExtremumKind::max ? 1 : 0));
}

struct LabeledEdge {
  std::size_t to;  // local index
  EventMask events;
};

struct EventLabeledSubgraph {
  std::vector<std::string> variables;
  std::vector<std::uint32_t> domains;  // global domain ids, local index = position
  std::vector<std::string> labels;     // sign label string per domain
  std::vector<std::vector<LabeledEdge>> out;
};

// An edge u -> v carries a minimum of x when x heads up at v but did not at u,
// and a maximum when x heads down at v but did not at u.
EventMask edge_events(const StateTransitionGraph& stg, std::size_t u, std::size_t v);

EventLabeledSubgraph label_events(const StateTransitionGraph& stg, const RegulatoryNetwork& net,
                                  const std::vector<std::uint32_t>& domains);
EventLabeledSubgraph label_events(const StateTransitionGraph& stg, const RegulatoryNetwork& net, const MorseSet& set);

// A ring of domains whose edges carry the given events in order, for checking an observed
// cyclic event sequence against a pattern.
EventLabeledSubgraph event_ring(const std::vector<std::string>& variables,
                                const std::vector<std::pair<std::size_t, ExtremumKind>>& sequence);

struct MatchWitness {
  std::vector<std::uint32_t> walk;            // global domain ids; a cycle repeats its first domain at the end
  std::vector<std::vector<std::size_t>> consumed;  // pattern events consumed on each step
};

struct MatchResult {
  bool matched = false;
  MatchWitness witness;
};

// Closed walk whose events, read cyclically, consume every pattern event exactly once per
// period in an order compatible with the pattern. When a variable's pattern events start and
// end with the same kind, the opposite extremum needed to close its cycle is implied after its
// last event.
MatchResult match_cycle(const PatternDiagram& pd, const EventLabeledSubgraph& g);
// Walk (possibly of length zero) consuming every pattern event exactly once.
MatchResult match_path(const PatternDiagram& pd, const EventLabeledSubgraph& g);

} // namespace cdyn
