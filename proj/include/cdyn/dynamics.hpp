#pragma once

#include "cdyn/paramgraph.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cdyn {

class InconsistentParameterError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Domain graph of one parameter. Domains are numbered in mixed radix with node 0 least significant.
class StateTransitionGraph {
public:
  StateTransitionGraph(const RegulatoryNetwork& net, const std::vector<FactorParameter>& params);

  std::size_t dimension() const { return radix_.size(); }
  std::size_t size() const { return count_; }
  const std::vector<std::size_t>& radix() const { return radix_; }
  std::vector<std::size_t> coords(std::size_t d) const;
  std::size_t coord(std::size_t d, std::size_t i) const { return d / stride_[i] % radix_[i]; }
  std::size_t index(const std::vector<std::size_t>& c) const;

  // Target coordinate of node i from domain d.
  std::size_t target(std::size_t d, std::size_t i) const { return target_[d * radix_.size() + i]; }
  // 'I' when node i heads up, 'D' when it heads down, '*' when its target is its own coordinate.
  char label(std::size_t d, std::size_t i) const;
  std::string label_string(std::size_t d) const;

  const std::uint32_t* out_begin(std::size_t d) const { return adj_.data() + off_[d]; }
  const std::uint32_t* out_end(std::size_t d) const { return adj_.data() + off_[d + 1]; }
  std::vector<std::uint32_t> successors(std::size_t d) const { return {out_begin(d), out_end(d)}; }
  bool has_edge(std::size_t u, std::size_t v) const;
  std::size_t edge_count() const { return adj_.size(); }

private:
  std::vector<std::size_t> radix_;
  std::vector<std::size_t> stride_;
  std::size_t count_ = 1;
  std::vector<std::uint8_t> target_;
  std::vector<std::uint32_t> off_;
  std::vector<std::uint32_t> adj_;
};

StateTransitionGraph build_stg(const ParameterGraph& pg, std::uint64_t k);
StateTransitionGraph build_stg(const RegulatoryNetwork& net, const std::vector<FactorParameter>& params);

enum class MorseKind : std::uint8_t { fixed_point, full_cycle, partial_cycle };

struct MorseSet {
  std::vector<std::uint32_t> domains;  // sorted
  MorseKind kind;
  std::vector<std::size_t> varying;  // nodes whose coordinate is not constant on the set
  bool stable;                         // no outgoing Morse graph edge
};

struct MorseGraph {
  std::vector<MorseSet> sets;  // ordered by smallest domain
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // transitive reduction of reachability
};

MorseGraph morse_graph(const StateTransitionGraph& stg);
std::vector<std::vector<std::size_t>> stable_fixed_points(const MorseGraph& mg, const StateTransitionGraph& stg);

// "FP(1,0,0)", "FC" or "PC{X,Y}"
std::string annotation(const MorseSet& s, const StateTransitionGraph& stg, const RegulatoryNetwork& net);
std::string domain_name(const StateTransitionGraph& stg, std::size_t d);

std::string stg_dot(const StateTransitionGraph& stg, const RegulatoryNetwork& net);
std::string morse_dot(const MorseGraph& mg, const StateTransitionGraph& stg, const RegulatoryNetwork& net);

} // namespace cdyn
