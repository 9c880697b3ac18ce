#pragma once

#include "cdyn/network.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace cdyn {

class ResourceLimitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

using BandMap = std::vector<std::uint8_t>;

// order[r] is the output position of the r-th smallest threshold of the node.
// logic[s] is the number of thresholds below the input combination in activation state s
// (bit p of s set when input p contributes its high value).
struct FactorParameter {
  std::vector<std::uint8_t> order;
  BandMap logic;
  bool operator==(const FactorParameter&) const = default;
};

std::vector<std::uint8_t> threshold_ranks(const std::vector<std::uint8_t>& order);

struct EnumerationOptions {
  std::size_t max_in_degree = 4;
  std::size_t max_out_degree = 4;
  std::size_t samples = 1000000;  // only used for product-of-sums nodes
  std::uint64_t seed = 20240917;
};

// Realizable band maps for one interaction structure, in lexicographic order.
struct LogicSet {
  std::vector<BandMap> maps;
  bool certified = true;
  std::unordered_map<std::string, std::size_t> lookup;
  // product-of-sums only: one sampled (l, h, thresholds) witness per map
  std::vector<std::vector<double>> sampled;
};

const LogicSet& realizable_logic(const std::vector<std::size_t>& group_sizes, std::size_t m,
                                 const EnumerationOptions& opt = {});

// Monotone maps on the input cube, before any realizability filter.
std::vector<BandMap> monotone_band_maps(std::size_t n_in, std::size_t m);

// Feasible positive weight vector w with w >= 1 and w.(s' - s) >= 1 for every pair
// of incomparable states with band(s) < band(s'). Valid for product and for single-sum
// interactions, which share this condition.
std::optional<std::vector<double>> separating_weights(std::size_t n_in, const BandMap& band,
                                                      const std::vector<double>& objective = {},
                                                      double upper = 1e4);

class FactorGraph {
public:
  FactorGraph(const RegulatoryNetwork& net, std::size_t node, const EnumerationOptions& opt);

  std::size_t node() const { return node_; }
  std::size_t size() const { return orders_.size() * logic_->maps.size(); }
  std::size_t order_count() const { return orders_.size(); }
  std::size_t logic_count() const { return logic_->maps.size(); }
  bool certified() const { return logic_->certified; }

  FactorParameter at(std::size_t idx) const;
  const std::vector<std::uint8_t>& order(std::size_t idx) const { return orders_[idx / logic_count()]; }
  const std::vector<std::uint8_t>& ranks(std::size_t idx) const { return ranks_[idx / logic_count()]; }
  const BandMap& logic(std::size_t idx) const { return logic_->maps[idx % logic_count()]; }
  const LogicSet& logic_set() const { return *logic_; }

  std::optional<std::size_t> find(const FactorParameter& fp) const;
  std::vector<std::size_t> neighbors(std::size_t idx) const;

private:
  std::size_t node_;
  std::size_t n_in_;
  std::size_t m_;
  std::vector<std::vector<std::uint8_t>> orders_;
  std::vector<std::vector<std::uint8_t>> ranks_;
  const LogicSet* logic_;
};

FactorGraph enumerate_factor_parameters(const RegulatoryNetwork& net, std::size_t node,
                                        const EnumerationOptions& opt = {});

// Decides whether the factor parameter describes a nonempty region of (l, h, theta).
// Product-of-sums nodes are decided by sampling and are not certified.
bool check_realizable(const RegulatoryNetwork& net, std::size_t node, const FactorParameter& fp,
                      const EnumerationOptions& opt = {});

struct RemainderParameter {
  std::vector<std::size_t> tuple;  // factor indices of all nodes except the excluded one
  std::uint64_t index;
};

class ParameterGraph {
public:
  explicit ParameterGraph(RegulatoryNetwork net, const EnumerationOptions& opt = {});

  const RegulatoryNetwork& network() const { return net_; }
  std::uint64_t size() const { return size_; }
  bool certified() const;
  const FactorGraph& factor(std::size_t i) const { return factors_.at(i); }

  std::vector<std::size_t> index_to_tuple(std::uint64_t k) const;
  std::uint64_t tuple_to_index(const std::vector<std::size_t>& tuple) const;
  std::vector<std::uint64_t> neighbors(std::uint64_t k) const;

  std::uint64_t remainder_size(std::size_t excluded) const;
  RemainderParameter remainder_of(std::uint64_t k, std::size_t excluded) const;

private:
  RegulatoryNetwork net_;
  std::vector<FactorGraph> factors_;
  std::uint64_t size_ = 1;
};

// Product of factor graph sizes; throws std::overflow_error beyond 64 bits.
std::uint64_t pg_size(const RegulatoryNetwork& net, const EnumerationOptions& opt = {});

enum class RestrictionLabel : std::uint8_t { on, off, int_high, int_low, wt };
std::string to_string(RestrictionLabel l);
RestrictionLabel parse_restriction_label(std::string_view s);
// Coordinate a node with m thresholds sits at under a constant label; for m = 3 that is ON 3,
// INT_H 2, INT_L 1, OFF 0.
std::size_t restriction_level(RestrictionLabel l, std::size_t m = 3);

// Label of every factor parameter of a node with one input and one to three outputs.
std::vector<RestrictionLabel> clb2_restriction_sets(const ParameterGraph& pg, std::size_t node);

// Human readable inequalities of a factor parameter, e.g. "l[X,Y] < t[Y,Z] < h[X,Y]".
std::string describe(const RegulatoryNetwork& net, std::size_t node, const FactorParameter& fp);

} // namespace cdyn
