#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cdyn {

class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

enum class Sign : std::uint8_t { activating, repressing };

struct Edge {
  std::size_t source;
  std::size_t target;
  Sign sign;
};

// How a node combines its inputs: product of singletons, one sum, or a product of sums.
enum class Interaction : std::uint8_t { product, sum, mixed };

struct InputTerm {
  std::size_t source;
  Sign sign;
};

class RegulatoryNetwork {
public:
  // groups[i] is the product-of-sums expression of node i
  static RegulatoryNetwork build(std::vector<std::string> names,
                                 const std::vector<std::vector<std::vector<InputTerm>>>& groups);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index(std::string_view name) const;

  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(std::size_t e) const { return edges_.at(e); }

  // In-edges of i, flattened group by group. Bit p of an activation state refers to inputs(i)[p].
  const std::vector<std::size_t>& inputs(std::size_t i) const { return inputs_.at(i); }
  // Out-edges of i in threshold order: sorted by target declaration order.
  const std::vector<std::size_t>& outputs(std::size_t i) const { return outputs_.at(i); }
  // Sizes of the sum groups of i, in expression order.
  const std::vector<std::size_t>& group_sizes(std::size_t i) const { return group_sizes_.at(i); }

  std::size_t in_degree(std::size_t i) const { return inputs_.at(i).size(); }
  std::size_t out_degree(std::size_t i) const { return outputs_.at(i).size(); }
  std::size_t input_position(std::size_t e) const { return input_pos_.at(e); }
  std::size_t output_position(std::size_t e) const { return output_pos_.at(e); }
  Interaction interaction(std::size_t i) const;

private:
  std::vector<std::string> names_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> inputs_;
  std::vector<std::vector<std::size_t>> outputs_;
  std::vector<std::vector<std::size_t>> group_sizes_;
  std::vector<std::size_t> input_pos_;
  std::vector<std::size_t> output_pos_;
};

// Grammar, one node per line:  Name : (A)(~B)(C + ~D)
// '#' starts a comment. Nodes are indexed in declaration order.
RegulatoryNetwork parse_network(std::string_view text);
RegulatoryNetwork load_network(const std::filesystem::path& path);
std::string serialize(const RegulatoryNetwork& net);

// Number of coordinate values of node i in the domain decomposition.
std::size_t node_state_count(const RegulatoryNetwork& net, std::size_t i);

std::uint64_t fingerprint(const RegulatoryNetwork& net);

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t v);
std::string read_text_file(const std::filesystem::path& path);

} // namespace cdyn
