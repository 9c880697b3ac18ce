#include "cdyn/network.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace cdyn {

namespace {

bool name_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' && c != '+' &&
         c != '~' && c != ':' && c != '#';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct RawTerm {
  std::string name;
  Sign sign;
};

class ExprParser {
public:
  ExprParser(std::string_view s, std::size_t line) : s_(s), line_(line) {}

  std::vector<std::vector<RawTerm>> parse() {
    std::vector<std::vector<RawTerm>> groups;
    skip();
    if (at_end()) fail("empty input expression");
    if (peek() != '(') {
      // a bare sum without parentheses is accepted as a single group
      groups.push_back(sum(false));
      skip();
      if (!at_end()) fail("unexpected '" + std::string(1, peek()) + "'");
      return groups;
    }
    while (true) {
      skip();
      if (at_end()) break;
      if (peek() != '(') fail("expected '(' but found '" + std::string(1, peek()) + "'");
      ++pos_;
      groups.push_back(sum(true));
    }
    return groups;
  }

private:
  std::vector<RawTerm> sum(bool closed) {
    std::vector<RawTerm> terms;
    while (true) {
      terms.push_back(term());
      skip();
      if (at_end()) {
        if (closed) fail("missing ')'");
        return terms;
      }
      char c = peek();
      if (c == '+') {
        ++pos_;
        continue;
      }
      if (c == ')' && closed) {
        ++pos_;
        return terms;
      }
      fail("unexpected '" + std::string(1, c) + "'");
    }
  }

  RawTerm term() {
    skip();
    Sign sign = Sign::activating;
    if (!at_end() && peek() == '~') {
      sign = Sign::repressing;
      ++pos_;
      skip();
    }
    std::size_t start = pos_;
    while (!at_end() && name_char(peek())) ++pos_;
    if (start == pos_) fail(at_end() ? "expected a node name" : "expected a node name before '" + std::string(1, peek()) + "'");
    return {std::string(s_.substr(start, pos_ - start)), sign};
  }

  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

} // namespace

RegulatoryNetwork RegulatoryNetwork::build(
    std::vector<std::string> names, const std::vector<std::vector<std::vector<InputTerm>>>& groups) {
  if (groups.size() != names.size()) throw std::invalid_argument("one expression per node is required");
  RegulatoryNetwork net;
  std::size_t n = names.size();
  net.names_ = std::move(names);
  net.inputs_.resize(n);
  net.outputs_.resize(n);
  net.group_sizes_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (groups[i].empty()) throw std::invalid_argument("node " + net.names_[i] + " has no inputs");
    std::vector<bool> seen(n, false);
    for (const auto& g : groups[i]) {
      if (g.empty()) throw std::invalid_argument("empty sum group in node " + net.names_[i]);
      net.group_sizes_[i].push_back(g.size());
      for (const auto& t : g) {
        if (t.source >= n) throw std::invalid_argument("source index out of range");
        if (seen[t.source])
          throw std::invalid_argument("duplicate edge " + net.names_[t.source] + " -> " + net.names_[i]);
        seen[t.source] = true;
        net.inputs_[i].push_back(net.edges_.size());
        net.edges_.push_back({t.source, i, t.sign});
      }
    }
  }
  // threshold order of a source follows its targets' declaration order
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t e : net.inputs_[i]) net.outputs_[net.edges_[e].source].push_back(e);
  net.input_pos_.resize(net.edges_.size());
  net.output_pos_.resize(net.edges_.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < net.inputs_[i].size(); ++p) net.input_pos_[net.inputs_[i][p]] = p;
    for (std::size_t q = 0; q < net.outputs_[i].size(); ++q) net.output_pos_[net.outputs_[i][q]] = q;
  }
  return net;
}

std::optional<std::size_t> RegulatoryNetwork::find(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t RegulatoryNetwork::index(std::string_view name) const {
  auto i = find(name);
  if (!i) throw std::invalid_argument("unknown node '" + std::string(name) + "'");
  return *i;
}

Interaction RegulatoryNetwork::interaction(std::size_t i) const {
  const auto& g = group_sizes_.at(i);
  if (std::all_of(g.begin(), g.end(), [](std::size_t s) { return s == 1; })) return Interaction::product;
  if (g.size() == 1) return Interaction::sum;
  return Interaction::mixed;
}

RegulatoryNetwork parse_network(std::string_view text) {
  struct Decl {
    std::string name;
    std::string_view expr;
    std::size_t line;
  };
  std::vector<Decl> decls;
  std::unordered_map<std::string, std::size_t> index;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "expected 'Name : expression'");
    std::string_view name = trim(line.substr(0, colon));
    if (name.empty()) throw ParseError(line_no, "missing node name");
    if (!std::all_of(name.begin(), name.end(), name_char))
      throw ParseError(line_no, "invalid node name '" + std::string(name) + "'");
    if (index.count(std::string(name))) throw ParseError(line_no, "node '" + std::string(name) + "' declared twice");
    index.emplace(std::string(name), decls.size());
    decls.push_back({std::string(name), line.substr(colon + 1), line_no});
    if (end == text.size()) break;
  }
  if (decls.empty()) throw ParseError(line_no, "network has no nodes");

  std::vector<std::string> names;
  std::vector<std::vector<std::vector<InputTerm>>> groups(decls.size());
  for (const auto& d : decls) names.push_back(d.name);
  for (std::size_t i = 0; i < decls.size(); ++i) {
    const auto& d = decls[i];
    auto raw = ExprParser(d.expr, d.line).parse();
    std::vector<bool> seen(decls.size(), false);
    for (const auto& g : raw) {
      auto& out = groups[i].emplace_back();
      for (const auto& t : g) {
        auto it = index.find(t.name);
        if (it == index.end()) throw ParseError(d.line, "unknown node '" + t.name + "'");
        if (seen[it->second]) throw ParseError(d.line, "duplicate edge from '" + t.name + "'");
        seen[it->second] = true;
        out.push_back({it->second, t.sign});
      }
    }
  }
  return RegulatoryNetwork::build(std::move(names), groups);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RegulatoryNetwork load_network(const std::filesystem::path& path) {
  return parse_network(read_text_file(path));
}

std::string serialize(const RegulatoryNetwork& net) {
  std::string out;
  for (std::size_t i = 0; i < net.size(); ++i) {
    out += net.name(i) + " : ";
    const auto& in = net.inputs(i);
    std::size_t p = 0;
    for (std::size_t g : net.group_sizes(i)) {
      out += '(';
      for (std::size_t k = 0; k < g; ++k, ++p) {
        if (k) out += " + ";
        const Edge& e = net.edge(in[p]);
        if (e.sign == Sign::repressing) out += '~';
        out += net.name(e.source);
      }
      out += ')';
    }
    out += '\n';
  }
  return out;
}

std::size_t node_state_count(const RegulatoryNetwork& net, std::size_t i) { return net.out_degree(i) + 1; }

std::uint64_t fnv1a(std::string_view data, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

std::uint64_t fingerprint(const RegulatoryNetwork& net) { return fnv1a(serialize(net)); }

} // namespace cdyn
