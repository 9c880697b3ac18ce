#include "cdyn/dynamics.hpp"

#include <algorithm>
#include <sstream>

namespace cdyn {

StateTransitionGraph::StateTransitionGraph(const RegulatoryNetwork& net, const std::vector<FactorParameter>& params) {
  std::size_t n = net.size();
  if (params.size() != n) throw std::invalid_argument("one factor parameter per node is required");
  for (std::size_t i = 0; i < n; ++i) {
    stride_.push_back(count_);
    radix_.push_back(node_state_count(net, i));
    if (count_ > (std::size_t(1) << 31) / radix_.back()) throw ResourceLimitError("too many domains");
    count_ *= radix_.back();
  }

  // per input: source node, threshold rank at the source, repressing flag
  struct In {
    std::size_t src;
    std::size_t rank;
    bool rep;
  };
  std::vector<std::vector<In>> ins(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t e : net.inputs(i)) {
      const Edge& ed = net.edge(e);
      auto ranks = threshold_ranks(params[ed.source].order);
      ins[i].push_back({ed.source, ranks.at(net.output_position(e)), ed.sign == Sign::repressing});
    }

  target_.resize(count_ * n);
  std::vector<std::size_t> c(n, 0);
  for (std::size_t d = 0; d < count_; ++d) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t state = 0;
      for (std::size_t p = 0; p < ins[i].size(); ++p) {
        const In& in = ins[i][p];
        bool above = c[in.src] > in.rank;
        if (above != in.rep) state |= std::size_t(1) << p;
      }
      target_[d * n + i] = params[i].logic.at(state);
    }
    for (std::size_t i = 0; i < n && ++c[i] == radix_[i]; ++i) c[i] = 0;
  }

  off_.assign(count_ + 1, 0);
  for (std::size_t d = 0; d < count_; ++d) {
    std::size_t before = adj_.size();
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t x = coord(d, i);
      std::size_t t = target(d, i);
      if (t > x) {
        std::size_t up = d + stride_[i];
        if (target(up, i) < x + 1)
          throw InconsistentParameterError("flow crosses the wall between domains " + std::to_string(d) + " and " +
                                           std::to_string(up) + " in both directions");
        adj_.push_back(std::uint32_t(up));
      } else if (t < x) {
        adj_.push_back(std::uint32_t(d - stride_[i]));
      }
    }
    if (adj_.size() == before) adj_.push_back(std::uint32_t(d));
    std::sort(adj_.begin() + std::ptrdiff_t(before), adj_.end());
    off_[d + 1] = std::uint32_t(adj_.size());
  }
}

std::vector<std::size_t> StateTransitionGraph::coords(std::size_t d) const {
  std::vector<std::size_t> c(radix_.size());
  for (std::size_t i = 0; i < radix_.size(); ++i) c[i] = coord(d, i);
  return c;
}

std::size_t StateTransitionGraph::index(const std::vector<std::size_t>& c) const {
  if (c.size() != radix_.size()) throw std::invalid_argument("coordinate length mismatch");
  std::size_t d = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] >= radix_[i]) throw std::out_of_range("coordinate out of range");
    d += c[i] * stride_[i];
  }
  return d;
}

char StateTransitionGraph::label(std::size_t d, std::size_t i) const {
  std::size_t x = coord(d, i), t = target(d, i);
  return t > x ? 'I' : t < x ? 'D' : '*';
}

std::string StateTransitionGraph::label_string(std::size_t d) const {
  std::string s;
  for (std::size_t i = 0; i < radix_.size(); ++i) s += label(d, i);
  return s;
}

bool StateTransitionGraph::has_edge(std::size_t u, std::size_t v) const {
  return std::binary_search(out_begin(u), out_end(u), std::uint32_t(v));
}

StateTransitionGraph build_stg(const RegulatoryNetwork& net, const std::vector<FactorParameter>& params) {
  return StateTransitionGraph(net, params);
}

StateTransitionGraph build_stg(const ParameterGraph& pg, std::uint64_t k) {
  auto t = pg.index_to_tuple(k);
  std::vector<FactorParameter> params;
  for (std::size_t i = 0; i < t.size(); ++i) params.push_back(pg.factor(i).at(t[i]));
  return StateTransitionGraph(pg.network(), params);
}

namespace {

// iterative Tarjan; returns component id per node, components numbered in reverse topological order
std::vector<std::uint32_t> scc(const StateTransitionGraph& g, std::size_t& ncomp) {
  std::size_t n = g.size();
  constexpr std::uint32_t unset = ~0u;
  std::vector<std::uint32_t> index(n, unset), low(n, 0), comp(n, unset);
  std::vector<std::uint32_t> stack, call;
  std::vector<const std::uint32_t*> it(n);
  std::vector<bool> on(n, false);
  std::uint32_t counter = 0;
  ncomp = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    call.push_back(std::uint32_t(root));
    index[root] = low[root] = counter++;
    it[root] = g.out_begin(root);
    stack.push_back(std::uint32_t(root));
    on[root] = true;
    while (!call.empty()) {
      std::uint32_t v = call.back();
      if (it[v] != g.out_end(v)) {
        std::uint32_t w = *it[v]++;
        if (index[w] == unset) {
          index[w] = low[w] = counter++;
          it[w] = g.out_begin(w);
          stack.push_back(w);
          on[w] = true;
          call.push_back(w);
        } else if (on[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      call.pop_back();
      if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
      if (low[v] == index[v]) {
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on[w] = false;
          comp[w] = std::uint32_t(ncomp);
        } while (w != v);
        ++ncomp;
      }
    }
  }
  return comp;
}

} // namespace

MorseGraph morse_graph(const StateTransitionGraph& stg) {
  std::size_t nc = 0;
  auto comp = scc(stg, nc);
  std::vector<std::vector<std::uint32_t>> members(nc);
  for (std::size_t d = 0; d < stg.size(); ++d) members[comp[d]].push_back(std::uint32_t(d));

  // Morse sets: nontrivial components or singletons with a self edge
  std::vector<int> morse_id(nc, -1);
  std::vector<std::size_t> order;
  for (std::size_t c = 0; c < nc; ++c) {
    const auto& m = members[c];
    if (m.size() > 1 || stg.has_edge(m[0], m[0])) order.push_back(c);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return members[a][0] < members[b][0]; });
  MorseGraph mg;
  for (std::size_t k = 0; k < order.size(); ++k) {
    morse_id[order[k]] = int(k);
    MorseSet s;
    s.domains = members[order[k]];
    for (std::size_t i = 0; i < stg.dimension(); ++i) {
      std::size_t c0 = stg.coord(s.domains[0], i);
      for (auto d : s.domains)
        if (stg.coord(d, i) != c0) {
          s.varying.push_back(i);
          break;
        }
    }
    if (s.domains.size() == 1) s.kind = MorseKind::fixed_point;
    else if (s.varying.size() == stg.dimension()) s.kind = MorseKind::full_cycle;
    else s.kind = MorseKind::partial_cycle;
    s.stable = true;
    mg.sets.push_back(std::move(s));
  }

  // condensation edges; Tarjan numbers components so that edges go from higher to lower ids
  std::vector<std::vector<std::uint32_t>> cadj(nc);
  for (std::size_t d = 0; d < stg.size(); ++d)
    for (auto p = stg.out_begin(d); p != stg.out_end(d); ++p)
      if (comp[*p] != comp[d]) cadj[comp[d]].push_back(comp[*p]);

  std::size_t k = mg.sets.size();
  std::vector<std::vector<bool>> reach(k, std::vector<bool>(k, false));
  // reachable Morse sets per component, computed in increasing id order (sinks first)
  std::vector<std::vector<bool>> below(nc, std::vector<bool>(k, false));
  for (std::size_t c = 0; c < nc; ++c) {
    for (auto w : cadj[c]) {
      for (std::size_t j = 0; j < k; ++j)
        if (below[w][j]) below[c][j] = true;
      if (morse_id[w] >= 0) below[c][std::size_t(morse_id[w])] = true;
    }
    if (morse_id[c] >= 0) reach[std::size_t(morse_id[c])] = below[c];
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) {
      if (!reach[a][b]) continue;
      bool direct = true;
      for (std::size_t c = 0; c < k && direct; ++c)
        if (c != a && c != b && reach[a][c] && reach[c][b]) direct = false;
      if (direct) {
        mg.edges.emplace_back(a, b);
        mg.sets[a].stable = false;
      }
    }
  return mg;
}

std::vector<std::vector<std::size_t>> stable_fixed_points(const MorseGraph& mg, const StateTransitionGraph& stg) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto& s : mg.sets)
    if (s.stable && s.kind == MorseKind::fixed_point) out.push_back(stg.coords(s.domains[0]));
  return out;
}

std::string domain_name(const StateTransitionGraph& stg, std::size_t d) {
  std::string s;
  bool wide = false;
  for (auto r : stg.radix()) wide |= r > 10;
  for (std::size_t i = 0; i < stg.dimension(); ++i) {
    if (wide && i) s += ',';
    s += std::to_string(stg.coord(d, i));
  }
  return s;
}

std::string annotation(const MorseSet& s, const StateTransitionGraph& stg, const RegulatoryNetwork& net) {
  switch (s.kind) {
  case MorseKind::fixed_point: {
    std::string r = "FP(";
    auto c = stg.coords(s.domains[0]);
    for (std::size_t i = 0; i < c.size(); ++i) r += (i ? "," : "") + std::to_string(c[i]);
    return r + ")";
  }
  case MorseKind::full_cycle: return "FC";
  case MorseKind::partial_cycle: {
    std::string r = "PC{";
    for (std::size_t k = 0; k < s.varying.size(); ++k) r += (k ? "," : "") + net.name(s.varying[k]);
    return r + "}";
  }
  }
  return "?";
}

std::string stg_dot(const StateTransitionGraph& stg, const RegulatoryNetwork& net) {
  std::ostringstream o;
  o << "digraph stg {\n  // coordinates in node order:";
  for (std::size_t i = 0; i < net.size(); ++i) o << ' ' << net.name(i);
  o << '\n';
  for (std::size_t d = 0; d < stg.size(); ++d)
    o << "  d" << d << " [label=\"" << domain_name(stg, d) << "\\n" << stg.label_string(d) << "\"];\n";
  for (std::size_t d = 0; d < stg.size(); ++d)
    for (auto p = stg.out_begin(d); p != stg.out_end(d); ++p) o << "  d" << d << " -> d" << *p << ";\n";
  o << "}\n";
  return o.str();
}

std::string morse_dot(const MorseGraph& mg, const StateTransitionGraph& stg, const RegulatoryNetwork& net) {
  std::ostringstream o;
  o << "digraph morse {\n";
  for (std::size_t k = 0; k < mg.sets.size(); ++k) {
    const auto& s = mg.sets[k];
    o << "  m" << k << " [label=\"" << annotation(s, stg, net) << "\\n" << (s.stable ? "stable" : "unstable") << ", "
      << s.domains.size() << (s.domains.size() == 1 ? " domain\"" : " domains\"");
    if (s.stable) o << ", style=filled, fillcolor=\"#f4cccc\"";
    o << "];\n";
  }
  for (auto [a, b] : mg.edges) o << "  m" << a << " -> m" << b << ";\n";
  o << "}\n";
  return o.str();
}

} // namespace cdyn
