#include "cdyn/patternmatch.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace cdyn {

EventMask edge_events(const StateTransitionGraph& stg, std::size_t u, std::size_t v) {
  EventMask m = 0;
  for (std::size_t j = 0; j < stg.dimension(); ++j) {
    char a = stg.label(u, j), b = stg.label(v, j);
    if (b == 'I' && a != 'I') m |= event_bit(j, ExtremumKind::min);
    else if (b == 'D' && a != 'D') m |= event_bit(j, ExtremumKind::max);
  }
  return m;
}

EventLabeledSubgraph label_events(const StateTransitionGraph& stg, const RegulatoryNetwork& net,
                                  const std::vector<std::uint32_t>& domains) {
  if (net.size() > 32) throw PatternError("event labels support at most 32 variables");
  EventLabeledSubgraph g;
  g.variables = net.names();
  g.domains = domains;
  std::sort(g.domains.begin(), g.domains.end());
  std::unordered_map<std::uint32_t, std::size_t> local;
  for (std::size_t k = 0; k < g.domains.size(); ++k) local[g.domains[k]] = k;
  g.out.resize(g.domains.size());
  for (std::size_t k = 0; k < g.domains.size(); ++k) {
    std::uint32_t d = g.domains[k];
    g.labels.push_back(stg.label_string(d));
    for (auto p = stg.out_begin(d); p != stg.out_end(d); ++p) {
      auto it = local.find(*p);
      if (it != local.end()) g.out[k].push_back({it->second, edge_events(stg, d, *p)});
    }
  }
  return g;
}

EventLabeledSubgraph label_events(const StateTransitionGraph& stg, const RegulatoryNetwork& net, const MorseSet& set) {
  return label_events(stg, net, set.domains);
}

EventLabeledSubgraph event_ring(const std::vector<std::string>& variables,
                                const std::vector<std::pair<std::size_t, ExtremumKind>>& sequence) {
  EventLabeledSubgraph g;
  g.variables = variables;
  std::size_t n = std::max<std::size_t>(sequence.size(), 1);
  g.out.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    g.domains.push_back(std::uint32_t(k));
    g.labels.emplace_back();
    EventMask m = sequence.empty() ? 0 : event_bit(sequence[k].first, sequence[k].second);
    g.out[k].push_back({(k + 1) % n, m});
  }
  return g;
}

namespace {

struct Compiled {
  std::size_t n = 0;  // events including implied ones
  std::size_t real = 0;
  std::uint64_t full = 0;
  std::vector<std::uint64_t> pred;
  std::vector<ExtremumKind> kind;
  std::vector<std::size_t> var_of_event;
  std::vector<std::vector<std::size_t>> chain;  // per subgraph variable, empty if not in pattern
};

Compiled compile(const PatternDiagram& pd, const EventLabeledSubgraph& g, bool cyclic) {
  Compiled c;
  c.real = pd.size();
  c.chain.resize(g.variables.size());
  for (std::size_t i = 0; i < pd.size(); ++i) {
    const auto& e = pd.event(i);
    auto it = std::find(g.variables.begin(), g.variables.end(), e.gene);
    if (it == g.variables.end()) throw PatternError("pattern refers to '" + e.gene + "', which is not a network node");
    c.kind.push_back(e.kind);
    c.var_of_event.push_back(std::size_t(it - g.variables.begin()));
  }
  c.n = pd.size();
  c.pred.assign(c.n, 0);
  for (std::size_t a = 0; a < pd.size(); ++a)
    for (std::size_t b = 0; b < pd.size(); ++b)
      if (pd.less(a, b)) c.pred[b] |= std::uint64_t(1) << a;
  for (const auto& gene : pd.genes()) {
    std::size_t v = c.var_of_event[pd.chain(gene).front()];
    c.chain[v] = pd.chain(gene);
    for (std::size_t k = 1; k < c.chain[v].size(); ++k)
      if (c.kind[c.chain[v][k]] == c.kind[c.chain[v][k - 1]])
        throw PatternError("events of " + gene + " do not alternate between min and max");
    if (cyclic && c.kind[c.chain[v].front()] == c.kind[c.chain[v].back()]) {
      std::size_t id = c.n++;
      ExtremumKind k = c.kind[c.chain[v].back()] == ExtremumKind::min ? ExtremumKind::max : ExtremumKind::min;
      c.kind.push_back(k);
      c.var_of_event.push_back(v);
      std::uint64_t p = 0;
      for (std::size_t x : c.chain[v]) p |= (std::uint64_t(1) << x) | c.pred[x];
      c.pred.push_back(p);
      c.chain[v].push_back(id);
    }
  }
  if (c.n > 64) throw PatternError("patterns are limited to 64 events");
  c.full = c.n == 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << c.n) - 1;
  return c;
}

struct Step {
  bool valid = false;
  bool wrap = false;
  std::uint64_t next = 0;
  std::uint64_t consumed = 0;  // events of this period (B) plus, on a wrap, the next (A)
};

Step advance(const Compiled& c, std::uint64_t D, EventMask ev, bool cyclic) {
  Step s;
  std::uint64_t B = 0, A = 0;
  for (std::size_t v = 0; v < c.chain.size(); ++v) {
    const auto& ch = c.chain[v];
    if (ch.empty()) continue;
    ExtremumKind k;
    if (ev & event_bit(v, ExtremumKind::min)) k = ExtremumKind::min;
    else if (ev & event_bit(v, ExtremumKind::max)) k = ExtremumKind::max;
    else continue;
    auto it = std::find_if(ch.begin(), ch.end(), [&](std::size_t x) { return !(D >> x & 1); });
    if (it != ch.end()) {
      if (c.kind[*it] != k) return s;
      B |= std::uint64_t(1) << *it;
    } else {
      if (!cyclic || c.kind[ch.front()] != k) return s;
      A |= std::uint64_t(1) << ch.front();
    }
  }
  std::uint64_t D2 = D | B;
  for (std::size_t x = 0; x < c.n; ++x)
    if ((B >> x & 1) && (c.pred[x] & ~D2)) return s;
  if (A) {
    if (D2 != c.full) return s;
    for (std::size_t x = 0; x < c.n; ++x)
      if ((A >> x & 1) && (c.pred[x] & ~A)) return s;
    s = {true, true, A, B | A};
    return s;
  }
  if (cyclic && D2 == c.full) return {true, true, 0, B};
  return {true, false, D2, B};
}

struct StateKey {
  std::size_t u;
  std::uint64_t D;
  bool operator==(const StateKey&) const = default;
};
struct StateHash {
  std::size_t operator()(const StateKey& k) const { return std::hash<std::uint64_t>()(k.D * 0x9e3779b97f4a7c15ULL ^ k.u); }
};

std::vector<std::size_t> bits(std::uint64_t m, std::size_t limit) {
  std::vector<std::size_t> r;
  for (std::size_t x = 0; x < limit; ++x)
    if (m >> x & 1) r.push_back(x);
  return r;
}

} // namespace

MatchResult match_path(const PatternDiagram& pd, const EventLabeledSubgraph& g) {
  Compiled c = compile(pd, g, false);
  MatchResult r;
  std::unordered_map<StateKey, std::size_t, StateHash> id;
  std::vector<StateKey> states;
  std::vector<std::pair<std::size_t, std::uint64_t>> parent;  // (state, consumed)
  std::deque<std::size_t> queue;
  for (std::size_t u = 0; u < g.domains.size(); ++u) {
    id[{u, 0}] = states.size();
    states.push_back({u, 0});
    parent.emplace_back(SIZE_MAX, 0);
    queue.push_back(states.size() - 1);
  }
  while (!queue.empty()) {
    std::size_t s = queue.front();
    queue.pop_front();
    if (states[s].D == c.full) {
      std::vector<std::size_t> trail;
      for (std::size_t x = s; x != SIZE_MAX; x = parent[x].first) trail.push_back(x);
      std::reverse(trail.begin(), trail.end());
      r.matched = true;
      for (std::size_t k = 0; k < trail.size(); ++k) {
        r.witness.walk.push_back(g.domains[states[trail[k]].u]);
        if (k) r.witness.consumed.push_back(bits(parent[trail[k]].second, c.real));
      }
      return r;
    }
    StateKey cur = states[s];
    for (const auto& e : g.out[cur.u]) {
      Step st = advance(c, cur.D, e.events, false);
      if (!st.valid) continue;
      StateKey nk{e.to, st.next};
      if (id.count(nk)) continue;
      id[nk] = states.size();
      states.push_back(nk);
      parent.emplace_back(s, st.consumed);
      queue.push_back(states.size() - 1);
    }
  }
  return r;
}

MatchResult match_cycle(const PatternDiagram& pd, const EventLabeledSubgraph& g) {
  Compiled c = compile(pd, g, true);
  MatchResult r;
  std::unordered_map<StateKey, std::size_t, StateHash> id;
  std::vector<StateKey> states;
  struct Arc {
    std::size_t to;
    bool wrap;
    std::uint64_t consumed;
  };
  std::vector<std::vector<Arc>> arcs;
  auto intern = [&](const StateKey& k) {
    auto it = id.find(k);
    if (it != id.end()) return std::pair{it->second, false};
    id[k] = states.size();
    states.push_back(k);
    arcs.emplace_back();
    return std::pair{states.size() - 1, true};
  };
  std::vector<std::size_t> stack;
  for (std::size_t u = 0; u < g.domains.size(); ++u) stack.push_back(intern({u, 0}).first);
  // A period may open partway through an edge, so a cycle need not pass through any state with
  // nothing consumed. Seed every state an edge can open a period with: a set of chain-initial
  // events carried by the edge that is closed under the pattern order.
  for (std::size_t u = 0; u < g.domains.size(); ++u)
    for (const auto& e : g.out[u]) {
      std::vector<std::size_t> opening;
      for (std::size_t v = 0; v < c.chain.size(); ++v) {
        if (c.chain[v].empty()) continue;
        std::size_t front = c.chain[v].front();
        if (e.events & event_bit(v, c.kind[front])) opening.push_back(front);
      }
      for (std::uint64_t sub = 1; sub < (std::uint64_t(1) << opening.size()); ++sub) {
        std::uint64_t A = 0;
        for (std::size_t k = 0; k < opening.size(); ++k)
          if (sub >> k & 1) A |= std::uint64_t(1) << opening[k];
        bool closed = true;
        for (std::size_t x : opening)
          if ((A >> x & 1) && (c.pred[x] & ~A)) closed = false;
        if (!closed) continue;
        auto [t, fresh] = intern({e.to, A});
        if (fresh) stack.push_back(t);
      }
    }
  while (!stack.empty()) {
    std::size_t s = stack.back();
    stack.pop_back();
    StateKey cur = states[s];
    for (const auto& e : g.out[cur.u]) {
      Step st = advance(c, cur.D, e.events, true);
      if (!st.valid) continue;
      auto [t, fresh] = intern({e.to, st.next});
      arcs[s].push_back({t, st.wrap, st.consumed});
      if (fresh) stack.push_back(t);
    }
  }

  // strongly connected components of the search graph (iterative Tarjan)
  std::size_t n = states.size();
  const std::size_t unset = SIZE_MAX;
  std::vector<std::size_t> index(n, unset), low(n), comp(n, unset), it(n, 0), call, stk;
  std::vector<bool> on(n, false);
  std::size_t counter = 0, ncomp = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    call.push_back(root);
    index[root] = low[root] = counter++;
    stk.push_back(root);
    on[root] = true;
    while (!call.empty()) {
      std::size_t v = call.back();
      if (it[v] < arcs[v].size()) {
        std::size_t w = arcs[v][it[v]++].to;
        if (index[w] == unset) {
          index[w] = low[w] = counter++;
          stk.push_back(w);
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
        std::size_t w;
        do {
          w = stk.back();
          stk.pop_back();
          on[w] = false;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
    }
  }

  for (std::size_t s = 0; s < n; ++s)
    for (const auto& a : arcs[s]) {
      if (!a.wrap || comp[a.to] != comp[s]) continue;
      // closed walk: a.to -> ... -> s -> a.to
      std::vector<std::size_t> prev(n, unset);
      std::vector<std::uint64_t> used(n, 0);
      std::deque<std::size_t> q{a.to};
      prev[a.to] = a.to;
      while (!q.empty() && prev[s] == unset) {
        std::size_t x = q.front();
        q.pop_front();
        for (const auto& b : arcs[x])
          if (comp[b.to] == comp[s] && prev[b.to] == unset) {
            prev[b.to] = x;
            used[b.to] = b.consumed;
            q.push_back(b.to);
          }
      }
      std::vector<std::size_t> trail;
      for (std::size_t x = s; x != a.to; x = prev[x]) trail.push_back(x);
      trail.push_back(a.to);
      std::reverse(trail.begin(), trail.end());
      r.matched = true;
      for (std::size_t k = 0; k < trail.size(); ++k) {
        r.witness.walk.push_back(g.domains[states[trail[k]].u]);
        if (k) r.witness.consumed.push_back(bits(used[trail[k]], c.real));
      }
      r.witness.walk.push_back(g.domains[states[a.to].u]);
      r.witness.consumed.push_back(bits(a.consumed, c.real));
      return r;
    }
  return r;
}

} // namespace cdyn
