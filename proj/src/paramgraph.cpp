#include "cdyn/paramgraph.hpp"
#include "cdyn/seidel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>

namespace cdyn {

namespace {

std::string key_of(const BandMap& b) { return std::string(b.begin(), b.end()); }

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("parameter graph size exceeds 64 bits");
  return r;
}

bool incomparable(std::size_t s, std::size_t t) { return (s & ~t) && (t & ~s); }

// Rows for the weight system of a (possibly partial) band map; states beyond band.size() are free.
std::vector<HalfSpace> weight_rows(std::size_t n, const BandMap& band) {
  std::size_t pow3 = 1;
  for (std::size_t e = 0; e < n; ++e) pow3 *= 3;
  std::vector<bool> seen(pow3, false);
  std::vector<HalfSpace> rows;
  for (std::size_t s = 0; s < band.size(); ++s)
    for (std::size_t t = s + 1; t < band.size(); ++t) {
      if (band[s] == band[t] || !incomparable(s, t)) continue;
      std::size_t lo = band[s] < band[t] ? s : t;
      std::size_t hi = lo == s ? t : s;
      std::size_t code = 0;
      HalfSpace h{std::vector<double>(n), -1.0};
      for (std::size_t e = n; e-- > 0;) {
        int d = int((hi >> e) & 1) - int((lo >> e) & 1);
        code = code * 3 + std::size_t(d + 1);
        h.a[e] = -d;
      }
      if (seen[code]) continue;
      seen[code] = true;
      rows.push_back(std::move(h));
    }
  return rows;
}

bool weights_ok(std::size_t n, const BandMap& band, std::size_t s, const std::vector<double>& w) {
  for (std::size_t t = 0; t < s; ++t) {
    if (band[s] == band[t] || !incomparable(s, t)) continue;
    std::size_t lo = band[s] < band[t] ? s : t;
    std::size_t hi = lo == s ? t : s;
    double d = 0;
    for (std::size_t e = 0; e < n; ++e) d += w[e] * (int((hi >> e) & 1) - int((lo >> e) & 1));
    if (d < 1.0 - 1e-7) return false;
  }
  return true;
}

void enumerate_separable(std::size_t n, std::size_t m, std::size_t s, BandMap& band,
                         const std::vector<double>& w, std::vector<BandMap>& out) {
  std::size_t total = std::size_t(1) << n;
  if (s == total) {
    out.push_back(band);
    return;
  }
  std::uint8_t lb = 0;
  for (std::size_t e = 0; e < n; ++e)
    if (s >> e & 1) lb = std::max(lb, band[s ^ (std::size_t(1) << e)]);
  for (std::size_t b = lb; b <= m; ++b) {
    band[s] = std::uint8_t(b);
    if (weights_ok(n, band, s, w)) {
      enumerate_separable(n, m, s + 1, band, w, out);
      continue;
    }
    BandMap prefix(band.begin(), band.begin() + std::ptrdiff_t(s + 1));
    if (auto w2 = separating_weights(n, prefix)) enumerate_separable(n, m, s + 1, band, *w2, out);
  }
}

void enumerate_monotone(std::size_t n, std::size_t m, std::size_t s, BandMap& band, std::vector<BandMap>& out) {
  std::size_t total = std::size_t(1) << n;
  if (s == total) {
    out.push_back(band);
    return;
  }
  std::uint8_t lb = 0;
  for (std::size_t e = 0; e < n; ++e)
    if (s >> e & 1) lb = std::max(lb, band[s ^ (std::size_t(1) << e)]);
  for (std::size_t b = lb; b <= m; ++b) {
    band[s] = std::uint8_t(b);
    enumerate_monotone(n, m, s + 1, band, out);
  }
}

bool is_monotone(std::size_t n, const BandMap& band) {
  for (std::size_t s = 0; s < band.size(); ++s)
    for (std::size_t e = 0; e < n; ++e)
      if ((s >> e & 1) && band[s ^ (std::size_t(1) << e)] > band[s]) return false;
  return true;
}

std::unique_ptr<LogicSet> build_sampled(const std::vector<std::size_t>& groups, std::size_t m,
                                        const EnumerationOptions& opt) {
  std::size_t n = std::accumulate(groups.begin(), groups.end(), std::size_t(0));
  std::size_t states = std::size_t(1) << n;
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> u(std::log(1e-3), std::log(1e3));
  std::map<BandMap, std::vector<double>> found;
  std::vector<double> l(n), h(n), t(m);
  BandMap band(states);
  for (std::size_t k = 0; k < opt.samples; ++k) {
    for (std::size_t e = 0; e < n; ++e) {
      double a = std::exp(u(rng)), b = std::exp(u(rng));
      l[e] = std::min(a, b);
      h[e] = std::max(a, b);
    }
    for (auto& x : t) x = std::exp(u(rng));
    std::sort(t.begin(), t.end());
    for (std::size_t s = 0; s < states; ++s) {
      double v = 1;
      std::size_t p = 0;
      for (std::size_t g : groups) {
        double sum = 0;
        for (std::size_t k2 = 0; k2 < g; ++k2, ++p) sum += (s >> p & 1) ? h[p] : l[p];
        v *= sum;
      }
      band[s] = std::uint8_t(std::lower_bound(t.begin(), t.end(), v) - t.begin());
    }
    if (!found.count(band)) {
      std::vector<double> wit;
      wit.insert(wit.end(), l.begin(), l.end());
      wit.insert(wit.end(), h.begin(), h.end());
      wit.insert(wit.end(), t.begin(), t.end());
      found.emplace(band, std::move(wit));
    }
  }
  auto set = std::make_unique<LogicSet>();
  set->certified = false;
  for (auto& [b, w] : found) {
    set->maps.push_back(b);
    set->sampled.push_back(w);
  }
  return set;
}

} // namespace

std::vector<std::uint8_t> threshold_ranks(const std::vector<std::uint8_t>& order) {
  std::vector<std::uint8_t> r(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) r.at(order[k]) = std::uint8_t(k);
  return r;
}

std::vector<BandMap> monotone_band_maps(std::size_t n_in, std::size_t m) {
  std::vector<BandMap> out;
  BandMap band(std::size_t(1) << n_in, 0);
  enumerate_monotone(n_in, m, 0, band, out);
  return out;
}

std::optional<std::vector<double>> separating_weights(std::size_t n_in, const BandMap& band,
                                                      const std::vector<double>& objective, double upper) {
  auto rows = weight_rows(n_in, band);
  std::vector<double> c = objective.empty() ? std::vector<double>(n_in, 0.0) : objective;
  auto w = seidel_lp(c, rows, std::vector<double>(n_in, 1.0), std::vector<double>(n_in, upper));
  if (!w) return std::nullopt;
  for (const auto& r : rows) {
    double d = 0;
    for (std::size_t e = 0; e < n_in; ++e) d += r.a[e] * (*w)[e];
    if (d > r.b + 1e-6) throw std::logic_error("LP returned a point violating its constraints");
  }
  return w;
}

const LogicSet& realizable_logic(const std::vector<std::size_t>& groups, std::size_t m,
                                 const EnumerationOptions& opt) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<LogicSet>> cache;

  std::size_t n = std::accumulate(groups.begin(), groups.end(), std::size_t(0));
  bool mixed = groups.size() > 1 && std::any_of(groups.begin(), groups.end(), [](std::size_t g) { return g > 1; });
  // product and single sum share the same realizable set
  std::string key = mixed ? "mix" : "lin";
  for (std::size_t g : (mixed ? groups : std::vector<std::size_t>{n})) key += ":" + std::to_string(g);
  key += "/" + std::to_string(m);
  if (mixed) key += "/" + std::to_string(opt.samples) + "/" + std::to_string(opt.seed);

  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  std::unique_ptr<LogicSet> set;
  if (mixed) {
    set = build_sampled(groups, m, opt);
  } else {
    set = std::make_unique<LogicSet>();
    BandMap band(std::size_t(1) << n, 0);
    enumerate_separable(n, m, 0, band, std::vector<double>(n, 1.0), set->maps);
  }
  for (std::size_t i = 0; i < set->maps.size(); ++i) set->lookup.emplace(key_of(set->maps[i]), i);
  return *cache.emplace(key, std::move(set)).first->second;
}

FactorGraph::FactorGraph(const RegulatoryNetwork& net, std::size_t node, const EnumerationOptions& opt)
    : node_(node), n_in_(net.in_degree(node)), m_(net.out_degree(node)) {
  if (n_in_ > opt.max_in_degree)
    throw ResourceLimitError("node " + net.name(node) + " has in-degree " + std::to_string(n_in_) +
                             " (limit " + std::to_string(opt.max_in_degree) + ")");
  if (m_ > opt.max_out_degree)
    throw ResourceLimitError("node " + net.name(node) + " has out-degree " + std::to_string(m_) +
                             " (limit " + std::to_string(opt.max_out_degree) + ")");
  std::vector<std::uint8_t> perm(m_);
  std::iota(perm.begin(), perm.end(), std::uint8_t(0));
  do {
    orders_.push_back(perm);
    ranks_.push_back(threshold_ranks(perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  logic_ = &realizable_logic(net.group_sizes(node), m_, opt);
}

FactorParameter FactorGraph::at(std::size_t idx) const {
  if (idx >= size()) throw std::out_of_range("factor parameter index out of range");
  return {order(idx), logic(idx)};
}

std::optional<std::size_t> FactorGraph::find(const FactorParameter& fp) const {
  auto o = std::find(orders_.begin(), orders_.end(), fp.order);
  if (o == orders_.end()) return std::nullopt;
  auto l = logic_->lookup.find(key_of(fp.logic));
  if (l == logic_->lookup.end()) return std::nullopt;
  return std::size_t(o - orders_.begin()) * logic_count() + l->second;
}

std::vector<std::size_t> FactorGraph::neighbors(std::size_t idx) const {
  std::size_t L = logic_count();
  std::size_t o = idx / L;
  BandMap band = logic(idx);
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < band.size(); ++s) {
    std::uint8_t b = band[s];
    for (int d : {-1, 1}) {
      if ((d < 0 && b == 0) || (d > 0 && b == m_)) continue;
      band[s] = std::uint8_t(b + d);
      auto it = logic_->lookup.find(key_of(band));
      if (it != logic_->lookup.end()) out.push_back(o * L + it->second);
    }
    band[s] = b;
  }
  for (std::size_t p = 0; p + 1 < m_; ++p) {
    if (std::find(band.begin(), band.end(), std::uint8_t(p + 1)) != band.end()) continue;
    auto ord = orders_[o];
    std::swap(ord[p], ord[p + 1]);
    std::size_t o2 = std::size_t(std::find(orders_.begin(), orders_.end(), ord) - orders_.begin());
    out.push_back(o2 * L + idx % L);
  }
  std::sort(out.begin(), out.end());
  return out;
}

FactorGraph enumerate_factor_parameters(const RegulatoryNetwork& net, std::size_t node,
                                        const EnumerationOptions& opt) {
  return FactorGraph(net, node, opt);
}

bool check_realizable(const RegulatoryNetwork& net, std::size_t node, const FactorParameter& fp,
                      const EnumerationOptions& opt) {
  std::size_t n = net.in_degree(node), m = net.out_degree(node);
  if (fp.order.size() != m || fp.logic.size() != (std::size_t(1) << n))
    throw std::invalid_argument("factor parameter shape does not match node " + net.name(node));
  auto sorted = fp.order;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < m; ++k)
    if (sorted[k] != k) throw std::invalid_argument("order is not a permutation");
  for (auto b : fp.logic)
    if (b > m) return false;
  if (!is_monotone(n, fp.logic)) return false;
  if (net.interaction(node) == Interaction::mixed) {
    const auto& set = realizable_logic(net.group_sizes(node), m, opt);
    return set.lookup.count(key_of(fp.logic)) > 0;
  }
  return separating_weights(n, fp.logic).has_value();
}

ParameterGraph::ParameterGraph(RegulatoryNetwork net, const EnumerationOptions& opt) : net_(std::move(net)) {
  for (std::size_t i = 0; i < net_.size(); ++i) {
    factors_.emplace_back(net_, i, opt);
    size_ = checked_mul(size_, factors_.back().size());
  }
}

bool ParameterGraph::certified() const {
  return std::all_of(factors_.begin(), factors_.end(), [](const FactorGraph& f) { return f.certified(); });
}

std::vector<std::size_t> ParameterGraph::index_to_tuple(std::uint64_t k) const {
  if (k >= size_) throw std::out_of_range("parameter index " + std::to_string(k) + " out of range");
  std::vector<std::size_t> t(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    t[i] = std::size_t(k % factors_[i].size());
    k /= factors_[i].size();
  }
  return t;
}

std::uint64_t ParameterGraph::tuple_to_index(const std::vector<std::size_t>& tuple) const {
  if (tuple.size() != factors_.size()) throw std::invalid_argument("tuple length mismatch");
  std::uint64_t k = 0;
  for (std::size_t i = factors_.size(); i-- > 0;) {
    if (tuple[i] >= factors_[i].size()) throw std::out_of_range("factor index out of range");
    k = k * factors_[i].size() + tuple[i];
  }
  return k;
}

std::vector<std::uint64_t> ParameterGraph::neighbors(std::uint64_t k) const {
  auto t = index_to_tuple(k);
  std::vector<std::uint64_t> out;
  std::uint64_t stride = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    for (std::size_t f : factors_[i].neighbors(t[i])) out.push_back(k - t[i] * stride + f * stride);
    stride *= factors_[i].size();
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t ParameterGraph::remainder_size(std::size_t excluded) const {
  return size_ / factors_.at(excluded).size();
}

RemainderParameter ParameterGraph::remainder_of(std::uint64_t k, std::size_t excluded) const {
  auto t = index_to_tuple(k);
  RemainderParameter r{{}, 0};
  std::uint64_t stride = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i == excluded) continue;
    r.tuple.push_back(t[i]);
    r.index += t[i] * stride;
    stride *= factors_[i].size();
  }
  return r;
}

std::uint64_t pg_size(const RegulatoryNetwork& net, const EnumerationOptions& opt) {
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < net.size(); ++i) {
    FactorGraph f(net, i, opt);
    s = checked_mul(s, f.size());
  }
  return s;
}

std::string to_string(RestrictionLabel l) {
  switch (l) {
  case RestrictionLabel::on: return "ON";
  case RestrictionLabel::off: return "OFF";
  case RestrictionLabel::int_high: return "INT_H";
  case RestrictionLabel::int_low: return "INT_L";
  case RestrictionLabel::wt: return "WT";
  }
  return "?";
}

RestrictionLabel parse_restriction_label(std::string_view s) {
  if (s == "ON") return RestrictionLabel::on;
  if (s == "OFF") return RestrictionLabel::off;
  if (s == "INT_H") return RestrictionLabel::int_high;
  if (s == "INT_L") return RestrictionLabel::int_low;
  if (s == "WT") return RestrictionLabel::wt;
  throw std::invalid_argument("unknown restriction label '" + std::string(s) + "'");
}

std::size_t restriction_level(RestrictionLabel l, std::size_t m) {
  switch (l) {
  case RestrictionLabel::on: return m;
  case RestrictionLabel::int_high: return m - 1;
  case RestrictionLabel::int_low: return 1;
  case RestrictionLabel::off: return 0;
  case RestrictionLabel::wt: break;
  }
  throw std::invalid_argument("WT label does not fix a level");
}

// Constant logic (both input values in one band) pins the node at that band.
std::vector<RestrictionLabel> clb2_restriction_sets(const ParameterGraph& pg, std::size_t node) {
  const auto& net = pg.network();
  std::size_t m = net.out_degree(node);
  if (net.in_degree(node) != 1 || m < 1 || m > 3)
    throw std::invalid_argument("restriction labels need a node with one input and one to three outputs; " +
                                net.name(node) + " has " + std::to_string(net.in_degree(node)) + " and " +
                                std::to_string(m));
  const auto& fg = pg.factor(node);
  std::vector<RestrictionLabel> labels(fg.size());
  for (std::size_t k = 0; k < fg.size(); ++k) {
    const auto& b = fg.logic(k);
    if (b[0] != b[1]) labels[k] = RestrictionLabel::wt;
    else if (b[0] == m) labels[k] = RestrictionLabel::on;
    else if (b[0] == 0) labels[k] = RestrictionLabel::off;
    else if (b[0] == m - 1) labels[k] = RestrictionLabel::int_high;
    else labels[k] = RestrictionLabel::int_low;
  }
  return labels;
}

std::string describe(const RegulatoryNetwork& net, std::size_t node, const FactorParameter& fp) {
  const auto& in = net.inputs(node);
  const auto& out = net.outputs(node);
  const std::string& me = net.name(node);
  auto value = [&](std::size_t s) {
    std::string v;
    std::size_t p = 0;
    const auto& groups = net.group_sizes(node);
    for (std::size_t g : groups) {
      std::string term;
      for (std::size_t k = 0; k < g; ++k, ++p) {
        if (k) term += " + ";
        term += std::string((s >> p & 1) ? "h[" : "l[") + me + "," + net.name(net.edge(in[p]).source) + "]";
      }
      v += (g > 1 && groups.size() > 1) ? "(" + term + ")" : term;
    }
    return v;
  };
  std::size_t m = fp.order.size();
  std::string r;
  for (std::size_t b = 0; b <= m; ++b) {
    std::vector<std::string> vals;
    for (std::size_t s = 0; s < fp.logic.size(); ++s)
      if (fp.logic[s] == b) vals.push_back(value(s));
    if (!vals.empty()) {
      if (!r.empty()) r += " < ";
      if (vals.size() == 1) {
        r += vals[0];
      } else {
        r += "{";
        for (std::size_t k = 0; k < vals.size(); ++k) r += (k ? ", " : "") + vals[k];
        r += "}";
      }
    }
    if (b < m) {
      if (!r.empty()) r += " < ";
      r += "t[" + net.name(net.edge(out[fp.order[b]]).target) + "," + me + "]";
    }
  }
  return r;
}

} // namespace cdyn
