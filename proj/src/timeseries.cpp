#include "cdyn/timeseries.hpp"
#include "cdyn/network.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cdyn {

using nlohmann::json;

std::size_t TimeSeries::gene_index(const std::string& name) const {
  auto it = std::find(genes.begin(), genes.end(), name);
  if (it == genes.end()) throw std::invalid_argument("gene '" + name + "' not in time series");
  return std::size_t(it - genes.begin());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    else if (c == ',' && !quoted) {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    auto b = s.find_first_not_of(" \t");
    auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
  }
  return out;
}

double parse_number(const std::string& s, std::size_t line, std::size_t col) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    if (!std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "column " + std::to_string(col + 1) + ": not a finite number: '" + s + "'");
  }
}

} // namespace

TimeSeries parse_csv(const std::string& text, const std::vector<std::string>& select,
                     const std::map<std::string, std::string>& proxies) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    header = split_csv_line(line);
    break;
  }
  if (header.size() < 2) throw ParseError(line_no, "expected header 'time,<gene>,...'");
  for (std::size_t c = 0; c < header.size(); ++c)
    for (std::size_t d = 0; d < c; ++d)
      if (header[c] == header[d]) throw ParseError(line_no, "duplicate column '" + header[c] + "'");

  TimeSeries raw;
  raw.genes.assign(header.begin() + 1, header.end());
  raw.values.resize(raw.genes.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw ParseError(line_no, "expected " + std::to_string(header.size()) + " columns, found " + std::to_string(cells.size()));
    double t = parse_number(cells[0], line_no, 0);
    if (!raw.times.empty() && t <= raw.times.back()) throw ParseError(line_no, "time is not strictly increasing");
    raw.times.push_back(t);
    for (std::size_t g = 0; g < raw.genes.size(); ++g) raw.values[g].push_back(parse_number(cells[g + 1], line_no, g + 1));
  }
  if (raw.times.empty()) throw ParseError(line_no, "no data rows");

  if (select.empty() && proxies.empty()) return raw;
  TimeSeries ts;
  ts.times = raw.times;
  std::vector<std::string> wanted = select;
  if (wanted.empty()) {
    wanted = raw.genes;
    for (auto& g : wanted)
      for (const auto& [proxy, column] : proxies)
        if (column == g) g = proxy;
  }
  for (const auto& g : wanted) {
    auto p = proxies.find(g);
    const std::string& column = p == proxies.end() ? g : p->second;
    auto it = std::find(raw.genes.begin(), raw.genes.end(), column);
    if (it == raw.genes.end()) throw std::invalid_argument("column '" + column + "' not in time series");
    ts.genes.push_back(g);
    ts.values.push_back(raw.values[std::size_t(it - raw.genes.begin())]);
  }
  return ts;
}

TimeSeries load_csv(const std::filesystem::path& path, const std::vector<std::string>& select,
                    const std::map<std::string, std::string>& proxies) {
  return parse_csv(read_text_file(path), select, proxies);
}

const char* to_string(ExtremumKind k) { return k == ExtremumKind::min ? "min" : "max"; }

std::vector<ExtremalInterval> extremal_intervals(const std::vector<double>& t, const std::vector<double>& v,
                                                 double eps) {
  if (t.size() != v.size()) throw std::invalid_argument("times and values differ in length");
  if (t.empty()) throw std::invalid_argument("empty series");
  if (!(eps >= 0)) throw std::invalid_argument("eps must be non-negative");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || !std::isfinite(t[i])) throw std::invalid_argument("non-finite sample");
    if (i && t[i] <= t[i - 1]) throw std::invalid_argument("times must be strictly increasing");
  }
  auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  double range = *mx - *mn;
  std::vector<ExtremalInterval> out;
  if (range <= 0) return out;
  double H = 2 * eps * range;

  std::vector<std::pair<ExtremumKind, std::size_t>> ext;
  std::size_t lo = 0, hi = 0, i = 1;
  ExtremumKind seeking = ExtremumKind::max;
  std::size_t cand = 0;
  bool started = false;
  for (; i < v.size() && !started; ++i) {
    if (v[i] > v[hi]) hi = i;
    if (v[i] < v[lo]) lo = i;
    if (v[i] - v[lo] > H) {
      ext.emplace_back(ExtremumKind::min, lo);
      seeking = ExtremumKind::max;
      cand = i;
      started = true;
    } else if (v[hi] - v[i] > H) {
      ext.emplace_back(ExtremumKind::max, hi);
      seeking = ExtremumKind::min;
      cand = i;
      started = true;
    }
  }
  if (!started) return out;
  for (; i < v.size(); ++i) {
    if (seeking == ExtremumKind::max) {
      if (v[i] > v[cand]) cand = i;
      else if (v[cand] - v[i] > H) {
        ext.emplace_back(ExtremumKind::max, cand);
        seeking = ExtremumKind::min;
        cand = i;
      }
    } else {
      if (v[i] < v[cand]) cand = i;
      else if (v[i] - v[cand] > H) {
        ext.emplace_back(ExtremumKind::min, cand);
        seeking = ExtremumKind::max;
        cand = i;
      }
    }
  }
  ext.emplace_back(seeking, cand);

  for (auto [kind, idx] : ext) {
    double level = kind == ExtremumKind::min ? v[idx] + H : v[idx] - H;
    auto outside = [&](std::size_t j) { return kind == ExtremumKind::min ? v[j] > level : v[j] < level; };
    auto cross = [&](std::size_t a, std::size_t b) {
      return t[a] + (level - v[a]) / (v[b] - v[a]) * (t[b] - t[a]);
    };
    ExtremalInterval e{kind, t.front(), t.back(), t[idx], v[idx]};
    for (std::size_t j = idx; j-- > 0;)
      if (outside(j)) {
        e.t_lo = cross(j, j + 1);
        break;
      }
    for (std::size_t j = idx + 1; j < v.size(); ++j)
      if (outside(j)) {
        e.t_hi = cross(j - 1, j);
        break;
      }
    out.push_back(e);
  }
  return out;
}

std::vector<ExtremalInterval> extremal_intervals(const TimeSeries& ts, std::size_t gene, double eps) {
  return extremal_intervals(ts.times, ts.values.at(gene), eps);
}

PatternDiagram::PatternDiagram(std::vector<PatternEvent> events,
                               const std::vector<std::pair<std::size_t, std::size_t>>& relations)
    : events_(std::move(events)) {
  std::size_t n = events_.size();
  less_.assign(n, std::vector<bool>(n, false));
  for (auto [a, b] : relations) {
    if (a >= n || b >= n) throw std::invalid_argument("order relation refers to a missing event");
    less_[a][b] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t a = 0; a < n; ++a)
      if (less_[a][k])
        for (std::size_t b = 0; b < n; ++b)
          if (less_[k][b]) less_[a][b] = true;
  for (std::size_t a = 0; a < n; ++a)
    if (less_[a][a]) throw std::invalid_argument("pattern order contains a cycle through " + event_name(events_[a]));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (events_[a].gene == events_[b].gene && !less_[a][b] && !less_[b][a])
        throw std::invalid_argument("events of gene " + events_[a].gene + " are not totally ordered");
}

std::vector<std::pair<std::size_t, std::size_t>> PatternDiagram::covers() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t n = size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!less_[a][b]) continue;
      bool cover = true;
      for (std::size_t c = 0; c < n && cover; ++c)
        if (less_[a][c] && less_[c][b]) cover = false;
      if (cover) out.emplace_back(a, b);
    }
  return out;
}

std::vector<std::string> PatternDiagram::genes() const {
  std::vector<std::string> g;
  for (const auto& e : events_)
    if (std::find(g.begin(), g.end(), e.gene) == g.end()) g.push_back(e.gene);
  return g;
}

std::vector<std::size_t> PatternDiagram::chain(const std::string& gene) const {
  std::vector<std::size_t> c;
  for (std::size_t i = 0; i < size(); ++i)
    if (events_[i].gene == gene) c.push_back(i);
  std::sort(c.begin(), c.end(), [&](std::size_t a, std::size_t b) { return less_[a][b]; });
  return c;
}

PatternDiagram build_pattern_diagram(const std::vector<std::string>& genes,
                                     const std::vector<std::vector<ExtremalInterval>>& intervals,
                                     const PatternOptions& opt) {
  if (genes.size() != intervals.size()) throw std::invalid_argument("one interval list per gene is required");
  std::vector<PatternEvent> events;
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (std::size_t g = 0; g < genes.size(); ++g) {
    auto list = intervals[g];
    std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) { return a.t_star < b.t_star; });
    if (opt.max_events_per_gene && list.size() > *opt.max_events_per_gene) list.resize(*opt.max_events_per_gene);
    std::size_t n_min = 0, n_max = 0;
    for (std::size_t k = 0; k < list.size(); ++k) {
      const auto& iv = list[k];
      std::size_t ord = iv.kind == ExtremumKind::min ? n_min++ : n_max++;
      if (k) rel.emplace_back(events.size() - 1, events.size());
      events.push_back({genes[g], iv.kind, ord, iv.t_lo, iv.t_hi});
    }
  }
  for (std::size_t a = 0; a < events.size(); ++a)
    for (std::size_t b = 0; b < events.size(); ++b)
      if (events[a].gene != events[b].gene && events[a].t_hi < events[b].t_lo) rel.emplace_back(a, b);
  return PatternDiagram(std::move(events), rel);
}

PatternDiagram build_pattern_diagram(const TimeSeries& ts, double eps, const PatternOptions& opt) {
  std::vector<std::vector<ExtremalInterval>> iv;
  for (std::size_t g = 0; g < ts.genes.size(); ++g) iv.push_back(extremal_intervals(ts, g, eps));
  return build_pattern_diagram(ts.genes, iv, opt);
}

std::string event_name(const PatternEvent& e) {
  std::string s = e.gene + "_" + to_string(e.kind);
  if (e.ordinal) s += "#" + std::to_string(e.ordinal);
  return s;
}

std::string write_pattern(const PatternDiagram& pd) {
  std::string out;
  for (std::size_t i = 0; i < pd.size(); ++i) {
    const auto& e = pd.event(i);
    json j = {{"type", "event"}, {"id", i}, {"gene", e.gene}, {"kind", to_string(e.kind)}, {"ordinal", e.ordinal}};
    if (e.t_lo != 0 || e.t_hi != 0) {
      j["t_lo"] = e.t_lo;
      j["t_hi"] = e.t_hi;
    }
    out += j.dump() + "\n";
  }
  for (auto [a, b] : pd.covers()) out += json{{"type", "order"}, {"from", a}, {"to", b}}.dump() + "\n";
  return out;
}

PatternDiagram parse_pattern(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<PatternEvent> events;
  std::map<std::string, std::size_t> ids;
  std::vector<std::pair<json, std::size_t>> orders;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& ex) {
      throw ParseError(line_no, std::string("malformed record: ") + ex.what());
    }
    std::string type = j.value("type", "");
    if (type == "event") {
      PatternEvent e;
      if (!j.contains("gene") || !j.contains("kind")) throw ParseError(line_no, "event needs gene and kind");
      e.gene = j["gene"].get<std::string>();
      std::string kind = j["kind"].get<std::string>();
      if (kind != "min" && kind != "max") throw ParseError(line_no, "kind must be min or max");
      e.kind = kind == "min" ? ExtremumKind::min : ExtremumKind::max;
      e.t_lo = j.value("t_lo", 0.0);
      e.t_hi = j.value("t_hi", 0.0);
      std::string id = j.contains("id") ? (j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump())
                                        : std::to_string(events.size());
      if (ids.count(id)) throw ParseError(line_no, "duplicate event id " + id);
      ids[id] = events.size();
      events.push_back(e);
    } else if (type == "order") {
      orders.emplace_back(j, line_no);
    } else if (type != "pattern") {
      throw ParseError(line_no, "unknown record type '" + type + "'");
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> rel;
  for (auto& [j, ln] : orders) {
    auto ref = [&, ln = ln](const json& v) {
      std::string id = v.is_string() ? v.get<std::string>() : v.dump();
      auto it = ids.find(id);
      if (it == ids.end()) throw ParseError(ln, "order refers to unknown event " + id);
      return it->second;
    };
    if (!j.contains("from") || !j.contains("to")) throw ParseError(ln, "order needs from and to");
    rel.emplace_back(ref(j["from"]), ref(j["to"]));
  }
  // events of a gene form a chain in file order
  for (std::size_t a = 0; a < events.size(); ++a)
    for (std::size_t b = a + 1; b < events.size(); ++b)
      if (events[a].gene == events[b].gene) {
        rel.emplace_back(a, b);
        break;
      }
  std::map<std::pair<std::string, ExtremumKind>, std::size_t> count;
  for (auto& e : events) e.ordinal = count[{e.gene, e.kind}]++;
  return PatternDiagram(std::move(events), rel);
}

PatternDiagram load_pattern(const std::filesystem::path& path) { return parse_pattern(read_text_file(path)); }

std::string pattern_dot(const PatternDiagram& pd) {
  std::ostringstream o;
  o << "digraph pattern {\n";
  for (std::size_t i = 0; i < pd.size(); ++i) o << "  e" << i << " [label=\"" << event_name(pd.event(i)) << "\"];\n";
  for (auto [a, b] : pd.covers()) o << "  e" << a << " -> e" << b << ";\n";
  o << "}\n";
  return o.str();
}

namespace {

bool extend(const PatternDiagram& pd, std::vector<std::size_t>& prefix, std::vector<bool>& used,
            const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  std::size_t n = pd.size();
  if (prefix.size() == n) return visit(prefix);
  for (std::size_t e = 0; e < n; ++e) {
    if (used[e]) continue;
    bool minimal = true;
    for (std::size_t p = 0; p < n && minimal; ++p)
      if (!used[p] && pd.less(p, e)) minimal = false;
    if (!minimal) continue;
    used[e] = true;
    prefix.push_back(e);
    bool go = extend(pd, prefix, used, visit);
    prefix.pop_back();
    used[e] = false;
    if (!go) return false;
  }
  return true;
}

} // namespace

void for_each_linear_extension(const PatternDiagram& pd,
                               const std::function<bool(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> prefix;
  std::vector<bool> used(pd.size(), false);
  extend(pd, prefix, used, visit);
}

LinearExtensions linear_extensions(const PatternDiagram& pd, std::size_t cap) {
  LinearExtensions out;
  for_each_linear_extension(pd, [&](const std::vector<std::size_t>& o) {
    if (out.orders.size() == cap) {
      out.capped = true;
      return false;
    }
    out.orders.push_back(o);
    return true;
  });
  return out;
}

} // namespace cdyn
