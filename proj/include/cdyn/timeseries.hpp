#pragma once

#include "cdyn/network.hpp"  // ParseError

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cdyn {

struct TimeSeries {
  std::vector<double> times;
  std::vector<std::string> genes;
  std::vector<std::vector<double>> values;  // values[g][t]

  std::size_t gene_index(const std::string& name) const;
};

// CSV with a header "time,<gene>,...". `proxies` renames columns (proxy name -> column name);
// when `select` is non-empty only those genes are kept, in that order.
TimeSeries parse_csv(const std::string& text, const std::vector<std::string>& select = {},
                     const std::map<std::string, std::string>& proxies = {});
TimeSeries load_csv(const std::filesystem::path& path, const std::vector<std::string>& select = {},
                    const std::map<std::string, std::string>& proxies = {});

enum class ExtremumKind : std::uint8_t { min, max };
const char* to_string(ExtremumKind k);

struct ExtremalInterval {
  ExtremumKind kind;
  double t_lo;
  double t_hi;
  double t_star;  // sample time of the extreme value
  double value;
};

// Extrema that survive noise of +-eps*range, with the interval each one is confined to.
// A minimum at value v is kept only if the curve rises by more than 2*eps*range on both
// sides (or meets a series end); its interval is the connected stretch around it where the
// curve stays at or below v + 2*eps*range.
std::vector<ExtremalInterval> extremal_intervals(const std::vector<double>& times, const std::vector<double>& values,
                                                 double eps);
std::vector<ExtremalInterval> extremal_intervals(const TimeSeries& ts, std::size_t gene, double eps);

struct PatternEvent {
  std::string gene;
  ExtremumKind kind;
  std::size_t ordinal = 0;  // occurrence index among events of this gene and kind
  double t_lo = 0;
  double t_hi = 0;
};

class PatternDiagram {
public:
  PatternDiagram() = default;
  // `relations` are pairs (a, b) meaning a precedes b; the transitive closure is taken.
  PatternDiagram(std::vector<PatternEvent> events, const std::vector<std::pair<std::size_t, std::size_t>>& relations);

  std::size_t size() const { return events_.size(); }
  const std::vector<PatternEvent>& events() const { return events_; }
  const PatternEvent& event(std::size_t i) const { return events_.at(i); }
  bool less(std::size_t a, std::size_t b) const { return less_.at(a).at(b); }
  std::vector<std::pair<std::size_t, std::size_t>> covers() const;
  std::vector<std::string> genes() const;  // in first-appearance order
  // events of one gene in chain order
  std::vector<std::size_t> chain(const std::string& gene) const;

private:
  std::vector<PatternEvent> events_;
  std::vector<std::vector<bool>> less_;
};

struct PatternOptions {
  std::optional<std::size_t> max_events_per_gene;
};

PatternDiagram build_pattern_diagram(const TimeSeries& ts, double eps, const PatternOptions& opt = {});
PatternDiagram build_pattern_diagram(const std::vector<std::string>& genes,
                                     const std::vector<std::vector<ExtremalInterval>>& intervals,
                                     const PatternOptions& opt = {});

// Record file: one JSON object per line, {"type":"event",...} then {"type":"order","from":a,"to":b}.
std::string write_pattern(const PatternDiagram& pd);
PatternDiagram parse_pattern(const std::string& text);
PatternDiagram load_pattern(const std::filesystem::path& path);
std::string pattern_dot(const PatternDiagram& pd);
std::string event_name(const PatternEvent& e);

struct LinearExtensions {
  std::vector<std::vector<std::size_t>> orders;
  bool capped = false;
};

// Visits linear extensions in lexicographic order of event indices; stops when visit returns false.
void for_each_linear_extension(const PatternDiagram& pd, const std::function<bool(const std::vector<std::size_t>&)>& visit);
LinearExtensions linear_extensions(const PatternDiagram& pd, std::size_t cap);

} // namespace cdyn
