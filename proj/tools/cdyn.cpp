// Command line front end. Machine-readable records go to stdout with --porcelain,
// everything meant for a person goes to stderr or to stdout without it.
#include "cdyn/dynamics.hpp"
#include "cdyn/hillsim.hpp"
#include "cdyn/paramgraph.hpp"
#include "cdyn/patternmatch.hpp"
#include "cdyn/phenotypes.hpp"
#include "cdyn/timeseries.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

using namespace cdyn;
using nlohmann::json;

namespace {

bool porcelain = false;

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() || !out.empty()) out.push_back(cur);
  return out;
}

json factor_json(const RegulatoryNetwork& net, const FactorGraph& fg, std::size_t idx, bool with_neighbors) {
  auto fp = fg.at(idx);
  std::vector<std::string> order;
  for (auto q : fp.order) order.push_back(net.name(net.edge(net.outputs(fg.node())[q]).target));
  json j = {{"node", net.name(fg.node())},
            {"index", idx},
            {"order", order},
            {"logic", std::vector<int>(fp.logic.begin(), fp.logic.end())},
            {"inequalities", describe(net, fg.node(), fp)}};
  if (with_neighbors) j["neighbors"] = fg.neighbors(idx);
  return j;
}

int cmd_pg_size(const std::string& net_path) {
  auto net = load_network(net_path);
  std::uint64_t total = 1;
  json nodes = json::array();
  bool certified = true;
  for (std::size_t i = 0; i < net.size(); ++i) {
    FactorGraph fg(net, i, {});
    total *= fg.size();
    certified &= fg.certified();
    nodes.push_back({{"node", net.name(i)},
                     {"in", net.in_degree(i)},
                     {"out", net.out_degree(i)},
                     {"orders", fg.order_count()},
                     {"logic", fg.logic_count()},
                     {"size", fg.size()},
                     {"certified", fg.certified()}});
  }
  if (porcelain) {
    std::cout << json{{"size", pg_size(net)}, {"certified", certified}, {"factors", nodes}}.dump() << "\n";
  } else {
    for (const auto& n : nodes)
      std::cout << n["node"].get<std::string>() << ": " << n["orders"] << " orders x " << n["logic"]
                << " logic = " << n["size"] << (n["certified"].get<bool>() ? "" : " (sampled, not certified)") << "\n";
    std::cout << "parameter graph size: " << pg_size(net) << "\n";
  }
  return 0;
}

int cmd_pg_factor(const std::string& net_path, const std::string& node, std::size_t limit) {
  auto net = load_network(net_path);
  FactorGraph fg(net, net.index(node), {});
  std::size_t n = std::min(limit, fg.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (porcelain) std::cout << factor_json(net, fg, k, true).dump() << "\n";
    else std::cout << k << ": " << describe(net, fg.node(), fg.at(k)) << "\n";
  }
  if (n < fg.size()) std::cerr << "(" << fg.size() - n << " more not shown)\n";
  return 0;
}

int cmd_pg_dump(const std::string& net_path, const std::string& out) {
  auto net = load_network(net_path);
  std::string text;
  text += json{{"type", "network"}, {"fingerprint", hex64(fingerprint(net))}, {"text", serialize(net)},
               {"size", pg_size(net)}}.dump() + "\n";
  for (std::size_t i = 0; i < net.size(); ++i) {
    FactorGraph fg(net, i, {});
    for (std::size_t k = 0; k < fg.size(); ++k) {
      json j = factor_json(net, fg, k, true);
      j["type"] = "factor";
      text += j.dump() + "\n";
    }
  }
  write_output(out, text);
  return 0;
}

// NODE:b0,b1,...[:T1,T2,...] where the optional tail lists targets by ascending threshold
int cmd_pg_find(const std::string& net_path, const std::vector<std::string>& filters, std::size_t limit) {
  auto net = load_network(net_path);
  ParameterGraph pg(net);
  std::vector<std::vector<std::size_t>> choices(net.size());
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t k = 0; k < pg.factor(i).size(); ++k) choices[i].push_back(k);
  for (const auto& f : filters) {
    auto parts = split(f, ':');
    if (parts.size() < 2 || parts.size() > 3) throw CLI::ValidationError("--factor", "expected NODE:BANDS[:ORDER]");
    std::size_t i = net.index(parts[0]);
    const auto& fg = pg.factor(i);
    BandMap band;
    for (const auto& b : split(parts[1], ',')) band.push_back(std::uint8_t(std::stoul(b)));
    std::optional<std::vector<std::uint8_t>> order;
    if (parts.size() == 3) {
      order.emplace();
      for (const auto& t : split(parts[2], ',')) {
        std::size_t target = net.index(t);
        std::size_t q = SIZE_MAX;
        for (std::size_t p = 0; p < net.out_degree(i); ++p)
          if (net.edge(net.outputs(i)[p]).target == target) q = p;
        if (q == SIZE_MAX) throw std::invalid_argument(parts[0] + " has no edge to " + t);
        order->push_back(std::uint8_t(q));
      }
    }
    std::vector<std::size_t> keep;
    for (auto k : choices[i])
      if (fg.logic(k) == band && (!order || fg.order(k) == *order)) keep.push_back(k);
    choices[i] = keep;
  }
  std::uint64_t total = 1;
  for (const auto& c : choices) total *= c.size();
  std::cerr << total << " matching parameters\n";
  std::vector<std::size_t> pick(net.size(), 0), tuple(net.size());
  for (std::uint64_t n = 0; n < std::min<std::uint64_t>(total, limit); ++n) {
    for (std::size_t i = 0; i < net.size(); ++i) tuple[i] = choices[i][pick[i]];
    std::uint64_t k = pg.tuple_to_index(tuple);
    if (porcelain) std::cout << json{{"param", k}, {"tuple", tuple}}.dump() << "\n";
    else std::cout << k << "\n";
    for (std::size_t i = 0; i < net.size() && ++pick[i] == choices[i].size(); ++i) pick[i] = 0;
  }
  return 0;
}

int cmd_pg_param(const std::string& net_path, std::uint64_t k) {
  auto net = load_network(net_path);
  ParameterGraph pg(net);
  auto t = pg.index_to_tuple(k);
  if (porcelain) {
    json j = {{"param", k}, {"tuple", t}, {"factors", json::array()}};
    for (std::size_t i = 0; i < net.size(); ++i) j["factors"].push_back(factor_json(net, pg.factor(i), t[i], false));
    std::cout << j.dump() << "\n";
  } else {
    for (std::size_t i = 0; i < net.size(); ++i)
      std::cout << net.name(i) << " [" << t[i] << "]: " << describe(net, i, pg.factor(i).at(t[i])) << "\n";
  }
  return 0;
}

int cmd_dyn(const std::string& what, const std::string& net_path, std::uint64_t k, bool dot) {
  auto net = load_network(net_path);
  ParameterGraph pg(net);
  auto stg = build_stg(pg, k);
  if (what == "stg") {
    if (dot) {
      std::cout << stg_dot(stg, net);
    } else {
      for (std::size_t d = 0; d < stg.size(); ++d) {
        if (porcelain) {
          std::vector<std::string> succ;
          for (auto v : stg.successors(d)) succ.push_back(domain_name(stg, v));
          std::cout << json{{"domain", domain_name(stg, d)}, {"label", stg.label_string(d)}, {"successors", succ}}.dump()
                    << "\n";
        } else {
          std::cout << domain_name(stg, d) << " " << stg.label_string(d) << " ->";
          for (auto v : stg.successors(d)) std::cout << " " << domain_name(stg, v);
          std::cout << "\n";
        }
      }
    }
    return 0;
  }
  auto mg = morse_graph(stg);
  if (dot) {
    std::cout << morse_dot(mg, stg, net);
    return 0;
  }
  for (std::size_t s = 0; s < mg.sets.size(); ++s) {
    const auto& ms = mg.sets[s];
    std::vector<std::string> doms;
    for (auto d : ms.domains) doms.push_back(domain_name(stg, d));
    std::vector<std::size_t> succ;
    for (auto [a, b] : mg.edges)
      if (a == s) succ.push_back(b);
    if (porcelain) {
      std::cout << json{{"set", s}, {"annotation", annotation(ms, stg, net)}, {"stable", ms.stable},
                        {"domains", doms}, {"successors", succ}}.dump() << "\n";
    } else {
      std::cout << s << ": " << annotation(ms, stg, net) << (ms.stable ? " stable" : "") << " (" << doms.size()
                << " domains)";
      for (auto b : succ) std::cout << " -> " << b;
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_ts(const std::string& csv, double eps, const std::string& genes, const std::vector<std::string>& proxies,
           std::optional<std::size_t> max_events, const std::string& out, bool dot) {
  std::map<std::string, std::string> prox;
  for (const auto& p : proxies) {
    auto kv = split(p, '=');
    if (kv.size() != 2) throw CLI::ValidationError("--proxy", "expected NAME=COLUMN");
    prox[kv[0]] = kv[1];
  }
  auto ts = load_csv(csv, genes.empty() ? std::vector<std::string>{} : split(genes, ','), prox);
  PatternOptions opt;
  opt.max_events_per_gene = max_events;
  auto pd = build_pattern_diagram(ts, eps, opt);
  write_output(out, dot ? pattern_dot(pd) : write_pattern(pd));
  std::cerr << pd.size() << " events, " << pd.covers().size() << " cover relations\n";
  return 0;
}

int cmd_match(const std::string& net_path, std::uint64_t k, const std::string& pattern, bool path, bool all_sets) {
  auto net = load_network(net_path);
  ParameterGraph pg(net);
  auto pd = load_pattern(pattern);
  auto stg = build_stg(pg, k);
  auto mg = morse_graph(stg);
  bool any = false;
  for (std::size_t s = 0; s < mg.sets.size(); ++s) {
    const auto& ms = mg.sets[s];
    if (!all_sets && !ms.stable) continue;
    auto g = label_events(stg, net, ms);
    auto r = path ? match_path(pd, g) : match_cycle(pd, g);
    any |= r.matched;
    std::vector<std::string> walk;
    for (auto d : r.witness.walk) walk.push_back(domain_name(stg, d));
    if (porcelain) {
      std::cout << json{{"set", s}, {"annotation", annotation(ms, stg, net)}, {"matched", r.matched}, {"walk", walk}}.dump()
                << "\n";
    } else {
      std::cout << s << " " << annotation(ms, stg, net) << ": " << (r.matched ? "match" : "no match");
      for (const auto& w : walk) std::cout << " " << w;
      std::cout << "\n";
    }
  }
  return any ? 0 : 1;
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& r, std::uint64_t size) {
  if (r.empty()) return {0, size};
  auto p = split(r, ':');
  if (p.size() != 2) throw CLI::ValidationError("--range", "expected BEGIN:END");
  std::uint64_t a = p[0].empty() ? 0 : std::stoull(p[0]);
  std::uint64_t b = p[1].empty() ? size : std::stoull(p[1]);
  if (a > b) throw CLI::ValidationError("--range", "begin exceeds end");
  if (b > size) throw CLI::ValidationError("--range", "end exceeds parameter graph size " + std::to_string(size));
  return {a, b};
}

int cmd_sweep(const std::string& net_path, const std::string& spec_path, const std::string& range,
              const std::string& out, std::size_t workers, std::uint64_t checkpoint, bool resume) {
  auto net = load_network(net_path);
  ParameterGraph pg(net);
  auto spec = load_phenotype_spec(spec_path, net);
  auto [a, b] = parse_range(range, pg.size());
  SweepOptions opt;
  opt.workers = workers;
  opt.checkpoint_every = checkpoint;
  opt.resume = resume;
  opt.provenance = {{"subcommand", "sweep"},
                    {"net_file", net_path},
                    {"net_file_hash", hex64(fnv1a(read_text_file(net_path)))},
                    {"spec_file", spec_path},
                    {"spec_file_hash", hex64(fnv1a(read_text_file(spec_path)))}};
  opt.progress = [](std::uint64_t done, std::uint64_t total) { std::cerr << "\r" << done << "/" << total << std::flush; };
  auto s = run_sweep_to_dir(pg, spec, a, b, out, opt);
  std::cerr << "\n";
  if (porcelain) {
    std::cout << json{{"permissible", s.permissible}, {"matches", s.matches}, {"seconds", s.seconds}}.dump() << "\n";
  } else {
    std::cout << "permissible " << s.permissible << ", matches " << s.matches << ", " << s.seconds << " s\n";
  }
  return 0;
}

int cmd_merge(const std::string& dir) {
  auto m = merge_shards(dir);
  if (porcelain) std::cout << json{{"begin", m.begin}, {"end", m.end}, {"matches", m.records.size()}}.dump() << "\n";
  else std::cout << "merged [" << m.begin << ", " << m.end << "): " << m.records.size() << " matches\n";
  return 0;
}

std::vector<SweepResult> load_results(const std::vector<std::string>& paths) {
  std::vector<SweepResult> out;
  for (const auto& p : paths) {
    std::filesystem::path path(p);
    if (std::filesystem::is_directory(path)) path /= "merged.manifest.json";
    out.push_back(load_result(path));
  }
  return out;
}

int cmd_mpg(const std::string& net_path, const std::string& excluded, const std::vector<std::string>& results) {
  auto net = load_network(net_path);
  ParameterGraph pg(net);
  auto s = mpg_intersect(load_results(results), pg, net.index(excluded));
  if (porcelain) {
    for (std::size_t k = 0; k < s.phenotypes.size(); ++k)
      std::cout << json{{"phenotype", s.phenotypes[k]}, {"mpgs", s.sizes[k]}, {"with_reference", s.with_reference[k]},
                        {"percent_of_reference", s.percent_of_reference[k]}, {"reference", s.reference}}.dump() << "\n";
    std::cout << json{{"all", s.all}, {"remainder_size", s.remainder_size}}.dump() << "\n";
  } else {
    std::cout << "remainder parameters: " << s.remainder_size << "\n";
    for (std::size_t k = 0; k < s.phenotypes.size(); ++k)
      std::cout << s.phenotypes[k] << ": " << s.sizes[k] << " MPGs, " << s.with_reference[k] << " shared with "
                << s.reference << " (" << s.percent_of_reference[k] << "%)\n";
    std::cout << "all phenotypes: " << s.all << "\n";
  }
  return 0;
}

int cmd_coexist(const std::string& net_path, const std::string& excluded, const std::vector<std::string>& results,
                bool relaxed) {
  auto net = load_network(net_path);
  ParameterGraph pg(net);
  auto loaded = load_results(results);
  // restricted and relaxed results answer different questions; refuse to mix them
  for (const auto& r : loaded)
    if (r.restricted == relaxed)
      throw std::runtime_error(r.phenotype + " was swept in " + (r.restricted ? "restricted" : "relaxed") +
                               " mode; pass " + (relaxed ? "restricted results without --relaxed" : "--relaxed"));
  auto c = coexistence_query(loaded, pg, net.index(excluded));
  for (auto [mask, n] : c.subsets) {
    std::vector<std::string> names;
    for (std::size_t k = 0; k < c.phenotypes.size(); ++k)
      if (mask >> k & 1) names.push_back(c.phenotypes[k]);
    if (porcelain) {
      std::cout << json{{"phenotypes", names}, {"mpgs", n}}.dump() << "\n";
    } else {
      for (std::size_t k = 0; k < names.size(); ++k) std::cout << (k ? " & " : "") << names[k];
      std::cout << ": " << n << "\n";
    }
  }
  return 0;
}

int cmd_sim(const std::string& net_path, std::uint64_t k, std::uint64_t seed, const std::string& out,
            const std::string& witness_out, const std::string& x0s, double t_end, double dt, double hill_n) {
  auto net = load_network(net_path);
  ParameterGraph pg(net);
  auto rp = sample_region(pg, k, seed);
  rp.hill_n = hill_n;
  if (!witness_out.empty()) write_output(witness_out, witness_json(net, rp) + "\n");
  std::vector<double> x0;
  if (x0s.empty()) {
    x0 = initial_conditions(net, rp, 1, seed)[0];
  } else {
    for (const auto& v : split(x0s, ',')) x0.push_back(std::stod(v));
  }
  SimOptions opt;
  opt.t_end = t_end;
  opt.dt = dt;
  opt.stride = std::max<std::size_t>(1, std::size_t(0.1 / dt));
  auto tr = simulate(net, rp, x0, opt);
  std::string csv = "time";
  for (const auto& n : net.names()) csv += "," + n;
  csv += "\n";
  for (std::size_t s = 0; s < tr.times.size(); ++s) {
    csv += std::to_string(tr.times[s]);
    for (const auto& v : tr.values) csv += "," + std::to_string(v[s]);
    csv += "\n";
  }
  write_output(out, csv);
  auto fin = tr.final_state();
  auto dom = domain_of(net, rp, fin);
  std::cerr << "final domain:";
  for (auto c : dom) std::cerr << " " << c;
  std::cerr << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Switching-system dynamics, parameter graphs and time-series pattern matching"};
  app.set_version_flag("--version", std::string("cdyn ") + kVersion);
  app.add_flag("--porcelain", porcelain, "Machine-readable records on stdout");
  app.require_subcommand(1);

  std::string net_path, node, out, csv, genes, pattern, spec, range, excluded, witness_out, x0s;
  std::uint64_t param = 0, seed = 1, checkpoint = 0;
  std::size_t limit = 1000, workers = 1, max_events = 0;
  std::vector<std::string> filters, proxies, results;
  bool dot = false, path = false, all_sets = false, resume = false, relaxed = false;
  double eps = 0.1, t_end = 200, dt = 0.01, hill_n = 10;

  auto* pg = app.add_subcommand("pg", "Parameter graph queries");
  pg->require_subcommand(1);
  auto* pg_size_cmd = pg->add_subcommand("size", "Size of the parameter graph");
  pg_size_cmd->add_option("--net", net_path, "Network file")->required()->check(CLI::ExistingFile);
  auto* pg_factor = pg->add_subcommand("factor", "List the factor graph of one node");
  pg_factor->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
  pg_factor->add_option("--node", node)->required();
  pg_factor->add_option("--limit", limit);
  auto* pg_dump = pg->add_subcommand("dump", "Dump every factor graph as JSON lines");
  pg_dump->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
  pg_dump->add_option("-o,--out", out);
  auto* pg_find = pg->add_subcommand("find", "Find parameter indices by factor filters");
  pg_find->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
  pg_find->add_option("--factor", filters, "NODE:BANDS[:TARGETS], bands per activation state")->required();
  pg_find->add_option("--limit", limit);
  auto* pg_param = pg->add_subcommand("param", "Describe one parameter");
  pg_param->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
  pg_param->add_option("--param", param)->required();

  auto* dyn = app.add_subcommand("dyn", "Domain graph and Morse graph of a parameter");
  dyn->require_subcommand(1);
  for (const char* name : {"stg", "mg"}) {
    auto* c = dyn->add_subcommand(name, std::string(name) == "stg" ? "State transition graph" : "Morse graph");
    c->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
    c->add_option("--param", param)->required();
    c->add_flag("--dot", dot);
  }

  auto* ts = app.add_subcommand("ts", "Time series tools");
  ts->require_subcommand(1);
  auto* disc = ts->add_subcommand("discretize", "Pattern diagram of a time series");
  disc->add_option("--csv", csv)->required()->check(CLI::ExistingFile);
  disc->add_option("--eps", eps)->check(CLI::Range(0.0, 0.5));
  disc->add_option("--genes", genes, "Comma separated genes to keep");
  disc->add_option("--proxy", proxies, "NAME=COLUMN");
  auto* me = disc->add_option("--max-events-per-gene", max_events);
  disc->add_option("-o,--out", out);
  disc->add_flag("--dot", dot);

  auto* match = app.add_subcommand("match", "Match a pattern against the Morse sets of a parameter");
  match->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
  match->add_option("--param", param)->required();
  match->add_option("--pattern", pattern)->required()->check(CLI::ExistingFile);
  auto* cycle_flag = match->add_flag("--cycle", "Match closed walks (the default)");
  match->add_flag("--path", path, "Match open walks instead of cycles")->excludes(cycle_flag);
  match->add_flag("--all-sets", all_sets, "Include unstable Morse sets");

  auto* sweep = app.add_subcommand("sweep", "Phenotype sweep over a parameter range");
  sweep->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
  sweep->add_option("--spec", spec)->required()->check(CLI::ExistingFile);
  sweep->add_option("--range", range, "BEGIN:END");
  sweep->add_option("-o,--out", out)->required();
  sweep->add_option("--workers", workers)->check(CLI::PositiveNumber);
  sweep->add_option("--checkpoint", checkpoint, "Write progress every N parameters");
  sweep->add_flag("--resume", resume);

  auto* merge = app.add_subcommand("merge", "Merge shard results in a directory");
  merge->add_option("-o,--out", out, "Directory holding the shards")->required();

  auto* mpg = app.add_subcommand("mpg", "Intersect phenotypes over the remainder parameters");
  mpg->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
  mpg->add_option("--exclude", excluded)->required();
  mpg->add_option("results,--results", results, "Merged manifests or result directories")->required();

  auto* coexist = app.add_subcommand("coexist", "Coexistence counts for every subset of phenotypes");
  coexist->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
  coexist->add_option("--exclude", excluded)->required();
  coexist->add_option("results,--results", results, "Merged manifests or result directories")->required();
  coexist->add_flag("--relaxed", relaxed, "Results were swept in relaxed mode");

  auto* sim = app.add_subcommand("sim", "Simulate the steep Hill model at a sampled witness");
  sim->add_option("--net", net_path)->required()->check(CLI::ExistingFile);
  sim->add_option("--param", param)->required();
  sim->add_option("--seed", seed);
  sim->add_option("-o,--out", out);
  sim->add_option("--witness", witness_out, "Write the sampled (l, h, theta) values");
  sim->add_option("--x0", x0s, "Comma separated initial state");
  sim->add_option("--t-end", t_end)->check(CLI::PositiveNumber);
  sim->add_option("--dt", dt)->check(CLI::PositiveNumber);
  sim->add_option("--hill-n", hill_n)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (pg_size_cmd->parsed()) return cmd_pg_size(net_path);
    if (pg_factor->parsed()) return cmd_pg_factor(net_path, node, limit);
    if (pg_dump->parsed()) return cmd_pg_dump(net_path, out);
    if (pg_find->parsed()) return cmd_pg_find(net_path, filters, limit);
    if (pg_param->parsed()) return cmd_pg_param(net_path, param);
    if (dyn->parsed()) return cmd_dyn(dyn->get_subcommands().front()->get_name(), net_path, param, dot);
    if (disc->parsed())
      return cmd_ts(csv, eps, genes, proxies, me->count() ? std::optional<std::size_t>(max_events) : std::nullopt, out,
                    dot);
    if (match->parsed()) return cmd_match(net_path, param, pattern, path, all_sets);
    if (sweep->parsed()) return cmd_sweep(net_path, spec, range, out, workers, checkpoint, resume);
    if (merge->parsed()) return cmd_merge(out);
    if (mpg->parsed()) return cmd_mpg(net_path, excluded, results);
    if (coexist->parsed()) return cmd_coexist(net_path, excluded, results, relaxed);
    if (sim->parsed()) return cmd_sim(net_path, param, seed, out, witness_out, x0s, t_end, dt, hill_n);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
