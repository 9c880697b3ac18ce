#include "cdyn/phenotypes.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

namespace cdyn {

using nlohmann::json;
namespace fs = std::filesystem;

std::string to_string(PhenotypeKind k) {
  switch (k) {
  case PhenotypeKind::wt_cycling: return "wt_cycling";
  case PhenotypeKind::mutant_cycling: return "mutant_cycling";
  case PhenotypeKind::checkpoint_fp: return "checkpoint_fp";
  }
  return "?";
}

namespace {

PhenotypeKind parse_kind(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  if (s == "wt_cycling") return PhenotypeKind::wt_cycling;
  if (s == "mutant_cycling") return PhenotypeKind::mutant_cycling;
  if (s == "checkpoint_fp") return PhenotypeKind::checkpoint_fp;
  throw std::invalid_argument("unknown phenotype kind '" + s + "'");
}

void write_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

std::string padded(std::uint64_t v) {
  std::string s = std::to_string(v);
  return std::string(20 - s.size(), '0') + s;
}

std::string digest(const std::vector<std::uint32_t>& walk) {
  std::string s;
  for (auto d : walk) s += std::to_string(d) + ",";
  return hex64(fnv1a(s));
}

} // namespace

std::uint64_t PhenotypeSpec::hash() const { return fnv1a(source + "\n" + pattern_text); }

PhenotypeSpec parse_phenotype_spec(const std::string& text, const fs::path& base_dir, const RegulatoryNetwork& net) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed phenotype spec: ") + e.what());
  }
  PhenotypeSpec s;
  s.id = j.at("id").get<std::string>();
  s.kind = parse_kind(j.at("kind").get<std::string>());
  s.node = j.value("node", "");
  if (!s.node.empty()) net.index(s.node);
  s.label = parse_restriction_label(j.value("label", "WT"));
  std::string mode = j.value("mode", "restricted");
  if (mode != "restricted" && mode != "relaxed") throw std::invalid_argument("mode must be restricted or relaxed");
  s.restricted = mode == "restricted";
  std::string cycle = j.value("cycle_class", "full");
  if (cycle != "full" && cycle != "any") throw std::invalid_argument("cycle_class must be full or any");
  s.full_cycle_only = cycle == "full";

  if (s.kind != PhenotypeKind::checkpoint_fp) {
    if (!j.contains("pattern")) throw std::invalid_argument("cycling phenotypes need a pattern file");
    fs::path p = j.at("pattern").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    s.pattern_text = read_text_file(p);
    s.pattern = parse_pattern(s.pattern_text);
    for (const auto& g : s.pattern->genes()) net.index(g);
  }
  if (s.kind == PhenotypeKind::mutant_cycling) {
    if (s.node.empty()) throw std::invalid_argument("mutant cycling needs the fixed node");
    if (s.label == RestrictionLabel::wt) throw std::invalid_argument("mutant cycling needs a constant label");
  }
  if (s.kind == PhenotypeKind::checkpoint_fp) {
    if (!j.contains("fixed_points")) throw std::invalid_argument("checkpoint phenotypes need fixed_points");
    for (const auto& tup : j.at("fixed_points")) {
      if (tup.size() != net.size()) throw std::invalid_argument("fixed point tuple length differs from network size");
      std::vector<std::vector<std::size_t>> coords;
      for (std::size_t i = 0; i < net.size(); ++i) {
        const auto& c = tup[i];
        std::size_t radix = node_state_count(net, i);
        std::vector<std::size_t> vals;
        if (c.is_string()) {
          std::string w = c.get<std::string>();
          std::size_t from = w == "not_low" ? 1 : w == "*" ? 0 : SIZE_MAX;
          if (from == SIZE_MAX) throw std::invalid_argument("unknown coordinate shorthand '" + w + "'");
          for (std::size_t v = from; v < radix; ++v) vals.push_back(v);
        } else if (c.is_array()) {
          for (const auto& v : c) vals.push_back(v.get<std::size_t>());
        } else {
          vals.push_back(c.get<std::size_t>());
        }
        for (auto v : vals)
          if (v >= radix) throw std::invalid_argument("coordinate " + std::to_string(v) + " out of range for " + net.name(i));
        coords.push_back(vals);
      }
      s.fixed_points.push_back(coords);
    }
  }
  s.source = j.dump();
  return s;
}

PhenotypeSpec load_phenotype_spec(const fs::path& path, const RegulatoryNetwork& net) {
  return parse_phenotype_spec(read_text_file(path), path.parent_path(), net);
}

PhenotypeEvaluator::PhenotypeEvaluator(const ParameterGraph& pg, const PhenotypeSpec& spec) : pg_(pg), spec_(spec) {
  const auto& net = pg.network();
  if (!spec.node.empty()) {
    node_ = net.index(spec.node);
    if (spec.kind != PhenotypeKind::checkpoint_fp) labels_ = clb2_restriction_sets(pg, *node_);
  }
  if (spec.pattern)
    for (const auto& g : spec.pattern->genes()) pattern_vars_.push_back(net.index(g));
  for (const auto& tup : spec.fixed_points) {
    std::vector<std::size_t> cur(tup.size());
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == tup.size()) {
        fp_set_.push_back(cur);
        if (fp_set_.size() > 1000000) throw ResourceLimitError("fixed point set expands beyond 10^6 tuples");
        return;
      }
      for (auto v : tup[i]) {
        cur[i] = v;
        rec(i + 1);
      }
    };
    rec(0);
  }
  std::sort(fp_set_.begin(), fp_set_.end());
  fp_set_.erase(std::unique(fp_set_.begin(), fp_set_.end()), fp_set_.end());
}

std::optional<SweepRecord> PhenotypeEvaluator::evaluate(std::uint64_t k, bool& permissible) const {
  auto tuple = pg_.index_to_tuple(k);
  permissible = true;
  if (spec_.kind != PhenotypeKind::checkpoint_fp && node_ && spec_.restricted) {
    RestrictionLabel lab = labels_[tuple[*node_]];
    RestrictionLabel want = spec_.kind == PhenotypeKind::wt_cycling ? RestrictionLabel::wt : spec_.label;
    permissible = lab == want;
  }
  if (!permissible) return std::nullopt;

  const auto& net = pg_.network();
  std::vector<FactorParameter> params;
  for (std::size_t i = 0; i < tuple.size(); ++i) params.push_back(pg_.factor(i).at(tuple[i]));
  StateTransitionGraph stg(net, params);
  MorseGraph mg = morse_graph(stg);
  for (std::size_t s = 0; s < mg.sets.size(); ++s) {
    const MorseSet& ms = mg.sets[s];
    if (!ms.stable) continue;
    switch (spec_.kind) {
    case PhenotypeKind::checkpoint_fp: {
      if (ms.kind != MorseKind::fixed_point) break;
      auto c = stg.coords(ms.domains[0]);
      if (std::binary_search(fp_set_.begin(), fp_set_.end(), c))
        return SweepRecord{k, s, annotation(ms, stg, net), digest(ms.domains)};
      break;
    }
    case PhenotypeKind::wt_cycling: {
      if (ms.kind == MorseKind::fixed_point) break;
      if (spec_.full_cycle_only && ms.kind != MorseKind::full_cycle) break;
      auto m = match_cycle(*spec_.pattern, label_events(stg, net, ms));
      if (m.matched) return SweepRecord{k, s, annotation(ms, stg, net), digest(m.witness.walk)};
      break;
    }
    case PhenotypeKind::mutant_cycling: {
      if (ms.kind != MorseKind::partial_cycle) break;
      if (std::find(ms.varying.begin(), ms.varying.end(), *node_) != ms.varying.end()) break;
      bool covers = std::all_of(pattern_vars_.begin(), pattern_vars_.end(), [&](std::size_t v) {
        return std::find(ms.varying.begin(), ms.varying.end(), v) != ms.varying.end();
      });
      if (!covers) break;
      if (stg.coord(ms.domains[0], *node_) != restriction_level(spec_.label, pg_.network().out_degree(*node_))) break;
      auto m = match_cycle(*spec_.pattern, label_events(stg, net, ms));
      if (m.matched) return SweepRecord{k, s, annotation(ms, stg, net), digest(m.witness.walk)};
      break;
    }
    }
  }
  return std::nullopt;
}

SweepResult run_sweep(const ParameterGraph& pg, const PhenotypeSpec& spec, std::uint64_t begin, std::uint64_t end,
                      const SweepOptions& opt) {
  if (begin > end || end > pg.size()) throw std::out_of_range("sweep range outside the parameter graph");
  SweepResult r;
  r.phenotype = spec.id;
  r.kind = spec.kind;
  r.restricted = spec.restricted;
  r.network_fingerprint = hex64(fingerprint(pg.network()));
  r.spec_hash = hex64(spec.hash());
  r.begin = begin;
  r.end = end;
  PhenotypeEvaluator ev(pg, spec);
  std::size_t w = std::max<std::size_t>(1, std::min<std::uint64_t>(opt.workers, std::max<std::uint64_t>(1, end - begin)));
  std::vector<std::vector<SweepRecord>> parts(w);
  std::vector<std::uint64_t> perm(w, 0);
  std::atomic<std::uint64_t> done{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  auto work = [&](std::size_t t) {
    try {
      std::uint64_t a = begin + (end - begin) * t / w, b = begin + (end - begin) * (t + 1) / w;
      for (std::uint64_t k = a; k < b; ++k) {
        bool p = false;
        if (auto rec = ev.evaluate(k, p)) parts[t].push_back(*rec);
        perm[t] += p;
        std::uint64_t d = ++done;
        if (t == 0 && opt.progress && d % 4096 == 0) opt.progress(d, end - begin);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(fail_mu);
      if (!failure) failure = std::current_exception();
    }
  };
  if (w == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t t = 0; t < w; ++t) threads.emplace_back(work, t);
    for (auto& th : threads) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  for (std::size_t t = 0; t < w; ++t) {
    r.records.insert(r.records.end(), parts[t].begin(), parts[t].end());
    r.permissible += perm[t];
  }
  return r;
}

std::string record_line(const SweepResult& r, const SweepRecord& rec) {
  json j = {{"param", rec.param},
            {"phenotype", r.phenotype},
            {"morse_set", rec.morse_set},
            {"annotation", rec.annotation},
            {"witness", rec.witness}};
  return j.dump() + "\n";
}

std::string manifest_text(const SweepResult& r, const std::string& records_file) {
  json j = {{"format_version", kFormatVersion},
            {"phenotype", r.phenotype},
            {"kind", to_string(r.kind)},
            {"mode", r.restricted ? "restricted" : "relaxed"},
            {"network_fingerprint", r.network_fingerprint},
            {"spec_hash", r.spec_hash},
            {"begin", r.begin},
            {"end", r.end},
            {"permissible", r.permissible},
            {"matches", r.records.size()},
            {"records", records_file}};
  return j.dump(2) + "\n";
}

namespace {

struct ShardOutcome {
  std::uint64_t permissible = 0;
  std::uint64_t matches = 0;
  fs::path manifest;
};

ShardOutcome run_shard(const PhenotypeEvaluator& ev, SweepResult head, std::uint64_t a, std::uint64_t b,
                       const fs::path& dir, const SweepOptions& opt, std::atomic<std::uint64_t>& done) {
  std::string base = "shard-" + padded(a) + "-" + padded(b);
  fs::path manifest = dir / (base + ".manifest.json");
  fs::path records = dir / (base + ".jsonl");
  fs::path progress = dir / (base + ".progress.json");
  ShardOutcome out{0, 0, manifest};

  if (opt.resume && fs::exists(manifest)) {
    json m = json::parse(read_text_file(manifest));
    if (m.at("spec_hash") != head.spec_hash || m.at("network_fingerprint") != head.network_fingerprint)
      throw ManifestError("existing shard " + manifest.string() + " belongs to a different sweep");
    out.permissible = m.at("permissible").get<std::uint64_t>();
    out.matches = m.at("matches").get<std::uint64_t>();
    done += b - a;
    return out;
  }

  std::uint64_t start = a;
  if (opt.resume && fs::exists(progress)) {
    json p = json::parse(read_text_file(progress));
    if (p.at("spec_hash") != head.spec_hash || p.at("network_fingerprint") != head.network_fingerprint)
      throw ManifestError("progress file " + progress.string() + " belongs to a different sweep");
    start = p.at("next").get<std::uint64_t>();
    out.permissible = p.at("permissible").get<std::uint64_t>();
    out.matches = p.at("matches").get<std::uint64_t>();
    fs::resize_file(records, p.at("bytes").get<std::uintmax_t>());
    done += start - a;
  } else {
    std::ofstream(records, std::ios::trunc);
  }

  std::ofstream rec(records, std::ios::binary | std::ios::app);
  if (!rec) throw std::runtime_error("cannot write " + records.string());
  for (std::uint64_t k = start; k < b; ++k) {
    bool p = false;
    if (auto r = ev.evaluate(k, p)) {
      rec << record_line(head, *r);
      ++out.matches;
    }
    out.permissible += p;
    ++done;
    if (opt.checkpoint_every && (k + 1 - a) % opt.checkpoint_every == 0 && k + 1 < b) {
      rec.flush();
      json pj = {{"next", k + 1},
                 {"bytes", std::uintmax_t(rec.tellp())},
                 {"permissible", out.permissible},
                 {"matches", out.matches},
                 {"spec_hash", head.spec_hash},
                 {"network_fingerprint", head.network_fingerprint}};
      write_atomic(progress, pj.dump() + "\n");
    }
  }
  rec.close();
  head.begin = a;
  head.end = b;
  head.permissible = out.permissible;
  head.records.resize(out.matches, SweepRecord{});
  write_atomic(manifest, manifest_text(head, records.filename().string()));
  fs::remove(progress);
  return out;
}

} // namespace

RunSummary run_sweep_to_dir(const ParameterGraph& pg, const PhenotypeSpec& spec, std::uint64_t begin,
                            std::uint64_t end, const fs::path& dir, const SweepOptions& opt) {
  if (begin > end || end > pg.size()) throw std::out_of_range("sweep range outside the parameter graph");
  fs::create_directories(dir);
  auto t0 = std::chrono::steady_clock::now();
  SweepResult head;
  head.phenotype = spec.id;
  head.kind = spec.kind;
  head.restricted = spec.restricted;
  head.network_fingerprint = hex64(fingerprint(pg.network()));
  head.spec_hash = hex64(spec.hash());
  PhenotypeEvaluator ev(pg, spec);

  std::size_t w = std::max<std::size_t>(1, std::min<std::uint64_t>(opt.workers, std::max<std::uint64_t>(1, end - begin)));
  std::vector<ShardOutcome> outcomes(w);
  std::atomic<std::uint64_t> done{0};
  std::exception_ptr failure;
  std::mutex fail_mu;
  auto work = [&](std::size_t t) {
    try {
      std::uint64_t a = begin + (end - begin) * t / w, b = begin + (end - begin) * (t + 1) / w;
      outcomes[t] = run_shard(ev, head, a, b, dir, opt, done);
    } catch (...) {
      std::lock_guard<std::mutex> lock(fail_mu);
      if (!failure) failure = std::current_exception();
    }
  };
  std::atomic<std::size_t> finished{0};
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < w; ++t)
    threads.emplace_back([&, t] {
      work(t);
      ++finished;
    });
  if (opt.progress) {
    for (int tick = 1; finished < w; ++tick) {
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
      if (tick % 25 == 0) opt.progress(done.load(), end - begin);
    }
    opt.progress(done.load(), end - begin);
  }
  for (auto& th : threads) th.join();
  if (failure) std::rethrow_exception(failure);

  RunSummary s;
  for (const auto& o : outcomes) {
    s.permissible += o.permissible;
    s.matches += o.matches;
    s.shards.push_back(o.manifest);
  }
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json run = {{"format_version", kFormatVersion},
              {"tool_version", kVersion},
              {"phenotype", spec.id},
              {"network_fingerprint", head.network_fingerprint},
              {"spec_hash", head.spec_hash},
              {"begin", begin},
              {"end", end},
              {"workers", w},
              {"permissible", s.permissible},
              {"matches", s.matches},
              {"seconds", s.seconds}};
  for (const auto& [k, v] : opt.provenance) run[k] = v;
  write_atomic(dir / ("run-" + padded(begin) + "-" + padded(end) + ".json"), run.dump(2) + "\n");
  return s;
}

SweepResult load_result(const fs::path& manifest) {
  json m;
  try {
    m = json::parse(read_text_file(manifest));
  } catch (const json::exception& e) {
    throw ManifestError("malformed manifest " + manifest.string() + ": " + e.what());
  }
  if (m.value("format_version", -1) != kFormatVersion)
    throw ManifestError("manifest " + manifest.string() + " has format version " +
                        std::to_string(m.value("format_version", -1)) + ", expected " + std::to_string(kFormatVersion));
  SweepResult r;
  r.phenotype = m.at("phenotype").get<std::string>();
  r.kind = parse_kind(m.at("kind").get<std::string>());
  r.restricted = m.at("mode").get<std::string>() == "restricted";
  r.network_fingerprint = m.at("network_fingerprint").get<std::string>();
  r.spec_hash = m.at("spec_hash").get<std::string>();
  r.begin = m.at("begin").get<std::uint64_t>();
  r.end = m.at("end").get<std::uint64_t>();
  r.permissible = m.at("permissible").get<std::uint64_t>();
  fs::path records = manifest.parent_path() / m.at("records").get<std::string>();
  std::ifstream in(records);
  if (!in) throw ManifestError("records file " + records.string() + " is missing");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    r.records.push_back({j.at("param").get<std::uint64_t>(), j.at("morse_set").get<std::size_t>(),
                         j.at("annotation").get<std::string>(), j.at("witness").get<std::string>()});
  }
  if (r.records.size() != m.at("matches").get<std::size_t>())
    throw ManifestError("records file " + records.string() + " does not hold the advertised number of records");
  return r;
}

SweepResult merge_shards(const fs::path& dir) {
  std::vector<SweepResult> shards;
  if (!fs::is_directory(dir)) throw ManifestError(dir.string() + " is not a directory");
  std::vector<fs::path> manifests;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::string name = e.path().filename().string();
    if (name.rfind("shard-", 0) == 0 && name.size() > 14 && name.substr(name.size() - 14) == ".manifest.json")
      manifests.push_back(e.path());
  }
  if (manifests.empty()) throw ManifestError("no shard manifests in " + dir.string());
  std::sort(manifests.begin(), manifests.end());
  for (const auto& p : manifests) shards.push_back(load_result(p));
  std::sort(shards.begin(), shards.end(), [](const auto& a, const auto& b) { return a.begin < b.begin; });

  SweepResult m = shards.front();
  m.records.clear();
  m.permissible = 0;
  for (std::size_t k = 0; k < shards.size(); ++k) {
    const auto& s = shards[k];
    if (s.network_fingerprint != m.network_fingerprint)
      throw ManifestError("shard " + std::to_string(s.begin) + " was computed on a different network");
    if (s.spec_hash != m.spec_hash || s.phenotype != m.phenotype)
      throw ManifestError("shard " + std::to_string(s.begin) + " was computed with a different phenotype spec");
    if (k) {
      const auto& prev = shards[k - 1];
      if (s.begin < prev.end)
        throw ManifestError("shards overlap on [" + std::to_string(s.begin) + ", " + std::to_string(prev.end) + ")");
      if (s.begin > prev.end)
        throw ManifestError("coverage gap [" + std::to_string(prev.end) + ", " + std::to_string(s.begin) + ")");
    }
    m.permissible += s.permissible;
    m.records.insert(m.records.end(), s.records.begin(), s.records.end());
  }
  m.end = shards.back().end;
  std::sort(m.records.begin(), m.records.end(), [](const auto& a, const auto& b) { return a.param < b.param; });
  std::string body;
  for (const auto& r : m.records) body += record_line(m, r);
  write_atomic(dir / "merged.jsonl", body);
  write_atomic(dir / "merged.manifest.json", manifest_text(m, "merged.jsonl"));
  return m;
}

std::vector<std::uint64_t> mpg_set(const ParameterGraph& pg, const SweepResult& r, std::size_t excluded) {
  if (r.network_fingerprint != hex64(fingerprint(pg.network())))
    throw ManifestError("result " + r.phenotype + " was computed on a different network");
  std::vector<std::uint64_t> out;
  out.reserve(r.records.size());
  for (const auto& rec : r.records) out.push_back(pg.remainder_of(rec.param, excluded).index);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::vector<std::uint64_t> intersect(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  std::vector<std::uint64_t> r;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

} // namespace

MpgSummary mpg_intersect(const std::vector<SweepResult>& results, const ParameterGraph& pg, std::size_t excluded) {
  if (results.empty()) throw std::invalid_argument("no results to intersect");
  MpgSummary s;
  s.remainder_size = pg.remainder_size(excluded);
  std::vector<std::vector<std::uint64_t>> sets;
  std::size_t ref = 0;
  for (std::size_t k = 0; k < results.size(); ++k) {
    sets.push_back(mpg_set(pg, results[k], excluded));
    s.phenotypes.push_back(results[k].phenotype);
    s.sizes.push_back(sets.back().size());
  }
  for (std::size_t k = results.size(); k-- > 0;)
    if (results[k].kind == PhenotypeKind::wt_cycling) ref = k;
  s.reference = results[ref].phenotype;
  std::vector<std::uint64_t> all = sets[0];
  for (std::size_t k = 0; k < sets.size(); ++k) {
    auto both = intersect(sets[k], sets[ref]);
    s.with_reference.push_back(both.size());
    s.percent_of_reference.push_back(sets[ref].empty() ? 0.0 : 100.0 * double(both.size()) / double(sets[ref].size()));
    if (k) all = intersect(all, sets[k]);
  }
  s.all = all.size();
  return s;
}

Coexistence coexistence_query(const std::vector<SweepResult>& results, const ParameterGraph& pg, std::size_t excluded) {
  if (results.empty() || results.size() > 20) throw std::invalid_argument("coexistence needs 1 to 20 results");
  Coexistence c;
  std::unordered_map<std::uint64_t, std::uint32_t> member;
  for (std::size_t k = 0; k < results.size(); ++k) {
    c.phenotypes.push_back(results[k].phenotype);
    for (auto r : mpg_set(pg, results[k], excluded)) member[r] |= std::uint32_t(1) << k;
  }
  std::map<std::uint32_t, std::uint64_t> exact;
  for (auto [r, m] : member) ++exact[m];
  std::uint32_t full = (std::uint32_t(1) << results.size()) - 1;
  for (std::uint32_t s = 1; s <= full; ++s) {
    std::uint64_t n = 0;
    for (auto [m, cnt] : exact)
      if ((m & s) == s) n += cnt;
    c.subsets.emplace_back(s, n);
  }
  return c;
}

} // namespace cdyn
