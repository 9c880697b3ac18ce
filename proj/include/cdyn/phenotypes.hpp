#pragma once

#include "cdyn/dynamics.hpp"
#include "cdyn/paramgraph.hpp"
#include "cdyn/patternmatch.hpp"
#include "cdyn/timeseries.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cdyn {

inline constexpr const char* kVersion = "0.3.0";
inline constexpr int kFormatVersion = 1;

class ManifestError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

enum class PhenotypeKind : std::uint8_t { wt_cycling, mutant_cycling, checkpoint_fp };
std::string to_string(PhenotypeKind k);

struct PhenotypeSpec {
  std::string id;
  PhenotypeKind kind = PhenotypeKind::wt_cycling;
  std::optional<PatternDiagram> pattern;
  std::string pattern_text;  // part of the spec hash
  std::string node;          // node whose factor parameter is restricted
  RestrictionLabel label = RestrictionLabel::wt;
  bool restricted = true;
  bool full_cycle_only = true;  // wild-type cycling inside FC sets only, or any stable cycle
  // per coordinate: allowed values; "not_low" and "*" are expanded against the network
  std::vector<std::vector<std::vector<std::size_t>>> fixed_points;
  std::string source;  // canonical JSON text of the spec, part of the hash

  std::uint64_t hash() const;
};

// JSON spec; a relative "pattern" path is resolved against base_dir.
PhenotypeSpec parse_phenotype_spec(const std::string& text, const std::filesystem::path& base_dir,
                                   const RegulatoryNetwork& net);
PhenotypeSpec load_phenotype_spec(const std::filesystem::path& path, const RegulatoryNetwork& net);

struct SweepRecord {
  std::uint64_t param;
  std::size_t morse_set;
  std::string annotation;
  std::string witness;  // digest of the matching walk or fixed point

  bool operator==(const SweepRecord&) const = default;
};

struct SweepResult {
  std::string phenotype;
  PhenotypeKind kind = PhenotypeKind::wt_cycling;
  bool restricted = true;
  std::string network_fingerprint;
  std::string spec_hash;
  std::uint64_t begin = 0;
  std::uint64_t end = 0;
  std::uint64_t permissible = 0;
  std::vector<SweepRecord> records;
};

// Evaluates one parameter. Returns nullopt when it is not permissible or shows no match;
// `permissible` reports which.
class PhenotypeEvaluator {
public:
  PhenotypeEvaluator(const ParameterGraph& pg, const PhenotypeSpec& spec);
  std::optional<SweepRecord> evaluate(std::uint64_t k, bool& permissible) const;

private:
  const ParameterGraph& pg_;
  const PhenotypeSpec& spec_;
  std::optional<std::size_t> node_;
  std::vector<RestrictionLabel> labels_;
  std::vector<std::size_t> pattern_vars_;
  std::vector<std::vector<std::size_t>> fp_set_;  // expanded fixed point tuples, sorted
};

struct SweepOptions {
  std::size_t workers = 1;
  std::uint64_t checkpoint_every = 0;  // 0 disables progress files
  bool resume = false;
  std::function<void(std::uint64_t done, std::uint64_t total)> progress;
  // extra string fields copied into the run manifest (subcommand, input files and their hashes)
  std::map<std::string, std::string> provenance;
};

// In-memory sweep over [begin, end).
SweepResult run_sweep(const ParameterGraph& pg, const PhenotypeSpec& spec, std::uint64_t begin, std::uint64_t end,
                      const SweepOptions& opt = {});

// Sweep writing one shard per worker into dir (records + manifest), resumable through progress files.
struct RunSummary {
  std::uint64_t permissible = 0;
  std::uint64_t matches = 0;
  double seconds = 0;
  std::vector<std::filesystem::path> shards;
};
RunSummary run_sweep_to_dir(const ParameterGraph& pg, const PhenotypeSpec& spec, std::uint64_t begin,
                            std::uint64_t end, const std::filesystem::path& dir, const SweepOptions& opt = {});

std::string record_line(const SweepResult& r, const SweepRecord& rec);
std::string manifest_text(const SweepResult& r, const std::string& records_file);

// Merges every shard manifest in dir into merged.jsonl and merged.manifest.json. Throws
// ManifestError on fingerprint, spec or format mismatch and on gaps or overlaps.
SweepResult merge_shards(const std::filesystem::path& dir);
// Reads a manifest and the records file it names.
SweepResult load_result(const std::filesystem::path& manifest);

struct MpgSummary {
  std::uint64_t remainder_size = 0;
  std::vector<std::string> phenotypes;
  std::vector<std::uint64_t> sizes;
  std::vector<std::uint64_t> with_reference;  // |MPG_p and MPG_ref|
  std::vector<double> percent_of_reference;   // of |MPG_ref|
  std::uint64_t all = 0;                      // intersection of every phenotype
  std::string reference;
};

// Sorted remainder indices of the matched parameters once `excluded` is projected away.
std::vector<std::uint64_t> mpg_set(const ParameterGraph& pg, const SweepResult& r, std::size_t excluded);
// The reference is the first wild-type cycling result, else the first result.
MpgSummary mpg_intersect(const std::vector<SweepResult>& results, const ParameterGraph& pg, std::size_t excluded);

struct Coexistence {
  std::vector<std::string> phenotypes;
  std::vector<std::pair<std::uint32_t, std::uint64_t>> subsets;  // bit mask over phenotypes -> |intersection|
};
Coexistence coexistence_query(const std::vector<SweepResult>& results, const ParameterGraph& pg, std::size_t excluded);

} // namespace cdyn
