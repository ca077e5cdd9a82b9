#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "imscale/cascade.hpp"
#include "imscale/centrality.hpp"
#include "imscale/community.hpp"
#include "imscale/downscale.hpp"
#include "imscale/moea.hpp"

namespace imscale {

// Configuration shared by the pipeline and the stage subcommands. The master
// seed fans out to per-stage seeds through labelled derivation, so a stage
// run standalone with the same master seed reproduces its pipeline output
// exactly.
struct RunConfig {
    std::string input_path;
    int scale = 2;
    PropagationModel model = PropagationModel::ic(0.05);
    CentralityKind centrality = CentralityKind::PageRank;
    MoeaParams moea;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string reference_front_path;  // optional, for the final hyperarea
    int sbm_candidates = kDefaultDegreeSampleCandidates;
};

// Stage seed labels (derive_seed(master, label)).
inline constexpr const char* kSeedLabelDetect = "detect";
inline constexpr const char* kSeedLabelDownscale = "downscale";
inline constexpr const char* kSeedLabelOptimize = "optimize";
inline constexpr const char* kSeedLabelUpscale = "upscale";
inline constexpr const char* kSeedLabelBaseline = "baseline";

// Output file names inside an out directory.
inline constexpr const char* kFilteredEdgesFile = "filtered_edges.txt";
inline constexpr const char* kFilteredPartitionFile = "filtered_partition.csv";
inline constexpr const char* kScaledEdgesFile = "scaled_edges.txt";
inline constexpr const char* kScaledPartitionFile = "scaled_partition.csv";
inline constexpr const char* kCommunityMapFile = "community_map.csv";
inline constexpr const char* kScaledFrontFile = "front_scaled.csv";
inline constexpr const char* kUpscaledFrontFile = "front_upscaled.csv";

// `pipeline`: load -> detect -> filter -> downscale -> optimize on the
// scaled graph -> upscale -> re-evaluate (-> hyperarea against the reference
// front when given). Writes all intermediate artifacts plus manifest.json in
// out_dir and returns the manifest.
nlohmann::ordered_json run_pipeline(const RunConfig& cfg);

// Stage entry points behind the CLI subcommands. Each writes its artifacts
// plus a manifest into cfg.out_dir and returns the manifest.
nlohmann::ordered_json run_downscale_stage(const RunConfig& cfg);

struct OptimizeInputs {
    std::string edges_path;
    std::string partition_path;  // optional: node universe for isolated nodes
};
nlohmann::ordered_json run_optimize_stage(const RunConfig& cfg, const OptimizeInputs& in);

struct UpscaleInputs {
    std::string original_edges;
    std::string original_partition;
    std::string scaled_edges;
    std::string scaled_partition;
    std::string community_map;
    std::string front;
};
nlohmann::ordered_json run_upscale_stage(const RunConfig& cfg, const UpscaleInputs& in);

nlohmann::ordered_json run_baseline_stage(const RunConfig& cfg);

nlohmann::ordered_json evaluate_fronts(const std::string& front_a_path,
                                       const std::string& front_b_path, double ref_seed_fraction);

}  // namespace imscale
