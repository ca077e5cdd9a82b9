#include "imscale/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "imscale/baseline.hpp"
#include "imscale/evaluate.hpp"
#include "imscale/io.hpp"
#include "imscale/rng.hpp"
#include "imscale/upscale.hpp"

namespace imscale {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::int64_t ms_since(Clock::time_point start) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

std::string out_path(const RunConfig& cfg, const char* name) {
    return (fs::path(cfg.out_dir) / name).string();
}

void ensure_out_dir(const RunConfig& cfg) {
    if (cfg.out_dir.empty())
        throw std::invalid_argument("output directory not set");
    fs::create_directories(cfg.out_dir);
}

void write_manifest(const json& manifest, const RunConfig& cfg, const char* name) {
    std::ofstream out(out_path(cfg, name));
    if (!out)
        throw std::runtime_error("cannot write manifest");
    out << manifest.dump(2) << '\n';
}

json model_json(const PropagationModel& model) {
    json j;
    j["kind"] = model.kind == PropagationModel::Kind::IC ? "ic" : "wc";
    if (model.kind == PropagationModel::Kind::IC)
        j["p"] = model.p;
    return j;
}

json moea_json(const MoeaParams& p) {
    return json{{"population_size", p.population_size},
                {"generations", p.generations},
                {"elites", p.elites},
                {"crossover_rate", p.crossover_rate},
                {"mutation_rate", p.mutation_rate},
                {"tournament_size", p.tournament_size},
                {"k_max_fraction", p.k_max_fraction},
                {"n_sims", p.n_sims}};
}

json placements_json(const std::vector<BlockPlacement>& placements) {
    json j = json::array();
    for (const BlockPlacement& b : placements)
        j.push_back(json{{"block_r", b.block_r},
                         {"block_c", b.block_c},
                         {"requested", b.requested},
                         {"placed", b.placed}});
    return j;
}

json file_entry(const RunConfig& cfg, const char* name) {
    return json{{"path", name}, {"fnv1a64", file_content_hash(out_path(cfg, name))}};
}

struct DownscaleResult {
    Graph filtered;
    Partition filtered_partition;
    ScaledGraph scaled;
    Partition original_partition;
    std::size_t original_nodes = 0;
    std::size_t original_edges = 0;
    std::int64_t detect_ms = 0;
    std::int64_t downscale_ms = 0;
};

DownscaleResult run_downscale_impl(const RunConfig& cfg) {
    DownscaleResult r;
    Graph original = Graph::load_edge_list_file(cfg.input_path);
    r.original_nodes = original.node_count();
    r.original_edges = original.edge_count();

    const auto detect_start = Clock::now();
    r.original_partition = detect_communities(original, derive_seed(cfg.seed, kSeedLabelDetect));
    r.detect_ms = ms_since(detect_start);

    const auto down_start = Clock::now();
    auto [filtered, filtered_partition] = filter_small_communities(
        original, r.original_partition, static_cast<std::size_t>(cfg.scale));
    r.filtered = std::move(filtered);
    r.filtered_partition = std::move(filtered_partition);
    r.scaled = downscale(r.filtered, r.filtered_partition, cfg.scale,
                         derive_seed(cfg.seed, kSeedLabelDownscale), cfg.sbm_candidates);
    r.downscale_ms = ms_since(down_start);
    return r;
}

void write_downscale_artifacts(const RunConfig& cfg, const DownscaleResult& r) {
    write_edge_list_file(r.filtered, out_path(cfg, kFilteredEdgesFile));
    write_partition_csv_file(r.filtered_partition, r.filtered, out_path(cfg, kFilteredPartitionFile));
    write_edge_list_file(r.scaled.graph, out_path(cfg, kScaledEdgesFile));
    write_partition_csv_file(r.scaled.partition, r.scaled.graph, out_path(cfg, kScaledPartitionFile));
    write_community_map_csv_file(r.scaled.community_map, out_path(cfg, kCommunityMapFile));
}

json downscale_json(const RunConfig& cfg, const DownscaleResult& r) {
    json j;
    j["original"] = json{{"nodes", r.original_nodes},
                         {"edges", r.original_edges},
                         {"communities", r.original_partition.community_count()},
                         {"modularity", r.original_partition.quality}};
    j["filtered"] = json{
        {"nodes", r.filtered.node_count()},
        {"edges", r.filtered.edge_count()},
        {"communities", r.filtered_partition.community_count()},
        {"removed_communities",
         r.original_partition.community_count() - r.filtered_partition.community_count()},
        {"removed_nodes", r.original_nodes - r.filtered.node_count()}};
    j["scaled"] = json{{"nodes", r.scaled.graph.node_count()},
                       {"edges", r.scaled.graph.edge_count()},
                       {"communities", r.scaled.partition.community_count()},
                       {"blocks", placements_json(r.scaled.placements)}};
    (void)cfg;
    return j;
}

struct OptimizeResult {
    NsgaResult nsga;
    std::int64_t optimize_ms = 0;
};

OptimizeResult run_optimize_impl(const RunConfig& cfg, const Graph& g) {
    OptimizeResult r;
    const auto start = Clock::now();
    r.nsga = nsga2_run(g, cfg.model, cfg.moea, derive_seed(cfg.seed, kSeedLabelOptimize));
    r.optimize_ms = ms_since(start);
    return r;
}

json optimize_json(const RunConfig& cfg, const Graph& g, const OptimizeResult& r) {
    json j;
    j["network"] = json{{"nodes", g.node_count()}, {"edges", g.edge_count()}};
    j["model"] = model_json(cfg.model);
    j["moea"] = moea_json(cfg.moea);
    j["k_max"] = r.nsga.k_max;
    j["hv_ref_seed_fraction"] = r.nsga.hv_ref_seed_fraction;
    j["front_size"] = r.nsga.front.size();
    j["attempts"] =
        json{{"smart_init", r.nsga.init_attempts}, {"total", r.nsga.total_attempts}};
    j["archive_hv_trace"] = r.nsga.archive_hv_trace;
    return j;
}

}  // namespace

nlohmann::ordered_json run_downscale_stage(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const DownscaleResult r = run_downscale_impl(cfg);
    write_downscale_artifacts(cfg, r);

    json manifest;
    manifest["tool"] = "imscale";
    manifest["stage"] = "downscale";
    manifest["input"] = cfg.input_path;
    manifest["scale"] = cfg.scale;
    manifest["seeds"] = json{{"master", cfg.seed},
                             {"detect", derive_seed(cfg.seed, kSeedLabelDetect)},
                             {"downscale", derive_seed(cfg.seed, kSeedLabelDownscale)}};
    manifest.update(downscale_json(cfg, r));
    manifest["wall_clock_ms"] =
        json{{"detect", r.detect_ms}, {"downscale", r.downscale_ms}};
    manifest["files"] = json::array({file_entry(cfg, kFilteredEdgesFile),
                                     file_entry(cfg, kFilteredPartitionFile),
                                     file_entry(cfg, kScaledEdgesFile),
                                     file_entry(cfg, kScaledPartitionFile),
                                     file_entry(cfg, kCommunityMapFile)});
    write_manifest(manifest, cfg, "manifest_downscale.json");
    return manifest;
}

nlohmann::ordered_json run_optimize_stage(const RunConfig& cfg, const OptimizeInputs& in) {
    ensure_out_dir(cfg);
    Graph g;
    if (in.partition_path.empty()) {
        g = Graph::load_edge_list_file(in.edges_path);
    } else {
        g = load_graph_with_partition(in.edges_path, in.partition_path).first;
    }
    const OptimizeResult r = run_optimize_impl(cfg, g);
    write_front_csv_file(r.nsga.front, g, out_path(cfg, "front.csv"));

    json manifest;
    manifest["tool"] = "imscale";
    manifest["stage"] = "optimize";
    manifest["input"] = in.edges_path;
    manifest["seeds"] = json{{"master", cfg.seed},
                             {"optimize", derive_seed(cfg.seed, kSeedLabelOptimize)}};
    manifest.update(optimize_json(cfg, g, r));
    manifest["wall_clock_ms"] = json{{"optimize", r.optimize_ms}};
    manifest["files"] = json::array({file_entry(cfg, "front.csv")});
    write_manifest(manifest, cfg, "manifest_optimize.json");
    return manifest;
}

nlohmann::ordered_json run_upscale_stage(const RunConfig& cfg, const UpscaleInputs& in) {
    ensure_out_dir(cfg);
    auto [original, original_partition] =
        load_graph_with_partition(in.original_edges, in.original_partition);
    auto [scaled, scaled_partition] = load_graph_with_partition(in.scaled_edges, in.scaled_partition);
    const std::vector<std::uint32_t> community_map = read_community_map_csv_file(in.community_map);
    const Front scaled_front = read_front_csv_file(in.front, scaled);

    const auto start = Clock::now();
    const UpscaleContext ctx = make_upscale_context(original, original_partition, scaled,
                                                    scaled_partition, community_map, cfg.centrality);
    const int k_max = max_seed_set_size(cfg.moea, original.node_count());
    const double cap = std::max(cfg.moea.k_max_fraction, static_cast<double>(k_max) /
                                                             static_cast<double>(original.node_count()));
    std::uint64_t attempts = 0;
    UpscaleReport report;
    const Front upscaled =
        upscale_front(scaled_front, ctx, cfg.scale, cfg.model, cfg.moea.n_sims,
                      derive_seed(cfg.seed, kSeedLabelUpscale), cap, &attempts, &report);
    const std::int64_t upscale_ms = ms_since(start);
    write_front_csv_file(upscaled, original, out_path(cfg, kUpscaledFrontFile));

    json manifest;
    manifest["tool"] = "imscale";
    manifest["stage"] = "upscale";
    manifest["centrality"] = std::string(centrality_name(cfg.centrality));
    manifest["scale"] = cfg.scale;
    manifest["model"] = model_json(cfg.model);
    manifest["seeds"] = json{{"master", cfg.seed},
                             {"upscale", derive_seed(cfg.seed, kSeedLabelUpscale)}};
    manifest["seed_fraction_cap"] = cap;
    manifest["points_in"] = report.points_in;
    manifest["dropped_over_cap"] = report.dropped_over_cap;
    json shortfalls = json::array();
    for (const UpscaleShortfall& s : report.shortfalls)
        shortfalls.push_back(json{{"scaled_community", s.scaled_community}, {"missing", s.missing}});
    manifest["shortfalls"] = shortfalls;
    manifest["front_size"] = upscaled.size();
    manifest["attempts"] = json{{"reevaluate", attempts}};
    manifest["wall_clock_ms"] = json{{"upscale", upscale_ms}};
    manifest["files"] = json::array({file_entry(cfg, kUpscaledFrontFile)});
    write_manifest(manifest, cfg, "manifest_upscale.json");
    return manifest;
}

nlohmann::ordered_json run_baseline_stage(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    Graph g = Graph::load_edge_list_file(cfg.input_path);
    const int k_max = max_seed_set_size(cfg.moea, g.node_count());

    const auto start = Clock::now();
    const CelfResult r =
        celf(g, cfg.model, k_max, cfg.moea.n_sims, derive_seed(cfg.seed, kSeedLabelBaseline));
    const std::int64_t baseline_ms = ms_since(start);
    const Front front = greedy_curve_to_front(r.curve, g.node_count());
    write_front_csv_file(front, g, out_path(cfg, "front_celf.csv"));

    json manifest;
    manifest["tool"] = "imscale";
    manifest["stage"] = "baseline";
    manifest["input"] = cfg.input_path;
    manifest["model"] = model_json(cfg.model);
    manifest["k_max"] = k_max;
    manifest["n_sims"] = cfg.moea.n_sims;
    manifest["seeds"] = json{{"master", cfg.seed},
                             {"baseline", derive_seed(cfg.seed, kSeedLabelBaseline)}};
    manifest["gain_evaluations"] = r.gain_evaluations;
    manifest["attempts"] = json{{"total", r.total_attempts}};
    manifest["front_size"] = front.size();
    manifest["wall_clock_ms"] = json{{"baseline", baseline_ms}};
    manifest["files"] = json::array({file_entry(cfg, "front_celf.csv")});
    write_manifest(manifest, cfg, "manifest_baseline.json");
    return manifest;
}

nlohmann::ordered_json evaluate_fronts(const std::string& front_a_path,
                                       const std::string& front_b_path,
                                       double ref_seed_fraction) {
    const RefPoint ref{0.0, ref_seed_fraction};
    const auto load = [&ref](const std::string& path) {
        const std::vector<Fitness> points = pareto_filter(read_front_points_file(path));
        return hypervolume_2d(points, ref);
    };
    const double hv_a = load(front_a_path);
    const double hv_b = load(front_b_path);
    json j;
    j["ref"] = json{{"influence", ref.influence}, {"seed_fraction", ref.seed_fraction}};
    j["hv_a"] = hv_a;
    j["hv_b"] = hv_b;
    j["hr"] = hyperarea(hv_a, hv_b);
    return j;
}

nlohmann::ordered_json run_pipeline(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    const auto total_start = Clock::now();

    // Stage 1: downscale.
    const DownscaleResult down = run_downscale_impl(cfg);
    write_downscale_artifacts(cfg, down);

    // Stage 2: optimise on the scaled network.
    const OptimizeResult opt = run_optimize_impl(cfg, down.scaled.graph);
    write_front_csv_file(opt.nsga.front, down.scaled.graph, out_path(cfg, kScaledFrontFile));

    // Stage 3: upscale and re-evaluate on the filtered original network.
    const auto upscale_start = Clock::now();
    const UpscaleContext ctx =
        make_upscale_context(down.filtered, down.filtered_partition, down.scaled.graph,
                             down.scaled.partition, down.scaled.community_map, cfg.centrality);
    const std::size_t n_filtered = down.filtered.node_count();
    const int k_max_original = max_seed_set_size(cfg.moea, n_filtered);
    const double cap = std::max(cfg.moea.k_max_fraction,
                                static_cast<double>(k_max_original) / static_cast<double>(n_filtered));
    std::uint64_t upscale_attempts = 0;
    UpscaleReport report;
    const Front upscaled =
        upscale_front(opt.nsga.front, ctx, cfg.scale, cfg.model, cfg.moea.n_sims,
                      derive_seed(cfg.seed, kSeedLabelUpscale), cap, &upscale_attempts, &report);
    const std::int64_t upscale_ms = ms_since(upscale_start);
    write_front_csv_file(upscaled, down.filtered, out_path(cfg, kUpscaledFrontFile));

    // Final evaluation.
    const RefPoint ref{0.0, cap};
    const double hv_upscaled = hypervolume_2d(
        [&upscaled] {
            std::vector<Fitness> pts;
            pts.reserve(upscaled.size());
            for (const FrontEntry& e : upscaled)
                pts.push_back(e.point);
            return pts;
        }(),
        ref);

    json manifest;
    manifest["tool"] = "imscale";
    manifest["stage"] = "pipeline";
    manifest["config"] = json{{"input", cfg.input_path},
                              {"scale", cfg.scale},
                              {"model", model_json(cfg.model)},
                              {"centrality", std::string(centrality_name(cfg.centrality))},
                              {"moea", moea_json(cfg.moea)},
                              {"sbm_candidates", cfg.sbm_candidates},
                              {"out", cfg.out_dir}};
    manifest["seeds"] = json{{"master", cfg.seed},
                             {"detect", derive_seed(cfg.seed, kSeedLabelDetect)},
                             {"downscale", derive_seed(cfg.seed, kSeedLabelDownscale)},
                             {"optimize", derive_seed(cfg.seed, kSeedLabelOptimize)},
                             {"upscale", derive_seed(cfg.seed, kSeedLabelUpscale)}};
    manifest.update(downscale_json(cfg, down));
    manifest["moea"] = moea_json(cfg.moea);
    manifest["k_max_scaled"] = opt.nsga.k_max;
    manifest["k_max_original"] = k_max_original;
    manifest["hv_ref_seed_fraction"] = cap;
    manifest["fronts"] =
        json{{"scaled_size", opt.nsga.front.size()}, {"upscaled_size", upscaled.size()}};
    manifest["upscale"] = json{{"centrality", std::string(centrality_name(cfg.centrality))},
                               {"points_in", report.points_in},
                               {"dropped_over_cap", report.dropped_over_cap},
                               {"shortfall_count", report.shortfalls.size()}};
    manifest["attempts"] = json{{"smart_init", opt.nsga.init_attempts},
                                {"optimize_total", opt.nsga.total_attempts},
                                {"upscale_reeval", upscale_attempts},
                                {"pipeline_total", opt.nsga.total_attempts + upscale_attempts}};
    manifest["archive_hv_trace"] = opt.nsga.archive_hv_trace;
    manifest["hypervolume"] = json{{"ref_seed_fraction", cap}, {"upscaled", hv_upscaled}};
    if (!cfg.reference_front_path.empty()) {
        const std::vector<Fitness> reference =
            pareto_filter(read_front_points_file(cfg.reference_front_path));
        const double hv_reference = hypervolume_2d(reference, ref);
        manifest["hypervolume"]["reference"] = hv_reference;
        manifest["hypervolume"]["hyperarea"] = hyperarea(hv_upscaled, hv_reference);
    }
    manifest["wall_clock_ms"] = json{{"detect", down.detect_ms},
                                     {"downscale", down.downscale_ms},
                                     {"optimize", opt.optimize_ms},
                                     {"upscale", upscale_ms},
                                     {"total", ms_since(total_start)}};
    manifest["files"] = json::array(
        {file_entry(cfg, kFilteredEdgesFile), file_entry(cfg, kFilteredPartitionFile),
         file_entry(cfg, kScaledEdgesFile), file_entry(cfg, kScaledPartitionFile),
         file_entry(cfg, kCommunityMapFile), file_entry(cfg, kScaledFrontFile),
         file_entry(cfg, kUpscaledFrontFile)});
    write_manifest(manifest, cfg, "manifest.json");
    return manifest;
}

}  // namespace imscale
