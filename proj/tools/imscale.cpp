// imscale: multi-objective influence maximisation via network downscaling.
//
// Subcommands cover the full pipeline and its individual stages; every run
// writes machine-readable artifacts (edge lists, partition/front CSVs, JSON
// manifests) into --out. Runs are reproducible from (--seed, config) for any
// --threads value.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "imscale/parallel.hpp"
#include "imscale/pipeline.hpp"

namespace {

using imscale::PropagationModel;
using imscale::RunConfig;

struct ModelFlags {
    std::string kind = "ic";
    double p = 0.05;
};

void add_model_flags(CLI::App* cmd, ModelFlags& flags) {
    cmd->add_option("--model", flags.kind, "Propagation model: ic or wc")
        ->check(CLI::IsMember({"ic", "wc"}))
        ->capture_default_str();
    cmd->add_option("--p", flags.p, "IC activation probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
}

PropagationModel resolve_model(const ModelFlags& flags) {
    return flags.kind == "wc" ? PropagationModel::wc() : PropagationModel::ic(flags.p);
}

void add_moea_flags(CLI::App* cmd, imscale::MoeaParams& moea) {
    cmd->add_option("--generations", moea.generations, "NSGA-II generations")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--population", moea.population_size, "NSGA-II population size")
        ->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    cmd->add_option("--sims", moea.n_sims, "Monte-Carlo simulations per evaluation")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--kmax-fraction", moea.k_max_fraction,
                    "Seed budget as a fraction of the network size")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
}

void add_common_flags(CLI::App* cmd, RunConfig& cfg, int& threads) {
    cmd->add_option("--seed", cfg.seed, "Master RNG seed")->capture_default_str();
    cmd->add_option("--threads", threads, "Worker thread bound (results are identical)")
        ->check(CLI::PositiveNumber);
    cmd->set_config("--config", "", "Flat key = value config file; command-line flags win");
}

int threads_default() { return 0; }  // 0 = library default (hardware concurrency)

void apply_threads(int threads) {
    if (threads > 0)
        imscale::parallel::set_thread_budget(threads);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-objective influence maximisation with network downscaling"};
    app.require_subcommand(1);

    RunConfig cfg;
    ModelFlags model_flags;
    std::string centrality = "pagerank";
    int threads = threads_default();

    // pipeline
    auto* pipeline = app.add_subcommand(
        "pipeline", "Downscale, optimise on the scaled network, upscale, evaluate");
    pipeline->add_option("--input", cfg.input_path, "Edge-list file")
        ->required()
        ->check(CLI::ExistingFile);
    pipeline->add_option("--scale", cfg.scale, "Scaling factor s")
        ->check(CLI::IsMember({1, 2, 4, 8, 16, 32}))
        ->capture_default_str();
    pipeline->add_option("--centrality", centrality, "Upscaling centrality")
        ->check(CLI::IsMember({"degree", "eigenvector", "pagerank", "katz", "closeness",
                               "betweenness", "coreness"}))
        ->capture_default_str();
    pipeline->add_option("--out", cfg.out_dir, "Output directory")->required();
    pipeline->add_option("--reference-front", cfg.reference_front_path,
                         "Front CSV to compare against (hyperarea)")
        ->check(CLI::ExistingFile);
    pipeline->add_option("--candidates", cfg.sbm_candidates, "Degree-sample candidates")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_model_flags(pipeline, model_flags);
    add_moea_flags(pipeline, cfg.moea);
    add_common_flags(pipeline, cfg, threads);

    // downscale
    auto* downscale = app.add_subcommand("downscale", "Detect communities and synthesise the scaled network");
    downscale->add_option("--input", cfg.input_path, "Edge-list file")
        ->required()
        ->check(CLI::ExistingFile);
    downscale->add_option("--scale", cfg.scale, "Scaling factor s")
        ->check(CLI::IsMember({1, 2, 4, 8, 16, 32}))
        ->capture_default_str();
    downscale->add_option("--candidates", cfg.sbm_candidates, "Degree-sample candidates")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    downscale->add_option("--out", cfg.out_dir, "Output directory")->required();
    add_common_flags(downscale, cfg, threads);

    // optimize
    imscale::OptimizeInputs optimize_in;
    auto* optimize = app.add_subcommand("optimize", "Run NSGA-II on a network");
    optimize->add_option("--input", optimize_in.edges_path, "Edge-list file")
        ->required()
        ->check(CLI::ExistingFile);
    optimize->add_option("--partition", optimize_in.partition_path,
                         "Partition CSV defining the node universe (keeps isolated nodes)")
        ->check(CLI::ExistingFile);
    optimize->add_option("--out", cfg.out_dir, "Output directory")->required();
    add_model_flags(optimize, model_flags);
    add_moea_flags(optimize, cfg.moea);
    add_common_flags(optimize, cfg, threads);

    // upscale
    imscale::UpscaleInputs upscale_in;
    auto* upscale = app.add_subcommand("upscale", "Map a scaled front back to the original network");
    upscale->add_option("--original-edges", upscale_in.original_edges)->required()->check(CLI::ExistingFile);
    upscale->add_option("--original-partition", upscale_in.original_partition)
        ->required()
        ->check(CLI::ExistingFile);
    upscale->add_option("--scaled-edges", upscale_in.scaled_edges)->required()->check(CLI::ExistingFile);
    upscale->add_option("--scaled-partition", upscale_in.scaled_partition)
        ->required()
        ->check(CLI::ExistingFile);
    upscale->add_option("--community-map", upscale_in.community_map)
        ->required()
        ->check(CLI::ExistingFile);
    upscale->add_option("--front", upscale_in.front, "Front CSV from the scaled network")
        ->required()
        ->check(CLI::ExistingFile);
    upscale->add_option("--scale", cfg.scale, "Scaling factor s")
        ->check(CLI::IsMember({1, 2, 4, 8, 16, 32}))
        ->capture_default_str();
    upscale->add_option("--centrality", centrality, "Upscaling centrality")
        ->check(CLI::IsMember({"degree", "eigenvector", "pagerank", "katz", "closeness",
                               "betweenness", "coreness"}))
        ->capture_default_str();
    upscale->add_option("--out", cfg.out_dir, "Output directory")->required();
    add_model_flags(upscale, model_flags);
    add_moea_flags(upscale, cfg.moea);
    add_common_flags(upscale, cfg, threads);

    // baseline
    auto* baseline = app.add_subcommand("baseline", "CELF lazy-greedy baseline");
    baseline->add_option("--input", cfg.input_path, "Edge-list file")
        ->required()
        ->check(CLI::ExistingFile);
    baseline->add_option("--out", cfg.out_dir, "Output directory")->required();
    add_model_flags(baseline, model_flags);
    add_moea_flags(baseline, cfg.moea);
    add_common_flags(baseline, cfg, threads);

    // evaluate
    std::string front_a, front_b;
    double ref_seed_fraction = 0.025;
    auto* evaluate = app.add_subcommand("evaluate", "Hypervolumes and hyperarea of two fronts");
    evaluate->add_option("--front-a", front_a, "Test front CSV")->required()->check(CLI::ExistingFile);
    evaluate->add_option("--front-b", front_b, "Reference front CSV")
        ->required()
        ->check(CLI::ExistingFile);
    evaluate->add_option("--ref", ref_seed_fraction, "Reference-point seed fraction")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        apply_threads(threads);
        cfg.model = resolve_model(model_flags);
        cfg.centrality = imscale::centrality_from_name(centrality);

        nlohmann::ordered_json manifest;
        if (pipeline->parsed()) {
            manifest = imscale::run_pipeline(cfg);
            std::cerr << "pipeline done: " << cfg.out_dir << "/manifest.json\n";
        } else if (downscale->parsed()) {
            manifest = imscale::run_downscale_stage(cfg);
            std::cerr << "downscale done: " << cfg.out_dir << "\n";
        } else if (optimize->parsed()) {
            manifest = imscale::run_optimize_stage(cfg, optimize_in);
            std::cerr << "optimize done: " << cfg.out_dir << "/front.csv\n";
        } else if (upscale->parsed()) {
            manifest = imscale::run_upscale_stage(cfg, upscale_in);
            std::cerr << "upscale done: " << cfg.out_dir << "\n";
        } else if (baseline->parsed()) {
            manifest = imscale::run_baseline_stage(cfg);
            std::cerr << "baseline done: " << cfg.out_dir << "/front_celf.csv\n";
        } else if (evaluate->parsed()) {
            std::cout << imscale::evaluate_fronts(front_a, front_b, ref_seed_fraction).dump(2)
                      << std::endl;
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
