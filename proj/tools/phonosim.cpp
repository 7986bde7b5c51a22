/*
 * Copyright 2026 The phonosim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdint>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "phonosim/cli.hpp"
#include "phonosim/version.hpp"

int main(int argc, char** argv) {
    CLI::App app{"phonosim: stochastic evolution of phoneme frequency distributions"};
    app.set_version_flag("--version", std::string(phonosim::kToolName) + " " +
                                          std::string(phonosim::kToolVersion));
    app.require_subcommand(1);

    // --- simulate -----------------------------------------------------------
    phonosim::SimulateOptions sim;
    std::string sim_config;
    std::string sim_preset;
    std::uint64_t sim_seed = 0;
    auto* simulate = app.add_subcommand(
        "simulate", "Run an ensemble of language trajectories and write CSV outputs");
    auto* config_opt =
        simulate->add_option("--config", sim_config, "Path to a key=value configuration file");
    auto* preset_opt =
        simulate->add_option("--preset", sim_preset, "Built-in configuration: sim1, sim2 or sim3");
    auto* seed_opt = simulate->add_option(
        "--seed", sim_seed, "Master seed override (defaults to the configured seed)");
    simulate->add_option("--out", sim.out_dir, "Output directory (created if missing)");
    config_opt->excludes(preset_opt);

    // --- analyze ------------------------------------------------------------
    phonosim::AnalyzeOptions ana;
    auto* analyze = app.add_subcommand(
        "analyze", "Compute rank-frequency, entropy and correlation outputs for a run");
    analyze->add_option("input", ana.input_dir, "Directory holding final_distributions.csv")
        ->required();
    analyze->add_option("--out", ana.out_dir, "Output directory (created if missing)");

    // --- ingest -------------------------------------------------------------
    phonosim::IngestOptions ing;
    auto* ingest = app.add_subcommand(
        "ingest", "Convert empirical phoneme counts into the distribution CSV schema");
    ingest->add_option("input", ing.input_file, "Input counts file")->required();
    ingest
        ->add_option("--format", ing.format,
                     "Input format: freq-csv (language,phoneme,count) or wordlist-tsv")
        ->check(CLI::IsMember({"freq-csv", "wordlist-tsv"}));
    ingest->add_option("--out", ing.out_dir, "Output directory (created if missing)");

    // --- compare ------------------------------------------------------------
    phonosim::CompareOptions cmp;
    std::string cmp_out;
    auto* compare = app.add_subcommand(
        "compare", "Compare two analysis directories metric by metric");
    compare->add_option("simulated", cmp.left_dir, "Analysis directory for the simulated run")
        ->required();
    compare->add_option("empirical", cmp.right_dir, "Analysis directory for the empirical data")
        ->required();
    auto* cmp_out_opt =
        compare->add_option("--out", cmp_out, "Optional directory for comparison.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Normalize CLI11's exit codes: 0 for --help/--version, 1 for any
        // usage error.
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (simulate->parsed()) {
        if (config_opt->count() > 0) sim.config_path = sim_config;
        if (preset_opt->count() > 0) sim.preset = sim_preset;
        if (seed_opt->count() > 0) sim.seed = sim_seed;
        return phonosim::cmd_simulate(sim);
    }
    if (analyze->parsed()) return phonosim::cmd_analyze(ana);
    if (ingest->parsed()) return phonosim::cmd_ingest(ing);
    if (compare->parsed()) {
        if (cmp_out_opt->count() > 0) cmp.out_dir = cmp_out;
        return phonosim::cmd_compare(cmp);
    }
    return 1;
}
