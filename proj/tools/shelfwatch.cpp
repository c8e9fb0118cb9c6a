// shelfwatch CLI: synthetic dataset generation, pipeline evaluation, node
// energy estimation and the ingest service.

#include <chrono>
#include <csignal>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "shelfwatch/harness.hpp"
#include "shelfwatch/service.hpp"
#include "shelfwatch/shelfwatch.hpp"

using namespace shelfwatch;

namespace {

int cmd_synth(const std::string& out_dir, const std::string& spec_path, std::uint64_t seed, int count,
              const std::string& perturb) {
    SynthSpec spec = SynthSpec::example();
    if (!spec_path.empty()) load_json_file(spec_path).get_to(spec);

    const std::array<Perturbation, 4> mixed{Perturbation::remove_item, Perturbation::swap_adjacent,
                                            Perturbation::add_foreign, Perturbation::add_extra};
    std::vector<AnnotatedRack> racks;
    for (int i = 0; i < count; ++i) {
        const std::uint64_t rack_seed = seed + static_cast<std::uint64_t>(i);
        const Perturbation p = perturb == "mixed" ? mixed[rack_seed % mixed.size()]
                                                  : perturbation_from_string(perturb);
        racks.push_back(generate_synthetic(rack_seed, spec, p));
    }
    write_dataset(out_dir, racks);
    std::cout << "wrote " << racks.size() << " racks to " << out_dir << "\n";
    return 0;
}

int cmd_run(const std::string& dataset_dir, const std::string& config_path, const std::string& out_path) {
    const auto pipeline = load_config<PipelineConfig>(config_path);
    const auto dataset = load_dataset(dataset_dir);
    const auto summary = evaluate_dataset(dataset, pipeline.search);

    std::cout << format_metric_table("Object detection performance (IoU >= 0.50)",
                                     {{"shelfwatch", summary.detection}})
              << "\n";
    std::cout << format_metric_table("Planogram compliance control performance",
                                     {{"shelfwatch", summary.compliance}})
              << "\n";
    std::cout << "racks: " << summary.racks.size()
              << "  ground-truth statuses reproduced: " << summary.statuses_matched << " ("
              << 100.0 * summary.status_match_rate() << "%)\n";

    if (!out_path.empty()) {
        save_json_file(eval_report_json(summary), out_path);
        std::cout << "report written to " << out_path << "\n";
    }
    return 0;
}

int cmd_power(const std::string& config_path, int simulate_days, int change_period,
              const std::string& ledger_path) {
    const auto config = load_config<PowerConfig>(config_path);

    const double consumption = daily_consumption_mah(config.node);
    const double offset = harvest_offset_mah(config.sources, config.node);
    std::cout << "daily consumption: " << consumption << " mAh\n";
    std::cout << "daily harvest:     " << offset << " mAh\n";
    if (const auto months = battery_life_months(config.node, config.sources))
        std::cout << "battery life:      " << *months << " months\n";
    else
        std::cout << "battery life:      unbounded (harvest covers consumption)\n";

    if (simulate_days > 0) {
        // deterministic feed: the shelf changes every change_period-th wake
        const auto feed = [change_period](std::size_t wake) {
            const bool changed = change_period > 0 && wake > 0 && wake % change_period == 0;
            // alternate between two flat scenes; blur keeps them flat
            const std::uint8_t base = 120;
            const std::uint8_t level =
                changed || (change_period > 0 && (wake / change_period) % 2 == 1) ? 200 : base;
            return GrayFrame::filled(64, 48, level);
        };
        const auto sim = simulate_node(simulate_days, feed, config.node, ChangeParams{}, config.sources);
        std::ostream* out = &std::cout;
        std::ofstream file;
        if (!ledger_path.empty()) {
            file.open(ledger_path);
            out = &file;
        }
        for (const auto& day : sim.days) {
            json line{{"day", day.day},           {"consumed_mah", day.consumed_mah},
                      {"harvested_mah", day.harvested_mah}, {"charge_mah", day.charge_mah},
                      {"wakes", day.wakes},       {"transfers", day.transfers}};
            *out << line.dump() << "\n";
        }
        std::cout << "simulated " << sim.days.size() << " days, " << sim.state.total_transfers
                  << " transfers, " << (sim.depleted ? "battery depleted" : "battery alive") << "\n";
    }
    return 0;
}

std::atomic<bool> keep_running{true};

int cmd_serve(const std::string& config_path, int port, const std::string& storage_root) {
    auto config = load_config<ServiceConfig>(config_path);
    if (port > 0) config.port = port;
    if (!storage_root.empty()) config.storage_root = storage_root;

    ComplianceService service(config);
    const int bound = service.start();
    std::cout << "listening on port " << bound << ", storage at " << config.storage_root << "\n";

    std::signal(SIGINT, [](int) { keep_running = false; });
    std::signal(SIGTERM, [](int) { keep_running = false; });
    while (keep_running) std::this_thread::sleep_for(std::chrono::milliseconds(200));
    service.stop();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"planogram compliance pipeline tools"};
    app.require_subcommand(1);

    // eval: dataset-level commands
    auto* eval = app.add_subcommand("eval", "dataset evaluation and generation");
    eval->require_subcommand(1);

    std::string dataset_dir, config_path, out_path;
    auto* run = eval->add_subcommand("run", "run the pipeline over a dataset and report metrics");
    run->add_option("--dataset", dataset_dir, "dataset directory")->required();
    run->add_option("--config", config_path, "pipeline config file");
    run->add_option("--out", out_path, "write the full JSON report here");

    std::string synth_out, synth_spec, synth_perturb = "none";
    std::uint64_t synth_seed = 1;
    int synth_count = 1;
    auto* synth = eval->add_subcommand("synth", "generate a synthetic annotated dataset");
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--seed", synth_seed, "base seed");
    synth->add_option("--count", synth_count, "number of racks");
    synth->add_option("--spec", synth_spec, "scene spec file (JSON)");
    synth->add_option("--perturb", synth_perturb,
                      "none|remove_item|swap_adjacent|add_foreign|add_extra|mixed");

    std::string power_config, ledger_path;
    int simulate_days = 0, change_period = 0;
    auto* power = eval->add_subcommand("power", "node energy estimate and duty-cycle simulation");
    power->add_option("--config", power_config, "power config file");
    power->add_option("--simulate-days", simulate_days, "run the day-by-day simulator");
    power->add_option("--change-period", change_period, "shelf changes every Nth wake (0 = never)");
    power->add_option("--ledger", ledger_path, "write the per-day ledger (JSONL) here");

    std::string serve_config, storage_root;
    int port = 0;
    auto* serve = app.add_subcommand("serve", "run the shelf-image ingest service");
    serve->add_option("--config", serve_config, "service config file");
    serve->add_option("--port", port, "listen port (overrides config)");
    serve->add_option("--storage", storage_root, "storage root (overrides config)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(dataset_dir, config_path, out_path);
        if (synth->parsed()) return cmd_synth(synth_out, synth_spec, synth_seed, synth_count, synth_perturb);
        if (power->parsed()) return cmd_power(power_config, simulate_days, change_period, ledger_path);
        if (serve->parsed()) return cmd_serve(serve_config, port, storage_root);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
