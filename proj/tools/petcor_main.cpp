#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "petcor/config.hpp"
#include "petcor/diagnostics.hpp"
#include "petcor/engine.hpp"
#include "petcor/topology.hpp"
#include "petcor/trace_io.hpp"

namespace {

void print_warnings(const petcor::Scenario& sc) {
    for (const std::string& w : sc.warnings) {
        std::cerr << "warning: " << w << "\n";
    }
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool diagnostics,
            bool plots) {
    petcor::LoadedConfig cfg = petcor::load_config(config_path);
    if (diagnostics) cfg.scenario.diagnostics.enabled = true;
    print_warnings(cfg.scenario);

    const petcor::SimTrace trace = petcor::run(cfg.scenario);
    const petcor::TriggerStats stats = petcor::trigger_stats(trace);

    petcor::OutputOptions opts;
    opts.plots = plots;
    const auto written = petcor::emit_outputs(trace, out_dir, opts);

    std::printf("%s: %zu steps, %zu network events / %ld pair samples (ratio %.4f)\n",
                cfg.name.c_str(), trace.rows() - 1,
                static_cast<std::size_t>(stats.total_transmissions), stats.total_samples,
                stats.network_ratio());
    if (stats.sensor_samples > 0) {
        std::printf("sensor events: %ld / %ld samples (ratio %.4f)\n", stats.sensor_transmissions,
                    stats.sensor_samples, stats.sensor_ratio());
    }
    for (const std::string& path : written) {
        std::printf("wrote %s\n", path.c_str());
    }
    return 0;
}

int cmd_bound(const std::string& config_path) {
    const petcor::LoadedConfig cfg = petcor::load_config(config_path);
    const petcor::Scenario& sc = cfg.scenario;
    const petcor::SamplingBound b = petcor::max_sampling_bound(sc.graph, sc.exo.dim());
    const double kappa = sc.observer.kappa();
    const double t_max = sc.graph.max_period();
    const double kappa_t = kappa * t_max;

    std::printf("M1 = %.12g\n", b.m1);
    std::printf("M2 = %.12g\n", b.m2);
    std::printf("M3 = %.12g\n", b.m3);
    std::printf("M  = %.12g\n", b.m);
    std::printf("kappa = %.12g, max sampling period T = %.12g, kappa*T = %.12g\n", kappa, t_max,
                kappa_t);
    if (kappa_t <= b.m) {
        std::printf("verdict: PASS (kappa*T <= M, observer convergence certified)\n");
    } else {
        std::printf("verdict: WARN (kappa*T > M, outside the certified region)\n");
    }
    return 0;
}

int cmd_presets_list() {
    for (const std::string& name : petcor::preset_names()) {
        const petcor::LoadedConfig cfg = petcor::load_preset(name);
        std::printf("%-26s %s\n", name.c_str(), cfg.description.c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Event-triggered cooperative output regulation simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    bool diagnostics = false;
    bool plots = false;

    CLI::App* run = app.add_subcommand("run", "Simulate a scenario and write trace/event files");
    run->add_option("config", config_path, "Scenario file or preset name")->required();
    run->add_option("--out", out_dir, "Output directory (default: out)");
    run->add_flag("--diagnostics", diagnostics, "Record energy monitors in the trace");
    run->add_flag("--plots", plots, "Emit SVG plots next to the CSV files");

    CLI::App* bound = app.add_subcommand("bound", "Print the sampling bound M and the kappa*T check");
    bound->add_option("config", config_path, "Scenario file or preset name")->required();

    CLI::App* presets = app.add_subcommand("presets", "Preset utilities");
    CLI::App* presets_list = presets->add_subcommand("list", "List the built-in scenario presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, diagnostics, plots);
        if (bound->parsed()) return cmd_bound(config_path);
        if (presets->parsed() && presets_list->parsed()) return cmd_presets_list();
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
