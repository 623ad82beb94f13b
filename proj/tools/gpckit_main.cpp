#include <CLI11.hpp>

#include <iostream>

#include "gpckit/cli.hpp"

namespace {

std::vector<double> expand_range(double from, double to, double step) {
    std::vector<double> out;
    if (step <= 0.0) return out;
    // Half-step slack keeps the endpoint in despite accumulated rounding.
    const auto count = static_cast<long>(std::floor((to - from) / step + 0.5)) + 1;
    for (long i = 0; i < count; ++i) {
        const double v = from + step * static_cast<double>(i);
        if (v > to + step / 2) break;
        out.push_back(v);
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Predictive-control workbench: closed-loop simulation and polynomial analysis"};
    app.require_subcommand(1);

    gpckit::cli::Options opts;
    std::string dist_name;
    app.add_option("--out", opts.out_dir, "Directory for generated artifacts")->capture_default_str();
    app.add_option("--seed", [&opts](const CLI::results_t& res) {
        opts.seed = static_cast<std::uint64_t>(std::stoull(res[0]));
        return true;
    }, "Override the scenario noise seed");
    app.add_option("--dist", dist_name, "Override the noise distribution (normal|uniform)")
        ->check(CLI::IsMember({"normal", "uniform"}));
    app.add_option("--tolerance", opts.tolerance, "Comparison tolerance for table1")
        ->capture_default_str();
    app.add_flag("--perturb", opts.perturb, "Perturb the table1 model (negative control)");

    std::string scenario_path, param = "lambda", csv_path, svg_path;
    double sweep_from = 0.0, sweep_to = 0.0, sweep_step = 0.0;
    std::vector<double> sweep_values;
    std::vector<std::string> plot_columns;

    auto* c_run = app.add_subcommand("run", "Simulate a scenario and write its CSV trace");
    c_run->add_option("scenario", scenario_path, "Scenario file (.scn)")->required();

    auto* c_analyze = app.add_subcommand("analyze", "Closed-loop polynomial analysis report");
    c_analyze->add_option("scenario", scenario_path, "Scenario file (.scn)")->required();

    app.add_subcommand("table1", "Reproduce the published closed-loop error levels");

    auto* c_sweep = app.add_subcommand("sweep", "Grid of runs/analyses over one parameter");
    c_sweep->add_option("scenario", scenario_path, "Scenario file (.scn)")->required();
    c_sweep->add_option("--param", param, "Swept parameter (lambda|N)")
        ->check(CLI::IsMember({"lambda", "N"}));
    c_sweep->add_option("--from", sweep_from, "Range start");
    c_sweep->add_option("--to", sweep_to, "Range end");
    c_sweep->add_option("--step", sweep_step, "Range step");
    c_sweep->add_option("--values", sweep_values, "Explicit list of values")->delimiter(',');

    auto* c_plot = app.add_subcommand("plot", "Render a CSV trace as an SVG line chart");
    c_plot->add_option("csv", csv_path, "Trace CSV")->required();
    c_plot->add_option("svg", svg_path, "Output SVG path")->required();
    c_plot->add_option("--columns", plot_columns, "Trace columns to draw")->delimiter(',');

    CLI11_PARSE(app, argc, argv);
    if (!dist_name.empty())
        opts.dist = dist_name == "uniform" ? gpckit::NoiseDist::uniform : gpckit::NoiseDist::normal;

    if (c_run->parsed()) return gpckit::cli::cmd_run(scenario_path, opts, std::cout, std::cerr);
    if (c_analyze->parsed())
        return gpckit::cli::cmd_analyze(scenario_path, opts, std::cout, std::cerr);
    if (app.get_subcommand("table1")->parsed())
        return gpckit::cli::cmd_table1(opts, std::cout, std::cerr);
    if (c_sweep->parsed()) {
        std::vector<double> values = sweep_values;
        if (values.empty()) values = expand_range(sweep_from, sweep_to, sweep_step);
        return gpckit::cli::cmd_sweep(scenario_path, param, values, opts, std::cout, std::cerr);
    }
    if (c_plot->parsed())
        return gpckit::cli::cmd_plot(csv_path, svg_path, plot_columns, std::cerr);
    return gpckit::cli::kConfigError;
}
