#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gpckit/closedloop.hpp"
#include "gpckit/scenario.hpp"

namespace gpckit::cli {

/// Exit codes are a stable contract:
/// 0 ok, 1 config error, 2 diverged run, 3 acceptance mismatch.
inline constexpr int kOk = 0;
inline constexpr int kConfigError = 1;
inline constexpr int kDiverged = 2;
inline constexpr int kMismatch = 3;

struct Options {
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<NoiseDist> dist;
    double tolerance = 1e-9;
    bool perturb = false;
};

/// Applies the --seed / --dist overrides to a parsed scenario.
void apply_overrides(Scenario& sc, const Options& opts);

int cmd_run(const std::string& scenario_path, const Options& opts, std::ostream& out,
            std::ostream& err);
int cmd_analyze(const std::string& scenario_path, const Options& opts, std::ostream& out,
                std::ostream& err);
int cmd_table1(const Options& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::string& scenario_path, const std::string& param,
              const std::vector<double>& values, const Options& opts, std::ostream& out,
              std::ostream& err);
int cmd_plot(const std::string& csv_path, const std::string& svg_path,
             const std::vector<std::string>& columns, std::ostream& err);

/// Trace I/O in the interchange format (header `k,y_ref,y,u,du,chi,e`,
/// 15 significant digits).
void write_trace_csv(const std::string& path, const SimRecord& rec);

struct Trace {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
Trace read_trace_csv(const std::string& path);

/// Run + analysis of a fully specified scenario (shared by run/analyze/sweep).
SimRecord run_scenario(const Scenario& sc);
LoopOperators analyze_scenario(const Scenario& sc);

void write_report(std::ostream& os, const Scenario& sc, const LoopOperators& ops);

}  // namespace gpckit::cli
