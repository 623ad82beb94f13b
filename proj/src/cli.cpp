#include "gpckit/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "gpckit/svgplot.hpp"

namespace fs = std::filesystem;

namespace gpckit::cli {

namespace {

std::string num15(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::string num10(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.10f", v);
    return buf;
}

fs::path resolve_out(const Options& opts, const std::string& configured, const fs::path& fallback) {
    fs::path p = configured.empty() ? fallback : fs::path(configured);
    if (p.is_relative()) p = fs::path(opts.out_dir) / p;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
}

std::string stem_of(const std::string& scenario_path) {
    return fs::path(scenario_path).stem().string();
}

void describe_poly(std::ostream& os, const char* label, const LaurentPoly& p) {
    os << label << ": " << p.str() << "\n";
    if (p.is_zero()) return;
    os << "  coefficients (exponent of z^-1: value):";
    for (int e = p.lo_exp(); e <= p.hi_exp(); ++e) os << " " << e << ":" << num15(p.coeff(e));
    os << "\n";
}

}  // namespace

void apply_overrides(Scenario& sc, const Options& opts) {
    auto touch = [&opts](SignalGen& g) {
        if (g.kind != SignalGen::Kind::noise) return;
        if (opts.seed) g.seed = *opts.seed;
        if (opts.dist) g.dist = *opts.dist;
    };
    if (opts.seed) sc.seed = *opts.seed;
    touch(sc.reference);
    touch(sc.disturbance);
}

SimRecord run_scenario(const Scenario& sc) {
    return run(sc.model, sc.controller, sc.reference, sc.disturbance, sc.steps);
}

LoopOperators analyze_scenario(const Scenario& sc) {
    const StateSpace ss = realize(sc.model);
    const PredictionSet ps = build_prediction(ss, sc.controller.horizon);
    const GainSet gains = build_gains(ps, sc.controller);
    return loop_operators(sc.model, ps, gains, sc.controller);
}

void write_trace_csv(const std::string& path, const SimRecord& rec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << "k,y_ref,y,u,du,chi,e\n";
    for (int i = 0; i < rec.horizon; ++i) {
        const auto j = static_cast<std::size_t>(i);
        out << (i + 1) << ',' << num15(rec.y_ref[j]) << ',' << num15(rec.y[j]) << ','
            << num15(rec.u[j]) << ',' << num15(rec.du[j]) << ',' << num15(rec.chi[j]) << ','
            << num15(rec.e[j]) << "\n";
    }
}

Trace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open");
    Trace tr;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    {
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) tr.columns.push_back(col);
    }
    if (tr.columns.empty()) throw std::runtime_error(path + ": missing header");
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": bad number '" + cell + "'");
            }
        }
        if (row.size() != tr.columns.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": wrong column count");
        tr.rows.push_back(std::move(row));
    }
    return tr;
}

int cmd_run(const std::string& scenario_path, const Options& opts, std::ostream& out,
            std::ostream& err) {
    Scenario sc;
    try {
        sc = load_scenario(scenario_path);
        apply_overrides(sc, opts);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kConfigError;
    }

    SimRecord rec;
    try {
        rec = run_scenario(sc);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kConfigError;
    }

    const fs::path csv =
        resolve_out(opts, sc.outputs.csv, stem_of(scenario_path) + "_trace.csv");
    write_trace_csv(csv.string(), rec);
    out << "trace: " << csv.string() << "\n";

    if (rec.diverged) {
        err << "diverged at k=" << rec.diverged_at << " (|y| above 1e12)\n";
        return kDiverged;
    }

    const int tail_start = rec.horizon - std::max(1, rec.horizon / 4);
    double max_tail = 0.0;
    for (int i = tail_start; i < rec.horizon; ++i)
        max_tail = std::max(max_tail, std::abs(rec.e[static_cast<std::size_t>(i)]));
    out << "final e(" << rec.horizon << ") = " << num15(rec.e.back()) << "\n";
    out << "max |e| over k in [" << tail_start + 1 << ", " << rec.horizon
        << "] = " << num15(max_tail) << "\n";
    return kOk;
}

void write_report(std::ostream& os, const Scenario& sc, const LoopOperators& ops) {
    os << "closed-loop analysis: " << sc.name << "\n";
    os << "model: na=" << sc.model.na() << " nb=" << sc.model.nb() << " delay=" << sc.model.delay()
       << "\n";
    os << "controller: variant=" << to_string(sc.controller.variant)
       << " N=" << sc.controller.horizon << "\n\n";

    describe_poly(os, "characteristic polynomial", ops.charpoly);
    const StabilityReport st = stability(ops);
    os << "roots (z-plane):\n";
    for (const auto& r : st.roots)
        os << "  re=" << num15(r.real()) << " im=" << num15(r.imag())
           << " modulus=" << num15(std::abs(r)) << "\n";
    os << "verdict: " << to_string(st.verdict) << "\n\n";

    if (ops.variant == Variant::igmvc && ops.has_mv_form) {
        describe_poly(os, "minimum-variance characteristic polynomial", ops.charpoly_mv);
        const StabilityReport st1 = stability(ops, CharPoly::minimum_variance);
        os << "minimum-variance verdict: " << to_string(st1.verdict) << "\n\n";
    }

    os << "steady-state errors:\n";
    const int n_ref = sc.reference.power_class();
    const int n_dist = sc.disturbance.power_class();
    if (st.verdict == StabilityVerdict::unstable) {
        os << "  inapplicable (loop unstable)\n";
    } else {
        auto show = [&os](const char* label, int n, FinalValue (*f)(const LoopOperators&, int),
                          const LoopOperators& o) {
            os << "  " << label << ": ";
            if (n < 0) {
                os << "n/a (input is not a k^n class)\n";
                return;
            }
            const FinalValue v = f(o, n);
            os << "input k^" << n << " -> " << (v.unbounded ? "unbounded" : num15(v.value)) << "\n";
        };
        show("reference", n_ref, &reference_error_ss, ops);
        show("disturbance", n_dist, &disturbance_error_ss, ops);
        if (n_ref >= 0 && n_dist >= 0) {
            const FinalValue a = reference_error_ss(ops, n_ref);
            const FinalValue b = disturbance_error_ss(ops, n_dist);
            os << "  total: "
               << ((a.unbounded || b.unbounded) ? "unbounded" : num15(a.value + b.value)) << "\n";
        }
    }
    os << "\n";

    const RationalTF gw = disturbance_tf(ops);
    describe_poly(os, "disturbance transfer numerator", gw.num);
    describe_poly(os, "disturbance transfer denominator", gw.den);
}

int cmd_analyze(const std::string& scenario_path, const Options& opts, std::ostream& out,
                std::ostream& err) {
    Scenario sc;
    LoopOperators ops;
    try {
        sc = load_scenario(scenario_path);
        apply_overrides(sc, opts);
        ops = analyze_scenario(sc);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kConfigError;
    }

    const fs::path path =
        resolve_out(opts, sc.outputs.report, stem_of(scenario_path) + "_report.txt");
    std::ofstream file(path);
    if (!file) {
        err << "error: cannot write " << path.string() << "\n";
        return kConfigError;
    }
    write_report(file, sc, ops);
    out << "report: " << path.string() << "\n";
    out << "verdict: " << to_string(stability(ops).verdict) << "\n";
    return kOk;
}

namespace {

/// The three published closed-loop error levels reproduced by `table1`.
struct Table1Case {
    double lambda;
    double expected;
};
constexpr Table1Case kTable1[] = {
    {-0.1, -4.8827413127}, {1.0, -5.9632653061}, {2.0, -6.3657142857}};

}  // namespace

int cmd_table1(const Options& opts, std::ostream& out, std::ostream& err) {
    std::vector<double> a = {-0.5, -0.8};
    std::vector<double> b = {0.0, 0.0, 2.0, 1.0, 0.5};
    if (opts.perturb) a[0] += 0.01;
    const CarimaModel model(a, b);
    const SignalGen ramp = SignalGen::ramp();
    const int K = 400;

    std::vector<double> sim_cells, ana_cells;
    for (const auto& c : kTable1) {
        const ControllerSpec spec = ControllerSpec::uniform(4, 1.0, c.lambda, Variant::full);
        const SimRecord rec = run(model, spec, ramp, ramp, K);
        if (rec.diverged) {
            err << "table1: run diverged for lambda=" << c.lambda << "\n";
            return kMismatch;
        }

        const StateSpace ss = realize(model);
        const PredictionSet ps = build_prediction(ss, spec.horizon);
        const GainSet gains = build_gains(ps, spec);
        const LoopOperators ops = loop_operators(model, ps, gains, spec);
        auto k_signal = [](int t) { return static_cast<double>(t); };
        const std::vector<double> analytic = error_signal(ops, k_signal, k_signal, K);

        double sim_worst = 0.0, ana_worst = 0.0;
        for (int k = 70; k <= K; ++k) {
            sim_worst = std::max(sim_worst, std::abs(rec.e[static_cast<std::size_t>(k - 1)] - c.expected));
            ana_worst = std::max(ana_worst, std::abs(analytic[static_cast<std::size_t>(k - 1)] - c.expected));
        }
        sim_cells.push_back(rec.e[K - 1]);
        ana_cells.push_back(analytic[K - 1]);
        if (sim_worst > opts.tolerance || ana_worst > opts.tolerance) {
            err << "table1: mismatch at lambda=" << c.lambda << ": worst |e - expected|="
                << num15(sim_worst) << ", worst |E - expected|=" << num15(ana_worst)
                << " (tolerance " << num15(opts.tolerance) << ")\n";
            return kMismatch;
        }
    }

    out << "lambda          ";
    for (const auto& c : kTable1) out << "  " << num10(c.lambda);
    out << "\n";
    out << "e(70)=..=e(400) ";
    for (double v : sim_cells) out << "  " << num10(v);
    out << "\n";
    out << "E(70)=..=E(400) ";
    for (double v : ana_cells) out << "  " << num10(v);
    out << "\n";
    return kOk;
}

int cmd_sweep(const std::string& scenario_path, const std::string& param,
              const std::vector<double>& values, const Options& opts, std::ostream& out,
              std::ostream& err) {
    if (values.empty()) {
        err << "error: empty sweep range\n";
        return kConfigError;
    }
    if (param != "lambda" && param != "N") {
        err << "error: sweep parameter must be 'lambda' or 'N'\n";
        return kConfigError;
    }

    Scenario base;
    try {
        base = load_scenario(scenario_path);
        apply_overrides(base, opts);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kConfigError;
    }

    struct Row {
        double value = 0.0;
        std::string verdict = "error";
        double e_ss = std::numeric_limits<double>::quiet_NaN();
        double max_e = std::numeric_limits<double>::quiet_NaN();
    };
    std::vector<Row> rows(values.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= values.size()) return;
            Row& row = rows[i];
            row.value = values[i];
            Scenario sc = base;
            if (param == "lambda") {
                sc.controller.lambda = Eigen::VectorXd::Constant(sc.controller.horizon, values[i]);
            } else {
                const int N = static_cast<int>(values[i]);
                sc.controller.horizon = N;
                sc.controller.q = Eigen::VectorXd::Constant(N, sc.controller.q(0));
                sc.controller.lambda = Eigen::VectorXd::Constant(N, sc.controller.lambda(0));
            }
            try {
                const LoopOperators ops = analyze_scenario(sc);
                row.verdict = to_string(stability(ops).verdict);
                const int n_ref = sc.reference.power_class();
                const int n_dist = sc.disturbance.power_class();
                if (stability(ops).verdict != StabilityVerdict::unstable && n_ref >= 0 && n_dist >= 0) {
                    const SteadyStateReport ss = steady_state_report(ops, n_ref, n_dist);
                    if (!ss.total.unbounded) row.e_ss = ss.total.value;
                }
                const SimRecord rec = run_scenario(sc);
                row.max_e = 0.0;
                for (double e : rec.e) row.max_e = std::max(row.max_e, std::abs(e));
                if (rec.diverged) row.verdict += "/diverged";
            } catch (const SingularGainError&) {
                row.verdict = "singular";
            } catch (const std::exception&) {
                row.verdict = "error";
            }
        }
    };
    {
        const unsigned n_threads =
            std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                            static_cast<unsigned>(values.size())));
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    const fs::path path = resolve_out(opts, "", stem_of(scenario_path) + "_sweep_" + param + ".csv");
    std::ofstream file(path);
    file << param << ",verdict,e_ss,max_abs_e\n";
    for (const Row& r : rows)
        file << num15(r.value) << ',' << r.verdict << ',' << num15(r.e_ss) << ',' << num15(r.max_e)
             << "\n";
    out << "sweep: " << path.string() << "\n";
    return kOk;
}

int cmd_plot(const std::string& csv_path, const std::string& svg_path,
             const std::vector<std::string>& columns, std::ostream& err) {
    Trace tr;
    try {
        tr = read_trace_csv(csv_path);
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << "\n";
        return kConfigError;
    }
    if (tr.rows.empty()) {
        err << "error: " << csv_path << ": no data rows\n";
        return kConfigError;
    }

    auto col_index = [&tr](const std::string& name) -> int {
        for (std::size_t i = 0; i < tr.columns.size(); ++i)
            if (tr.columns[i] == name) return static_cast<int>(i);
        return -1;
    };
    const int kx = col_index("k");
    if (kx < 0) {
        err << "error: " << csv_path << ": no 'k' column\n";
        return kConfigError;
    }
    std::vector<std::string> wanted = columns;
    if (wanted.empty()) wanted = {"y_ref", "y"};

    std::vector<double> x;
    x.reserve(tr.rows.size());
    for (const auto& row : tr.rows) x.push_back(row[static_cast<std::size_t>(kx)]);

    std::vector<PlotSeries> series;
    for (const auto& name : wanted) {
        const int ci = col_index(name);
        if (ci < 0) {
            err << "error: " << csv_path << ": no column '" << name << "'\n";
            return kConfigError;
        }
        PlotSeries s;
        s.label = name;
        for (const auto& row : tr.rows) s.y.push_back(row[static_cast<std::size_t>(ci)]);
        series.push_back(std::move(s));
    }

    std::ofstream file(svg_path);
    if (!file) {
        err << "error: cannot write " << svg_path << "\n";
        return kConfigError;
    }
    file << render_line_chart(fs::path(csv_path).stem().string(), x, series);
    return kOk;
}

}  // namespace gpckit::cli
