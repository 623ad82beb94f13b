#include "gpckit/scenario.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace gpckit {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

using Section = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail(std::string_view name, int line, const std::string& msg) {
    std::ostringstream os;
    os << name << ":" << line << ": " << msg;
    throw ScenarioError(os.str());
}

double parse_number(std::string_view name, int line, const std::string& text) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) fail(name, line, "trailing characters after number '" + text + "'");
        return v;
    } catch (const ScenarioError&) {
        throw;
    } catch (const std::exception&) {
        fail(name, line, "expected a number, got '" + text + "'");
    }
}

std::vector<double> parse_list(std::string_view name, int line, const std::string& text) {
    if (text.size() < 2 || text.front() != '[' || text.back() != ']')
        fail(name, line, "expected a list like [1, 2, 3], got '" + text + "'");
    std::vector<double> out;
    std::string body = text.substr(1, text.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (t.empty()) fail(name, line, "empty list element");
        out.push_back(parse_number(name, line, t));
    }
    if (out.empty()) fail(name, line, "empty list");
    return out;
}

class SectionReader {
public:
    SectionReader(std::string_view name, const std::string& section, Section* entries)
        : name_(name), section_(section), entries_(entries) {}

    std::optional<std::string> raw(const std::string& key) {
        if (!entries_) return std::nullopt;
        auto it = entries_->find(key);
        if (it == entries_->end()) return std::nullopt;
        it->second.used = true;
        last_line_ = it->second.line;
        return it->second.value;
    }

    std::string require(const std::string& key) {
        auto v = raw(key);
        if (!v) throw ScenarioError(std::string(name_) + ": missing key '" + key + "' in section [" + section_ + "]");
        return *v;
    }

    std::optional<double> number(const std::string& key) {
        auto v = raw(key);
        if (!v) return std::nullopt;
        return parse_number(name_, last_line_, *v);
    }

    std::optional<std::vector<double>> list(const std::string& key) {
        auto v = raw(key);
        if (!v) return std::nullopt;
        return parse_list(name_, last_line_, *v);
    }

    /// Scalar-or-list weight expanded to length n.
    std::optional<Eigen::VectorXd> weights(const std::string& key, int n) {
        auto v = raw(key);
        if (!v) return std::nullopt;
        if (!v->empty() && v->front() == '[') {
            const auto vals = parse_list(name_, last_line_, *v);
            if (static_cast<int>(vals.size()) != n)
                fail(name_, last_line_, "'" + key + "' list must have " + std::to_string(n) + " entries");
            return Eigen::Map<const Eigen::VectorXd>(vals.data(), n).eval();
        }
        return Eigen::VectorXd::Constant(n, parse_number(name_, last_line_, *v)).eval();
    }

    int line() const { return last_line_; }

private:
    std::string_view name_;
    std::string section_;
    Section* entries_;
    int last_line_ = 0;
};

SignalGen parse_signal(std::string_view name, const std::string& section, Section* entries,
                       std::uint64_t default_seed) {
    SectionReader r(name, section, entries);
    if (!entries) return SignalGen::zero();
    const std::string kind = r.require("kind");
    const double scale = r.number("scale").value_or(1.0);
    SignalGen g;
    if (kind == "zero") {
        g = SignalGen::zero();
        g.scale = scale;
    } else if (kind == "step") {
        g = SignalGen::step(scale);
    } else if (kind == "ramp") {
        g = SignalGen::ramp(scale);
    } else if (kind == "power") {
        const auto n = r.number("n");
        if (!n) throw ScenarioError(std::string(name) + ": kind=power needs 'n' in [" + section + "]");
        g = SignalGen::power_of(static_cast<int>(*n), scale);
    } else if (kind == "square") {
        g = SignalGen::square(static_cast<int>(r.number("period").value_or(100)), scale);
    } else if (kind == "noise") {
        const auto seed = r.number("seed");
        NoiseDist dist = NoiseDist::normal;
        if (auto d = r.raw("dist")) {
            if (*d == "normal") dist = NoiseDist::normal;
            else if (*d == "uniform") dist = NoiseDist::uniform;
            else fail(name, r.line(), "unknown noise dist '" + *d + "' (expected normal|uniform)");
        }
        g = SignalGen::noise_src(seed ? static_cast<std::uint64_t>(*seed) : default_seed, dist, scale);
    } else if (kind == "custom") {
        const auto samples = r.list("samples");
        if (!samples) throw ScenarioError(std::string(name) + ": kind=custom needs 'samples' in [" + section + "]");
        g = SignalGen::custom(*samples, scale);
    } else {
        fail(name, r.line(), "unknown signal kind '" + kind + "'");
    }
    return g;
}

}  // namespace

Scenario parse_scenario(std::string_view text, std::string_view name) {
    std::map<std::string, Section> sections;
    std::map<std::string, int> section_lines;
    {
        std::string current;
        int lineno = 0;
        std::stringstream ss{std::string(text)};
        std::string raw;
        while (std::getline(ss, raw)) {
            ++lineno;
            std::string line = trim(raw);
            if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') fail(name, lineno, "unterminated section header");
                current = trim(line.substr(1, line.size() - 2));
                if (current.empty()) fail(name, lineno, "empty section name");
                if (sections.count(current)) fail(name, lineno, "duplicate section [" + current + "]");
                sections[current];
                section_lines[current] = lineno;
                continue;
            }
            const auto eq = line.find('=');
            if (eq == std::string::npos) fail(name, lineno, "expected 'key = value'");
            if (current.empty()) fail(name, lineno, "key outside any section");
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty()) fail(name, lineno, "empty key");
            if (value.empty()) fail(name, lineno, "empty value for key '" + key + "'");
            auto [it, inserted] = sections[current].emplace(key, Entry{value, lineno, false});
            if (!inserted) fail(name, lineno, "duplicate key '" + key + "' in section [" + current + "]");
        }
    }

    static const std::vector<std::string> kKnown = {"model",       "controller", "reference",
                                                    "disturbance", "sim",        "outputs"};
    for (const auto& [sec, _] : sections) {
        if (std::find(kKnown.begin(), kKnown.end(), sec) == kKnown.end())
            fail(name, section_lines[sec], "unknown section [" + sec + "]");
    }
    auto section = [&sections](const char* key) -> Section* {
        auto it = sections.find(key);
        return it == sections.end() ? nullptr : &it->second;
    };

    Scenario sc;
    sc.name = std::string(name);

    {
        Section* s = section("model");
        if (!s) throw ScenarioError(std::string(name) + ": missing [model] section");
        SectionReader r(name, "model", s);
        const auto a = r.list("a");
        const auto b = r.list("b");
        if (!a || !b) throw ScenarioError(std::string(name) + ": [model] needs both 'a' and 'b' lists");
        try {
            sc.model = CarimaModel(*a, *b);
        } catch (const std::invalid_argument& ex) {
            throw ScenarioError(std::string(name) + ": invalid model: " + ex.what());
        }
    }

    {
        Section* s = section("sim");
        SectionReader r(name, "sim", s);
        if (s) {
            if (auto k = r.number("K")) sc.steps = static_cast<int>(*k);
            if (auto seed = r.number("seed")) sc.seed = static_cast<std::uint64_t>(*seed);
        }
        if (sc.steps < 1) throw ScenarioError(std::string(name) + ": horizon K must be >= 1");
    }

    {
        Section* s = section("controller");
        if (!s) throw ScenarioError(std::string(name) + ": missing [controller] section");
        SectionReader r(name, "controller", s);
        const auto n = r.number("N");
        if (!n) throw ScenarioError(std::string(name) + ": [controller] needs 'N'");
        const int N = static_cast<int>(*n);
        if (N < 1) fail(name, r.line(), "N must be >= 1");
        sc.controller.horizon = N;
        sc.controller.q = r.weights("Q", N).value_or(Eigen::VectorXd::Ones(N));
        sc.controller.lambda = r.weights("lambda", N).value_or(Eigen::VectorXd::Zero(N));
        const std::string variant = r.raw("variant").value_or("full");
        if (variant == "full") sc.controller.variant = Variant::full;
        else if (variant == "reduced") sc.controller.variant = Variant::reduced;
        else if (variant == "igmvc") sc.controller.variant = Variant::igmvc;
        else if (variant == "compensated-full") sc.controller.variant = Variant::compensated_full;
        else if (variant == "compensated-reduced") sc.controller.variant = Variant::compensated_reduced;
        else fail(name, r.line(), "unknown variant '" + variant + "'");
        const std::string comp = r.raw("compensation").value_or("none");
        if (comp == "none") sc.controller.forecast = ForecastKind::none;
        else if (comp == "exact") sc.controller.forecast = ForecastKind::exact;
        else if (comp == "hold") sc.controller.forecast = ForecastKind::hold;
        else fail(name, r.line(), "unknown compensation '" + comp + "' (expected exact|hold|none)");
        if (!sc.controller.compensated() && sc.controller.forecast != ForecastKind::none)
            fail(name, r.line(), "compensation source given for non-compensated variant '" + variant + "'");
    }

    sc.reference = parse_signal(name, "reference", section("reference"), sc.seed);
    sc.disturbance = parse_signal(name, "disturbance", section("disturbance"), sc.seed);

    if (Section* s = section("outputs")) {
        SectionReader r(name, "outputs", s);
        sc.outputs.csv = r.raw("csv").value_or("");
        sc.outputs.report = r.raw("report").value_or("");
        sc.outputs.plot = r.raw("plot").value_or("");
    }

    for (const auto& [sec, entries] : sections)
        for (const auto& [key, entry] : entries)
            if (!entry.used) fail(name, entry.line, "unknown key '" + key + "' in section [" + sec + "]");

    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path + ": cannot open scenario file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path);
}

}  // namespace gpckit
