#pragma once

#include <string>
#include <string_view>

#include "gpckit/simkit.hpp"

namespace gpckit {

/// Scenario config error carrying the offending line / key.
class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(const std::string& what) : std::runtime_error(what) {}
};

/// A complete experiment description: plant, controller, signal sources,
/// horizon and optional artifact paths. Parsed from the flat sectioned
/// key-value format; unknown sections or keys are rejected outright so
/// experiment files stay auditable.
struct Scenario {
    std::string name;
    CarimaModel model{{0.0}, {1.0}};
    ControllerSpec controller = ControllerSpec::uniform(1, 1.0, 0.0);
    SignalGen reference;
    SignalGen disturbance;
    int steps = 100;
    std::uint64_t seed = 1;

    struct Outputs {
        std::string csv;
        std::string report;
        std::string plot;
    } outputs;
};

Scenario parse_scenario(std::string_view text, std::string_view name = "<inline>");
Scenario load_scenario(const std::string& path);

}  // namespace gpckit
