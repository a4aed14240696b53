// config.hpp — run configuration files
//
// A run file is JSON. Nested objects and flat dotted keys are interchangeable:
//   {"device": {"omega_L": 0.9}}  ==  {"device.omega_L": 0.9}
// Everything is flattened to dotted keys first, `--set key=value` overrides are
// applied to that flat map, and only then is the typed RunConfig built.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "tritherm/functions.hpp"

namespace tritherm {

enum class Spacing { Linear, Log };

struct Axis {
    std::string param;  // T_L, T_M, T_R, gamma_L, gamma_M, gamma_R, g, omega_L, delta_T or a dotted key
    double start{0.0};
    double stop{1.0};
    std::size_t count{2};
    Spacing spacing{Spacing::Linear};

    std::vector<double> values() const;
};

struct ScanRange {
    double start{0.0};
    double stop{1.0};
    std::size_t count{2};
};

/// Parses "a:b:n".
ScanRange parse_range(std::string_view text);

struct RectifySettings {
    double T_A{0.25};
    double delta_T{0.2};
    bool two_terminal{false};
};

struct RunConfig {
    DeviceParams device;
    bool omega_M_given{false};  // otherwise omega_M = omega_R - omega_L
    Baths baths = make_baths(0.0, 0.0, 0.0);

    std::optional<Axis> sweep;
    std::optional<Axis> sweep2;
    std::vector<std::string> outputs;
    std::optional<ScanRange> scan;

    double amplifier_step{kDefaultAmplifierStep};
    double switch_epsilon{kDefaultSwitchEpsilon};
    Terminal stabilizer_terminal{Terminal::L};
    RectifySettings rectify;
    std::string description;

    std::map<std::string, nlohmann::json> entries;  // flat key -> value, as read plus overrides
};

/// Keys recognised in a run file (for documentation and error messages).
const std::vector<std::string>& known_keys();

/// Flattens nested objects into dotted keys. Arrays stay values.
std::map<std::string, nlohmann::json> flatten(const nlohmann::json& doc);

/// `source` names the input in error messages.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig read_config(const std::string& path);
RunConfig config_from_entries(std::map<std::string, nlohmann::json> entries);

/// Applies "key=value"; the value is read as JSON when possible, else as a bare string.
/// An object value replaces the whole section, e.g. sweep={"param": "g", ...}.
void apply_override(RunConfig& config, std::string_view assignment);

/// Device and baths checked by validate_params (with the two-terminal switch applied).
Configuration validated(const RunConfig& config);

/// Sets one sweepable parameter on a raw config.
void set_parameter(RunConfig& config, std::string_view param, double value);

/// Sorted "key=value" lines, stable for provenance headers.
std::vector<std::string> config_echo(const RunConfig& config);

}  // namespace tritherm
