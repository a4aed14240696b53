#include "tritherm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace tritherm {

using nlohmann::json;

namespace {

const std::vector<std::string> kOutputs{"Q_L", "Q_M", "Q_R", "alpha_L", "alpha_R", "R", "populations",
                                        "secular_ratio"};

const std::vector<std::string> kAxisFields{"param", "start", "stop", "count", "spacing"};

[[noreturn]] void field_error(const std::string& key, const std::string& what) {
    throw Error(ErrorCode::ParseError, "field '" + key + "': " + what);
}

std::string type_name(const json& v) { return v.type_name(); }

double number(const std::string& key, const json& v) {
    if (!v.is_number()) field_error(key, "expected a number, got " + type_name(v) + " " + v.dump());
    const double d = v.get<double>();
    if (!std::isfinite(d)) field_error(key, "must be finite");
    return d;
}

std::size_t count_value(const std::string& key, const json& v) {
    if (v.is_number_unsigned()) return v.get<std::size_t>();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d >= 0.0 && d == std::floor(d)) return static_cast<std::size_t>(d);
    }
    field_error(key, "expected a non-negative integer, got " + v.dump());
}

std::string text(const std::string& key, const json& v) {
    if (!v.is_string()) field_error(key, "expected a string, got " + type_name(v) + " " + v.dump());
    return v.get<std::string>();
}

bool boolean(const std::string& key, const json& v) {
    if (!v.is_boolean()) field_error(key, "expected true or false, got " + v.dump());
    return v.get<bool>();
}

// Line and column of a byte offset, for JSON syntax errors.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

void flatten_into(const json& node, const std::string& prefix, std::map<std::string, json>& out) {
    if (node.is_object() && (prefix.empty() || !node.empty())) {
        for (const auto& [k, v] : node.items()) flatten_into(v, prefix.empty() ? k : prefix + "." + k, out);
        return;
    }
    if (out.count(prefix)) throw Error(ErrorCode::ParseError, "field '" + prefix + "' is given twice");
    out[prefix] = node;
}

// Short parameter names accepted on axes and by set_parameter.
std::string canonical_param(std::string_view p) {
    static const std::map<std::string, std::string, std::less<>> aliases{
        {"T_L", "bath.L.temperature"}, {"T_M", "bath.M.temperature"}, {"T_R", "bath.R.temperature"},
        {"gamma_L", "bath.L.gamma"},   {"gamma_M", "bath.M.gamma"},   {"gamma_R", "bath.R.gamma"},
        {"g", "device.g"},             {"omega_L", "device.omega_L"}, {"omega_R", "device.omega_R"},
        {"omega_M", "device.omega_M"}, {"delta_T", "rectify.delta_T"},
    };
    if (auto it = aliases.find(p); it != aliases.end()) return it->second;
    return std::string(p);
}

bool sweepable(const std::string& key) {
    static const std::vector<std::string> keys{
        "bath.L.temperature", "bath.M.temperature", "bath.R.temperature", "bath.L.gamma", "bath.M.gamma",
        "bath.R.gamma",       "device.g",           "device.omega_L",     "device.omega_R", "device.omega_M",
        "rectify.delta_T",    "rectify.T_A",
    };
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

Axis parse_axis(const std::map<std::string, json>& e, const std::string& prefix) {
    Axis axis;
    auto get = [&](const char* field) -> const json* {
        auto it = e.find(prefix + "." + field);
        return it == e.end() ? nullptr : &it->second;
    };
    const json* param = get("param");
    const json* start = get("start");
    const json* stop = get("stop");
    const json* count = get("count");
    if (!param || !start || !stop || !count)
        throw Error(ErrorCode::InvalidSpec, prefix + " needs param, start, stop and count");
    axis.param = text(prefix + ".param", *param);
    axis.start = number(prefix + ".start", *start);
    axis.stop = number(prefix + ".stop", *stop);
    axis.count = count_value(prefix + ".count", *count);
    if (const json* sp = get("spacing")) {
        const std::string s = text(prefix + ".spacing", *sp);
        if (s == "linear") axis.spacing = Spacing::Linear;
        else if (s == "log") axis.spacing = Spacing::Log;
        else field_error(prefix + ".spacing", "expected 'linear' or 'log', got '" + s + "'");
    }
    if (!sweepable(canonical_param(axis.param)))
        throw Error(ErrorCode::InvalidSpec, prefix + ".param '" + axis.param + "' cannot be swept");
    if (axis.count < 2) throw Error(ErrorCode::InvalidSpec, prefix + ".count must be at least 2");
    if (!(axis.start < axis.stop)) throw Error(ErrorCode::InvalidSpec, prefix + ".start must be below stop");
    if (axis.spacing == Spacing::Log && !(axis.start > 0.0))
        throw Error(ErrorCode::InvalidSpec, prefix + ": log spacing needs start > 0");
    return axis;
}

std::vector<std::string> parse_outputs(const json& v) {
    std::vector<std::string> out;
    if (v.is_string()) {
        std::stringstream ss(v.get<std::string>());
        for (std::string item; std::getline(ss, item, ',');)
            if (!item.empty()) out.push_back(item);
    } else if (v.is_array()) {
        for (const json& item : v) out.push_back(text("outputs[]", item));
    } else {
        field_error("outputs", "expected a list of names");
    }
    for (const std::string& name : out)
        if (std::find(kOutputs.begin(), kOutputs.end(), name) == kOutputs.end())
            throw Error(ErrorCode::InvalidSpec, "unknown output '" + name + "'");
    return out;
}

}  // namespace

std::vector<double> Axis::values() const {
    if (spacing == Spacing::Linear) return linspace(start, stop, count);
    std::vector<double> out = linspace(std::log(start), std::log(stop), count);
    for (double& v : out) v = std::exp(v);
    out.front() = start;
    out.back() = stop;
    return out;
}

ScanRange parse_range(std::string_view s) {
    ScanRange r;
    const auto c1 = s.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : s.find(':', c1 + 1);
    if (c2 == std::string_view::npos) throw Error(ErrorCode::ParseError, "range '" + std::string(s) + "' is not a:b:n");
    auto parse = [&](std::string_view part, auto& value) {
        const auto res = std::from_chars(part.data(), part.data() + part.size(), value);
        if (res.ec != std::errc() || res.ptr != part.data() + part.size())
            throw Error(ErrorCode::ParseError, "range '" + std::string(s) + "': cannot read '" + std::string(part) + "'");
    };
    parse(s.substr(0, c1), r.start);
    parse(s.substr(c1 + 1, c2 - c1 - 1), r.stop);
    parse(s.substr(c2 + 1), r.count);
    if (!(r.start < r.stop) || r.count < 2)
        throw Error(ErrorCode::InvalidArgument, "range '" + std::string(s) + "' needs a < b and n >= 2");
    return r;
}

const std::vector<std::string>& known_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k{"description",       "device.omega_L",  "device.omega_M",  "device.omega_R",
                                   "device.g",          "outputs",         "scan.start",      "scan.stop",
                                   "scan.count",        "amplifier.step",  "switch.epsilon",  "stabilizer.terminal",
                                   "rectify.T_A",       "rectify.delta_T", "rectify.two_terminal"};
        for (const char* b : {"L", "M", "R"})
            for (const char* f : {"temperature", "gamma", "spectrum"}) k.push_back(std::string("bath.") + b + "." + f);
        for (const char* s : {"sweep", "sweep2"})
            for (const auto& f : kAxisFields) k.push_back(std::string(s) + "." + f);
        return k;
    }();
    return keys;
}

std::map<std::string, json> flatten(const json& doc) {
    if (!doc.is_object()) throw Error(ErrorCode::ParseError, "run file must be a JSON object");
    std::map<std::string, json> out;
    flatten_into(doc, "", out);
    return out;
}

RunConfig config_from_entries(std::map<std::string, json> entries) {
    const auto& keys = known_keys();
    for (const auto& [key, value] : entries)
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw Error(ErrorCode::ParseError, "unknown field '" + key + "'");

    RunConfig c;
    auto has = [&](const std::string& k) { return entries.count(k) > 0; };
    auto require = [&](const std::string& k) -> const json& {
        auto it = entries.find(k);
        if (it == entries.end()) throw Error(ErrorCode::ParseError, "missing required field '" + k + "'");
        return it->second;
    };

    if (has("description")) c.description = text("description", entries.at("description"));
    c.device.omega_L = number("device.omega_L", require("device.omega_L"));
    c.device.g = number("device.g", require("device.g"));
    c.device.omega_R = has("device.omega_R") ? number("device.omega_R", entries.at("device.omega_R")) : 1.0;
    c.omega_M_given = has("device.omega_M");
    c.device.omega_M = c.omega_M_given ? number("device.omega_M", entries.at("device.omega_M"))
                                       : c.device.omega_R - c.device.omega_L;

    for (Terminal t : kTerminals) {
        const std::string prefix = std::string("bath.") + to_char(t) + ".";
        BathSpec& b = c.baths[index(t)];
        b.label = t;
        b.temperature = number(prefix + "temperature", require(prefix + "temperature"));
        if (has(prefix + "gamma")) b.gamma = number(prefix + "gamma", entries.at(prefix + "gamma"));
        if (has(prefix + "spectrum")) {
            const std::string s = text(prefix + "spectrum", entries.at(prefix + "spectrum"));
            try {
                b.spectrum = parse_spectrum(s);
            } catch (const Error&) {
                field_error(prefix + "spectrum", "expected 'flat' or 'ohmic', got '" + s + "'");
            }
        }
    }

    if (has("sweep.param") || has("sweep.start") || has("sweep.stop") || has("sweep.count"))
        c.sweep = parse_axis(entries, "sweep");
    if (has("sweep2.param") || has("sweep2.start") || has("sweep2.stop") || has("sweep2.count")) {
        if (!c.sweep) throw Error(ErrorCode::InvalidSpec, "sweep2 given without sweep");
        c.sweep2 = parse_axis(entries, "sweep2");
        if (canonical_param(c.sweep2->param) == canonical_param(c.sweep->param))
            throw Error(ErrorCode::InvalidSpec, "sweep and sweep2 vary the same parameter");
    }
    if (has("outputs")) c.outputs = parse_outputs(entries.at("outputs"));

    if (has("scan.start") || has("scan.stop") || has("scan.count")) {
        ScanRange r;
        r.start = number("scan.start", require("scan.start"));
        r.stop = number("scan.stop", require("scan.stop"));
        r.count = count_value("scan.count", require("scan.count"));
        if (!(r.start < r.stop) || r.count < 2) throw Error(ErrorCode::InvalidSpec, "scan needs start < stop, count >= 2");
        c.scan = r;
    }

    if (has("amplifier.step")) c.amplifier_step = number("amplifier.step", entries.at("amplifier.step"));
    if (has("switch.epsilon")) c.switch_epsilon = number("switch.epsilon", entries.at("switch.epsilon"));
    if (has("stabilizer.terminal")) {
        const std::string s = text("stabilizer.terminal", entries.at("stabilizer.terminal"));
        try {
            c.stabilizer_terminal = parse_terminal(s);
        } catch (const Error&) {
            field_error("stabilizer.terminal", "expected L, M or R, got '" + s + "'");
        }
    }
    if (has("rectify.T_A")) c.rectify.T_A = number("rectify.T_A", entries.at("rectify.T_A"));
    if (has("rectify.delta_T")) c.rectify.delta_T = number("rectify.delta_T", entries.at("rectify.delta_T"));
    if (has("rectify.two_terminal"))
        c.rectify.two_terminal = boolean("rectify.two_terminal", entries.at("rectify.two_terminal"));

    c.entries = std::move(entries);
    return c;
}

RunConfig parse_config(std::string_view text, std::string_view source) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, col] = locate(text, e.byte);
        throw Error(ErrorCode::ParseError, std::string(source) + ":" + std::to_string(line) + ":" +
                                               std::to_string(col) + ": invalid JSON");
    }
    try {
        return config_from_entries(flatten(doc));
    } catch (const Error& e) {
        throw Error(e.code(), std::string(source) + ": " + std::string(e.what()).substr(to_string(e.code()).size() + 2));
    }
}

RunConfig read_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

void apply_override(RunConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0)
        throw Error(ErrorCode::ParseError, "override '" + std::string(assignment) + "' is not key=value");
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;  // bare word such as ohmic or L
    }
    auto entries = config.entries;
    if (value.is_object()) {
        // A whole section replaces every key below it.
        const std::string prefix = key + ".";
        std::erase_if(entries, [&](const auto& e) { return e.first == key || e.first.rfind(prefix, 0) == 0; });
        for (auto& [sub, v] : flatten(value)) entries[prefix + sub] = std::move(v);
    } else {
        entries[key] = value;
    }
    try {
        config = config_from_entries(std::move(entries));
    } catch (const Error& e) {
        throw Error(e.code(), "--set " + std::string(assignment) + ": " +
                                  std::string(e.what()).substr(to_string(e.code()).size() + 2));
    }
}

Configuration validated(const RunConfig& config) {
    DeviceParams device = config.device;
    if (!config.omega_M_given) device = resonant_device(device.omega_L, device.g, device.omega_R);
    Baths baths = config.baths;
    if (config.rectify.two_terminal) baths[index(Terminal::L)].gamma = 0.0;
    return validate_params(device, baths);
}

void set_parameter(RunConfig& config, std::string_view param, double value) {
    const std::string key = canonical_param(param);
    if (key == "device.g") {
        config.device.g = value;
    } else if (key == "device.omega_L") {
        config.device.omega_L = value;
        config.omega_M_given = false;
    } else if (key == "device.omega_R") {
        config.device.omega_R = value;
        config.omega_M_given = false;
    } else if (key == "device.omega_M") {
        config.device.omega_M = value;
        config.omega_M_given = true;
    } else if (key == "rectify.delta_T" || key == "rectify.T_A") {
        (key == "rectify.T_A" ? config.rectify.T_A : config.rectify.delta_T) = value;
        config.baths[index(Terminal::R)].temperature = config.rectify.T_A + 0.5 * config.rectify.delta_T;
        config.baths[index(Terminal::M)].temperature = config.rectify.T_A - 0.5 * config.rectify.delta_T;
    } else if (key.rfind("bath.", 0) == 0 && key.size() > 7) {
        BathSpec& b = config.baths[index(parse_terminal(key.substr(5, 1)))];
        const std::string field = key.substr(7);
        if (field == "temperature") b.temperature = value;
        else if (field == "gamma") b.gamma = value;
        else throw Error(ErrorCode::InvalidSpec, "parameter '" + std::string(param) + "' cannot be swept");
    } else {
        throw Error(ErrorCode::InvalidSpec, "parameter '" + std::string(param) + "' cannot be swept");
    }
}

std::vector<std::string> config_echo(const RunConfig& config) {
    std::vector<std::string> lines;
    for (const auto& [key, value] : config.entries) lines.push_back(key + "=" + value.dump());
    return lines;
}

}  // namespace tritherm
