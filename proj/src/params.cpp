// params.cpp — validation, normalization, presets and the config reader

#include "qdcav/params.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace qdcav {

namespace {

void require_finite(double value, const char* field) {
    if (!std::isfinite(value)) {
        throw ParamError(field, std::string(field) + " must be finite");
    }
}

void require_positive(double value, const char* field) {
    require_finite(value, field);
    if (value == 0.0) {
        throw ParamError(field, std::string(field) + " must be nonzero");
    }
    if (value < 0.0) {
        throw ParamError(field, std::string(field) + " must be positive");
    }
}

void require_nonnegative(double value, const char* field) {
    require_finite(value, field);
    if (value < 0.0) {
        throw ParamError(field, std::string(field) + " must be nonnegative");
    }
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view key, std::string_view text) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ParamError(std::string(key), "cannot parse value '" + std::string(text) +
                                               "' for key '" + std::string(key) + "'");
    }
    return value;
}

}  // namespace

SystemParams validate(const SystemParams& params) {
    require_positive(params.g, "g");
    require_positive(params.kappa, "kappa");
    require_positive(params.gamma, "gamma");
    require_nonnegative(params.p, "p");
    require_finite(params.delta, "delta");
    require_nonnegative(params.gamma_d, "gamma_d");
    return params;
}

SystemParams normalize(const SystemParams& params) {
    const SystemParams v = validate(params);
    const double k = v.kappa;
    return {v.g / k, 1.0, v.gamma / k, v.p / k, v.delta / k, v.gamma_d / k};
}

SystemParams preset(std::string_view name, double p) {
    if (name == "setA") return {122e9, 276e9, 113e9, p, 0.0, 0.0};
    if (name == "setB") return {616e9, 213e9, 427e9, p, 0.0, 0.0};
    throw ParamError("preset", "unknown preset '" + std::string(name) + "' (expected setA or setB)");
}

Units parse_units(std::string_view text) {
    if (text == "si") return Units::si;
    if (text == "kappa") return Units::kappa;
    throw ParamError("units", "units must be 'si' or 'kappa', got '" + std::string(text) + "'");
}

std::string_view to_string(Units units) { return units == Units::si ? "si" : "kappa"; }

ParamConfig parse_config(std::string_view text) {
    std::map<std::string, double, std::less<>> values;
    std::optional<Units> units;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ParamError("line " + std::to_string(line_no),
                             "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key == "units") {
            units = parse_units(value);
            continue;
        }
        static constexpr std::string_view known[] = {"g", "kappa", "gamma", "p", "delta", "gamma_d"};
        if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
            throw ParamError(std::string(key), "unknown key '" + std::string(key) + "'");
        }
        if (values.count(key) != 0) {
            throw ParamError(std::string(key), "duplicate key '" + std::string(key) + "'");
        }
        values.emplace(std::string(key), parse_number(key, value));
    }
    if (!units) throw ParamError("units", "missing required key 'units' (si or kappa)");

    auto required = [&](const char* key) {
        const auto it = values.find(key);
        if (it == values.end()) throw ParamError(key, std::string("missing required key '") + key + "'");
        return it->second;
    };
    auto optional = [&](const char* key, double fallback) {
        const auto it = values.find(key);
        return it == values.end() ? fallback : it->second;
    };

    ParamConfig config;
    config.units = *units;
    config.params.g = required("g");
    config.params.kappa = *units == Units::kappa ? optional("kappa", 1.0) : required("kappa");
    config.params.gamma = required("gamma");
    config.params.p = required("p");
    config.params.delta = optional("delta", 0.0);
    config.params.gamma_d = optional("gamma_d", 0.0);
    config.params = validate(config.params);
    return config;
}

ParamConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParamError("config", "cannot open config file '" + path.string() + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace qdcav
