// params.hpp — physical parameter set of one quantum-dot / cavity instance

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qdcav {

// All rates are angular frequencies. In SI units they are s^-1; in kappa units
// every rate is a multiple of the cavity decay rate.
enum class Units { si, kappa };

struct SystemParams {
    double g{1.0};        // emitter-cavity coupling
    double kappa{1.0};    // cavity decay rate
    double gamma{1.0};    // spontaneous emission rate of the emitter
    double p{0.0};        // incoherent pump rate
    double delta{0.0};    // detuning omega_c - omega_21
    double gamma_d{0.0};  // pure dephasing rate
};

// Raised by validate() and by the config reader; field() names the offending key.
class ParamError : public std::invalid_argument {
public:
    ParamError(std::string field, const std::string& message)
        : std::invalid_argument(message), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Returns params unchanged if g, kappa, gamma > 0, p, gamma_d >= 0 and every
// value is finite; throws ParamError otherwise.
SystemParams validate(const SystemParams& params);

// Divides every rate by kappa (kappa becomes exactly 1). Dimensionless
// outputs are invariant under this map.
SystemParams normalize(const SystemParams& params);

// Micropillar (setA) and microdisk (setB) cavities, SI units, delta = 0.
SystemParams preset(std::string_view name, double p = 1e11);

struct ParamConfig {
    SystemParams params;
    Units units{Units::si};
};

// Key-value format, one `key = value` per line, `#` starts a comment.
// Keys: g, kappa, gamma, p, delta, gamma_d, units (si|kappa). The units key
// is mandatory; kappa defaults to 1 when units = kappa.
ParamConfig parse_config(std::string_view text);
ParamConfig load_config(const std::filesystem::path& path);

Units parse_units(std::string_view text);
std::string_view to_string(Units units);

}  // namespace qdcav
