#include "qdcav/recurrence.hpp"

#include <algorithm>
#include <cmath>

namespace qdcav {

LargePumpReference large_p_reference(const SystemParams& params, long n, double regime_ratio) {
    if (n < 0) throw std::invalid_argument("large_p_reference: n must be >= 0");
    if (params.p == 0.0) throw std::domain_error("large_p_reference: undefined for p = 0");
    LargePumpReference out;
    const double scale = std::max({params.gamma, params.kappa, params.g, std::abs(params.delta)});
    out.in_regime = params.p >= regime_ratio * scale;
    if (n == 0) {
        out.value = 1.0;
        return out;
    }
    if (std::isinf(params.p)) {
        out.in_regime = true;
        return out;
    }
    const double unit = 2.0 * params.g * params.g / (params.kappa * params.p);
    double value = 1.0;
    for (long k = 1; k <= n; ++k) value *= static_cast<double>(k) * unit;
    out.value = value;
    return out;
}

}  // namespace qdcav
