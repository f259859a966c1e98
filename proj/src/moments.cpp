#include "qdcav/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qdcav {

namespace {

// Scales inside the subnormal range carry no relative information.
constexpr double kTinyScale = std::numeric_limits<double>::min() / std::numeric_limits<double>::epsilon();

double relative(double residual, double scale) { return scale < kTinyScale ? 0.0 : std::abs(residual) / scale; }

}  // namespace

double SteadyStateResiduals::max() const { return std::max({intensity, population, coherence}); }

SteadyStateResiduals steady_state_residuals(const FullMoments& full, const SystemParams& params) {
    const auto& in = full.i_moments();
    const auto& b = full.b_moments;
    const auto& r = full.r_moments;
    const double g = params.g, kappa = params.kappa, p = params.p, delta = params.delta;
    const RecurrenceCoeffs<double> coeffs(params);
    SteadyStateResiduals out;
    const long nb = static_cast<long>(b.size());
    for (long n = 1; n <= nb; ++n) {
        const double t1 = -static_cast<double>(n) * kappa * in[static_cast<std::size_t>(n)];
        const double t2 = -2.0 * static_cast<double>(n) * g * r[static_cast<std::size_t>(n - 1)].imag();
        out.intensity = std::max(out.intensity, relative(t1 + t2, std::max(std::abs(t1), std::abs(t2))));
    }
    for (long n = 0; n < nb; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const double t1 = -coeffs.sigma(n) * b[i];
        const double t2 = p * in[i];
        const double t3 = 2.0 * g * r[i].imag();
        out.population = std::max(out.population,
                                  relative(t1 + t2 + t3, std::max({std::abs(t1), std::abs(t2), std::abs(t3)})));
    }
    for (long n = 0; n + 1 < nb; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const std::complex<double> t1 = -std::complex<double>(coeffs.gamma_n(n), delta) * r[i];
        const double bracket_terms[] = {static_cast<double>(n + 1) * b[i], 2.0 * b[i + 1], -in[i + 1]};
        const std::complex<double> t2 =
            std::complex<double>(0.0, -g) * (bracket_terms[0] + bracket_terms[1] + bracket_terms[2]);
        double scale = std::abs(t1);
        for (double t : bracket_terms) scale = std::max(scale, g * std::abs(t));
        out.coherence = std::max(out.coherence, relative(std::abs(t1 + t2), scale));
    }
    return out;
}

double recurrence_residual(std::span<const double> i_moments, const SystemParams& params) {
    const RecurrenceCoeffs<double> coeffs(params);
    double worst = 0.0;
    for (std::size_t n = 0; n + 2 < i_moments.size(); ++n) {
        const long k = static_cast<long>(n);
        const double t1 = coeffs.alpha(k + 1) * i_moments[n + 1];
        const double t2 = coeffs.beta(k) * i_moments[n];
        const double scale = std::max({std::abs(i_moments[n + 2]), std::abs(t1), std::abs(t2)});
        if (scale < kTinyScale) continue;
        worst = std::max(worst, std::abs(i_moments[n + 2] - t1 - t2) / scale);
    }
    return worst;
}

double g_n_zero(std::span<const double> i_moments, long n) {
    if (n < 1) throw std::invalid_argument("g_n_zero: n must be >= 1");
    if (static_cast<std::size_t>(n) >= i_moments.size()) {
        throw std::out_of_range("g_n_zero: ladder holds no I_" + std::to_string(n));
    }
    const double i1 = i_moments[1];
    if (!(i1 > 0.0)) throw std::domain_error("g_n_zero: vacuum state, correlation undefined");
    return i_moments[static_cast<std::size_t>(n)] / std::pow(i1, static_cast<double>(n));
}

double mandel_q(std::span<const double> i_moments) {
    if (i_moments.size() < 3) throw std::out_of_range("mandel_q: ladder must hold I_2");
    const double i1 = i_moments[1];
    if (!(i1 > 0.0)) throw std::domain_error("mandel_q: vacuum state, Q undefined");
    return (i_moments[2] - i1 * i1) / i1;
}

std::vector<double> coherent_ladder(double i1, long n_max) {
    std::vector<double> out(static_cast<std::size_t>(n_max + 1));
    double value = 1.0;
    for (auto& v : out) {
        v = value;
        value *= i1;
    }
    return out;
}

std::vector<double> thermal_ladder(double i1, long n_max) {
    std::vector<double> out(static_cast<std::size_t>(n_max + 1));
    double value = 1.0;
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n] = value;
        value *= static_cast<double>(n + 1) * i1;
    }
    return out;
}

}  // namespace qdcav
