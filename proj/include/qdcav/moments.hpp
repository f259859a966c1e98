// moments.hpp — B_n and R_n from the I_n ladder, photon statistics, reference ladders

#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "qdcav/params.hpp"
#include "qdcav/precision.hpp"
#include "qdcav/recurrence.hpp"

namespace qdcav {

// I_0..I_N, B_0..B_{N-1}, R_0..R_{N-1}. Edge values B_N, R_N would need
// I_{N+1} and are dropped.
struct FullMoments {
    MomentLadder<double> ladder;
    std::vector<double> b_moments;
    std::vector<std::complex<double>> r_moments;

    const std::vector<double>& i_moments() const { return ladder.i_moments; }
    long i_order() const { return ladder.order(); }
    long br_order() const { return static_cast<long>(b_moments.size()) - 1; }
};

template <class Real>
MomentLadder<double> ladder_to_double(const MomentLadder<Real>& in) {
    MomentLadder<double> out;
    out.i_moments.reserve(in.i_moments.size());
    for (const auto& v : in.i_moments) out.i_moments.push_back(to_double(v));
    out.ratios.reserve(in.ratios.size());
    for (const auto& v : in.ratios) out.ratios.push_back(to_double(v));
    out.i1_bracket = {to_double(in.i1_bracket.lower), to_double(in.i1_bracket.upper)};
    out.cutoff_N = in.cutoff_N;
    out.epsilon = in.epsilon;
    out.method = in.method;
    out.truncated = in.truncated;
    out.first_negative = in.first_negative;
    out.i1_mismatch = to_double(in.i1_mismatch);
    out.tail_ratio_bound = to_double(in.tail_ratio_bound);
    return out;
}

// Steady state of the equations of motion:
//   0 = -n kappa I_n - 2 n g Im R_{n-1}
//   0 = -sigma_n B_n + p I_n + 2 g Im R_n
//   0 = -(i delta + gamma_n) R_n - i g [(n+1) B_n + 2 B_{n+1} - I_{n+1}]
// Given the recurrence, the last line reduces to
//   R_n = -kappa I_{n+1} (delta + i gamma_n) / (2 g gamma_n),
// which is free of cancellation. B_n is formed as I_n (p - kappa r_n) / sigma_n so
// that an I_n beyond the range of double stores as +inf, never NaN.
// Arithmetic runs in Real; storage is double.
template <class Real>
FullMoments back_substitute(const MomentLadder<Real>& ladder, const RecurrenceCoeffs<Real>& coeffs) {
    const long n_max = ladder.order();
    if (n_max < 2) throw std::invalid_argument("back_substitute: ladder order must be >= 2");
    const auto& prm = coeffs.params();
    const Real g(prm.g);
    const Real kappa(prm.kappa);
    const Real p(prm.p);
    const Real delta(prm.delta);

    FullMoments full;
    full.ladder = ladder_to_double(ladder);
    full.b_moments.resize(static_cast<std::size_t>(n_max));
    full.r_moments.resize(static_cast<std::size_t>(n_max));
    for (long n = 0; n < n_max; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const Real& in0 = ladder.i_moments[i];
        const Real& in1 = ladder.i_moments[i + 1];
        full.b_moments[i] = to_double(in0 * ((p - kappa * ladder.ratios[i]) / coeffs.sigma(n)));
        const Real scale = -kappa * in1 / (2 * g);
        const double re = delta == 0 ? 0.0 : to_double(scale * (delta / coeffs.gamma_n(n)));
        full.r_moments[i] = {re, to_double(scale)};
    }
    return full;
}

template <class Real = double>
FullMoments solve_full(const SystemParams& params, const SolveOptions& options = {}) {
    const RecurrenceCoeffs<Real> coeffs(params);
    return back_substitute(solve(coeffs, options), coeffs);
}

struct SteadyStateResiduals {
    double intensity = 0.0;    // max relative residual of the I_n equation
    double population = 0.0;   // B_n equation
    double coherence = 0.0;    // R_n equation
    double max() const;
};

// Each residual is normalized by the largest single term of its equation.
// The coherence equation is checked for n <= N-2, the others wherever defined.
SteadyStateResiduals steady_state_residuals(const FullMoments& full, const SystemParams& params);

// Relative recurrence residual max_n |I_{n+2} - alpha I_{n+1} - beta I_n| / max|term|.
double recurrence_residual(std::span<const double> i_moments, const SystemParams& params);

// g^(n)(0) = I_n / I_1^n. Throws std::domain_error for the vacuum.
double g_n_zero(std::span<const double> i_moments, long n);

// (<(dn)^2> - <n>) / <n> = (I_2 - I_1^2) / I_1.
double mandel_q(std::span<const double> i_moments);

std::vector<double> coherent_ladder(double i1, long n_max);
std::vector<double> thermal_ladder(double i1, long n_max);

}  // namespace qdcav
