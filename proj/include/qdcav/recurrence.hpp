// recurrence.hpp — three-term recurrence for the steady-state photon moments I_n
//
// In the steady state the normally ordered moments I_n = <a^+n a^n> obey
//
//     I_{n+2} = alpha_{n+1} I_{n+1} + beta_n I_n,      I_0 = 1,  I_n -> 0,
//
// so the physical ladder is the minimal solution of the recurrence. I_1 is
// obtained from the two fundamental solutions C_n, D_n (I_n = C_n I_1 + D_n)
// as the limit -D_n/C_n, with a two-sided error bracket built from the ratio
// bounds beta_n/(eps - alpha_{n+1}) <= I_{n+1}/I_n <= beta_n/(-alpha_{n+1}).
//
// Everything here is templated on the floating-point type so the same code
// runs in double, Float128 and Float256.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdcav/params.hpp"
#include "qdcav/precision.hpp"

namespace qdcav {

template <class Real>
class RecurrenceCoeffs {
public:
    explicit RecurrenceCoeffs(const SystemParams& params)
        : params_(validate(params)),
          g2_(Real(params.g) * Real(params.g)),
          kappa_(params.kappa),
          loss_(Real(params.gamma) + Real(params.p)),
          p_(params.p),
          delta_(params.delta),
          delta2_(Real(params.delta) * Real(params.delta)),
          gamma_d_(params.gamma_d) {}

    const SystemParams& params() const { return params_; }

    Real sigma(long n) const { return loss_ + Real(n) * kappa_; }

    // Coherence decay rate of R_n, including pure dephasing.
    Real gamma_n(long n) const { return (loss_ + kappa_ * Real(2 * n + 1) + gamma_d_) / 2; }

    Real lambda(long n) const {
        const Real gn = gamma_n(n);
        return 2 * g2_ * gn / (kappa_ * (delta2_ + gn * gn));
    }

    // Defined for n >= 1.
    Real alpha(long n) const {
        const Real s = sigma(n);
        const Real lam = lambda(n - 1);
        return s / (2 * kappa_) * (2 * p_ / s - Real(n) * kappa_ / sigma(n - 1) - (1 + lam) / lam);
    }

    Real beta(long n) const { return Real(n + 1) * p_ / (2 * kappa_) * sigma(n + 1) / sigma(n); }

    // Asymptotic constant: I_{n+1}/I_n ~ xi/n for large n.
    Real xi() const { return 2 * g2_ * p_ / (kappa_ * kappa_ * kappa_); }

    const Real& g2() const { return g2_; }
    const Real& kappa() const { return kappa_; }
    const Real& pump() const { return p_; }
    const Real& delta() const { return delta_; }
    const Real& loss() const { return loss_; }

private:
    SystemParams params_;
    Real g2_, kappa_, loss_, p_, delta_, delta2_, gamma_d_;
};

template <class Real>
struct Bracket {
    Real lower{0};
    Real upper{0};

    Real width() const { return upper - lower; }
    bool contains(const Real& value) const { return lower <= value && value <= upper; }
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& message, double lower, double upper, long order)
        : std::runtime_error(message), lower_(lower), upper_(upper), order_(order) {}
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    long order() const noexcept { return order_; }

private:
    double lower_, upper_;
    long order_;
};

class OverflowError : public std::runtime_error {
public:
    OverflowError(const std::string& message, long order) : std::runtime_error(message), order_(order) {}
    long order() const noexcept { return order_; }

private:
    long order_;
};

namespace detail {

// Power-of-two rescaling keeps the C/D pair representable; it is exact, and
// only the ratio D_n/C_n is ever consumed.
template <class Real>
int binary_exponent(const Real& value) {
    using std::frexp;
    int e = 0;
    (void)frexp(value, &e);
    return e;
}

template <class Real>
void scale_by_power_of_two(Real& value, int e) {
    using std::ldexp;
    value = ldexp(value, e);
}

template <class Real>
bool is_finite(const Real& value) {
    using std::isfinite;
    if constexpr (std::is_floating_point_v<Real>) {
        return std::isfinite(value);
    } else {
        return boost::multiprecision::isfinite(value);
    }
}

constexpr int kRescaleThreshold = 256;

}  // namespace detail

template <class Real>
struct CdSequences {
    std::vector<Real> c;              // stored C_n
    std::vector<Real> d;              // stored D_n
    std::vector<long> scale_exp;      // true C_n = c[n] * 2^scale_exp[n]; same for D_n
    long rescale_count = 0;

    Real ratio(long n) const { return d[static_cast<std::size_t>(n)] / c[static_cast<std::size_t>(n)]; }
};

// C_0 = 0, C_1 = 1, D_0 = 1, D_1 = 0, both advanced with the I_n recurrence
// up to order n_max. The live pair is rescaled every `rescale_every` steps and
// whenever its exponent leaves [-256, 256].
template <class Real>
CdSequences<Real> cd_sequences(const RecurrenceCoeffs<Real>& coeffs, long n_max, int rescale_every = 16) {
    if (n_max < 2) throw std::invalid_argument("cd_sequences: n_max must be >= 2");
    if (rescale_every < 1) throw std::invalid_argument("cd_sequences: rescale_every must be >= 1");
    CdSequences<Real> out;
    const auto size = static_cast<std::size_t>(n_max + 1);
    out.c.resize(size);
    out.d.resize(size);
    out.scale_exp.assign(size, 0);
    out.c[0] = 0;
    out.c[1] = 1;
    out.d[0] = 1;
    out.d[1] = 0;
    for (long n = 0; n + 2 <= n_max; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const Real a = coeffs.alpha(n + 1);
        const Real b = coeffs.beta(n);
        out.c[i + 2] = a * out.c[i + 1] + b * out.c[i];
        out.d[i + 2] = a * out.d[i + 1] + b * out.d[i];
        out.scale_exp[i + 2] = out.scale_exp[i + 1];
        if (!detail::is_finite(out.c[i + 2]) || !detail::is_finite(out.d[i + 2])) {
            throw OverflowError("cd_sequences: overflow at order " + std::to_string(n + 2), n + 2);
        }
        const Real big = std::max(abs(out.c[i + 2]), abs(out.d[i + 2]));
        const int e = detail::binary_exponent(big);
        if ((n + 1) % rescale_every == 0 || e > detail::kRescaleThreshold || e < -detail::kRescaleThreshold) {
            for (auto* v : {&out.c[i + 1], &out.c[i + 2], &out.d[i + 1], &out.d[i + 2]}) {
                detail::scale_by_power_of_two(*v, -e);
            }
            out.scale_exp[i + 1] += e;
            out.scale_exp[i + 2] += e;
            ++out.rescale_count;
        }
    }
    return out;
}

template <class Real>
struct RatioBounds {
    Real lower{0};
    Real upper{0};
    bool lower_valid = false;   // n >= xi/eps and alpha_{n+1} < eps
    bool upper_bounded = false; // alpha_{n+1} < 0
};

// Two-sided bound on I_{n+1}/I_n.
template <class Real>
RatioBounds<Real> ratio_bounds(const RecurrenceCoeffs<Real>& coeffs, long n, double epsilon) {
    if (epsilon <= 0) throw std::invalid_argument("ratio_bounds: epsilon must be > 0");
    RatioBounds<Real> out;
    const Real a = coeffs.alpha(n + 1);
    const Real b = coeffs.beta(n);
    const Real eps(epsilon);
    if (a < 0) {
        out.upper = b / (-a);
        out.upper_bounded = true;
    } else {
        out.upper = std::numeric_limits<Real>::infinity();
    }
    if (eps - a > 0) out.lower = b / (eps - a);
    out.lower_valid = Real(n) * eps >= coeffs.xi() && eps - a > 0;
    return out;
}

template <class Real>
struct CoeffSeries {
    Real alpha_nlo{0};   // next-to-leading-order expansion of alpha_{n+1}
    Real beta_nlo{0};    // next-to-leading-order expansion of beta_n
};

template <class Real>
CoeffSeries<Real> asymptotic_coeff_series(const RecurrenceCoeffs<Real>& coeffs, long n) {
    if (n < 1) throw std::invalid_argument("asymptotic_coeff_series: n must be >= 1");
    const Real k = coeffs.kappa();
    const Real c = k * k / (4 * coeffs.g2());
    const Real nn(n);
    CoeffSeries<Real> out;
    out.alpha_nlo = -c * nn * nn - (1 + c * (Real(5) / 2 + Real(3) / 2 * coeffs.loss() / k)) * nn;
    out.beta_nlo = coeffs.pump() / (2 * k) * (nn + 2);
    return out;
}

struct CutoffInfo {
    long order = 0;
    bool monotone_tail = false;   // epsilon < 1: I_{n+1} < I_n for n >= order
};

// Smallest N with N >= xi/eps, alpha_{N+1} < 0, beta_N/(-alpha_{N+1}) <= eps
// (which makes the lower ratio bound rigorous from N on) and both
// next-to-leading-order coefficient expansions within relative eps.
template <class Real>
CutoffInfo select_cutoff(const RecurrenceCoeffs<Real>& coeffs, double epsilon, long max_order = 100'000'000) {
    if (epsilon <= 0) throw std::invalid_argument("select_cutoff: epsilon must be > 0");
    using std::abs;
    using std::ceil;
    const Real eps(epsilon);
    const Real start = ceil(coeffs.xi() / eps);
    long n = std::max<long>(1, static_cast<long>(to_double(start)));
    for (; n <= max_order; ++n) {
        const Real a = coeffs.alpha(n + 1);
        if (!(a < 0)) continue;
        const Real b = coeffs.beta(n);
        if (b / (-a) > eps) continue;
        const auto series = asymptotic_coeff_series(coeffs, n);
        if (abs(series.alpha_nlo - a) > eps * abs(a)) continue;
        if (b != 0 && abs(series.beta_nlo - b) > eps * abs(b)) continue;
        return {n, epsilon < 1.0};
    }
    throw ConvergenceError("select_cutoff: no order up to " + std::to_string(max_order) + " satisfies the cutoff conditions",
                           0.0, 0.0, max_order);
}

template <class Real>
struct I1Estimate {
    Real value{0};
    Bracket<Real> bracket;
    long order = 0;   // truncation order N with I_N = 0 that produced `value`
};

struct EstimateOptions {
    double tol = 1e-10;       // relative bracket width on I_1
    double epsilon = 0.1;
    long max_order = 100'000'000;
    int rescale_every = 16;
};

// Iterates the C/D pair until n >= xi/eps and the bracket width falls below
// tol * I_1. The point estimate is -D_{n+2}/C_{n+2}, the I_{n+2} = 0
// truncation, which coincides with the upper-ratio endpoint of the bracket.
template <class Real>
I1Estimate<Real> estimate_i1(const RecurrenceCoeffs<Real>& coeffs, const EstimateOptions& options = {}) {
    if (!(options.tol > 0)) throw std::invalid_argument("estimate_i1: tol must be > 0");
    if (!(options.epsilon > 0)) throw std::invalid_argument("estimate_i1: epsilon must be > 0");
    using std::abs;
    I1Estimate<Real> out;
    if (coeffs.pump() == 0) return out;

    const Real eps(options.epsilon);
    const Real tol(options.tol);
    const Real xi = coeffs.xi();
    Real c0 = 0, c1 = 1, d0 = 1, d1 = 0;
    Bracket<Real> last{};
    for (long m = 0; m + 2 <= options.max_order; ++m) {
        const Real a = coeffs.alpha(m + 1);
        const Real b = coeffs.beta(m);
        const Real c2 = a * c1 + b * c0;
        const Real d2 = a * d1 + b * d0;
        if (!detail::is_finite(c2) || !detail::is_finite(d2)) {
            throw OverflowError("estimate_i1: overflow at order " + std::to_string(m + 2), m + 2);
        }
        if (a < 0 && Real(m) * eps >= xi) {
            const Real q_lo = b / (eps - a);
            const Real from_lower = -(d1 - q_lo * d0) / (c1 - q_lo * c0);
            const Real point = -d2 / c2;
            last.lower = std::min(from_lower, point);
            last.upper = std::max(from_lower, point);
            if (last.width() <= tol * abs(point)) {
                out.value = point;
                out.bracket = last;
                out.order = m + 2;
                return out;
            }
        }
        c0 = c1;
        c1 = c2;
        d0 = d1;
        d1 = d2;
        const int e = detail::binary_exponent(std::max(abs(c1), abs(d1)));
        if ((m + 1) % options.rescale_every == 0 || e > detail::kRescaleThreshold || e < -detail::kRescaleThreshold) {
            for (auto* v : {&c0, &c1, &d0, &d1}) detail::scale_by_power_of_two(*v, -e);
        }
    }
    throw ConvergenceError("estimate_i1: bracket did not reach tol within order " + std::to_string(options.max_order),
                           to_double(last.lower), to_double(last.upper), options.max_order);
}

enum class LadderMethod {
    backward_ratio,   // ratios swept down from I_N = 0; stable for the minimal solution
    forward           // I_{n+2} = alpha I_{n+1} + beta I_n from (1, I_1); loses digits fast
};

template <class Real>
struct MomentLadder {
    std::vector<Real> i_moments;   // I_0 .. I_N; I_N = 0 closes the truncation unless `truncated`
    std::vector<Real> ratios;      // I_{n+1}/I_n for n = 0 .. N-1
    Bracket<Real> i1_bracket;
    long cutoff_N = 0;
    double epsilon = 0.1;
    LadderMethod method = LadderMethod::backward_ratio;
    bool truncated = false;        // positivity failed; ladder ends at the last nonnegative entry
    long first_negative = -1;      // order at which I_n < 0 first appeared, -1 if never
    Real i1_mismatch{0};           // |r_0 - I_1| / I_1 between backward sweep and the given I_1
    Real tail_ratio_bound{0};      // beta_{N-1}/(-alpha_N): bound on I_{n+1}/I_n past the edge

    long order() const { return static_cast<long>(i_moments.size()) - 1; }
    const Real& operator[](long n) const { return i_moments[static_cast<std::size_t>(n)]; }
};

template <class Real>
MomentLadder<Real> vacuum_ladder(long n_max) {
    MomentLadder<Real> ladder;
    ladder.i_moments.assign(static_cast<std::size_t>(n_max + 1), Real(0));
    ladder.i_moments[0] = 1;
    ladder.ratios.assign(static_cast<std::size_t>(n_max), Real(0));
    ladder.cutoff_N = n_max;
    return ladder;
}

// Solves the truncated system I_0 = 1, I_1 = i1, I_N = 0. See LadderMethod.
template <class Real>
MomentLadder<Real> solve_ladder(const RecurrenceCoeffs<Real>& coeffs, const Real& i1, long n_max,
                                LadderMethod method = LadderMethod::backward_ratio) {
    if (n_max < 2) throw std::invalid_argument("solve_ladder: N must be >= 2");
    if (i1 < 0) throw std::invalid_argument("solve_ladder: I_1 must be nonnegative");
    if (coeffs.pump() == 0 || i1 == 0) {
        auto ladder = vacuum_ladder<Real>(n_max);
        ladder.method = method;
        return ladder;
    }
    using std::abs;
    const auto size = static_cast<std::size_t>(n_max + 1);
    MomentLadder<Real> ladder;
    ladder.method = method;
    ladder.cutoff_N = n_max;
    {
        const Real a = coeffs.alpha(n_max);
        ladder.tail_ratio_bound = a < 0 ? coeffs.beta(n_max - 1) / (-a) : std::numeric_limits<Real>::infinity();
    }

    if (method == LadderMethod::backward_ratio) {
        std::vector<Real> r(static_cast<std::size_t>(n_max), Real(0));
        for (long n = n_max - 2; n >= 0; --n) {
            const auto i = static_cast<std::size_t>(n);
            r[i] = coeffs.beta(n) / (r[i + 1] - coeffs.alpha(n + 1));
        }
        ladder.i1_mismatch = abs(r[0] - i1) / i1;
        r[0] = i1;
        ladder.i_moments.resize(size);
        ladder.i_moments[0] = 1;
        for (std::size_t i = 0; i + 1 < size; ++i) {
            if (r[i] < 0 || !detail::is_finite(r[i])) {
                ladder.first_negative = static_cast<long>(i + 1);
                ladder.truncated = true;
                ladder.i_moments.resize(i + 1);
                r.resize(i);
                break;
            }
            ladder.i_moments[i + 1] = ladder.i_moments[i] * r[i];
        }
        ladder.ratios = std::move(r);
        if (!ladder.truncated) ladder.i_moments.back() = 0;
        return ladder;
    }

    ladder.i_moments.reserve(size);
    ladder.i_moments.push_back(1);
    ladder.i_moments.push_back(i1);
    for (long n = 0; n + 2 < n_max; ++n) {
        const auto i = static_cast<std::size_t>(n);
        const Real next = coeffs.alpha(n + 1) * ladder.i_moments[i + 1] + coeffs.beta(n) * ladder.i_moments[i];
        if (next < 0 || !detail::is_finite(next)) {
            ladder.first_negative = n + 2;
            ladder.truncated = true;
            break;
        }
        ladder.i_moments.push_back(next);
    }
    if (!ladder.truncated) ladder.i_moments.push_back(0);
    ladder.cutoff_N = ladder.order();
    ladder.ratios.resize(ladder.i_moments.size() - 1);
    for (std::size_t i = 0; i + 1 < ladder.i_moments.size(); ++i) {
        ladder.ratios[i] = ladder.i_moments[i] == 0 ? Real(0) : ladder.i_moments[i + 1] / ladder.i_moments[i];
    }
    return ladder;
}

struct SolveOptions {
    double tol = 1e-10;
    double epsilon = 0.1;
    long min_order = 16;     // the ladder reaches at least this order before the margin
    long margin = 32;        // extra orders past the largest requirement
    LadderMethod method = LadderMethod::backward_ratio;
    long max_order = 100'000'000;
};

// estimate_i1 + select_cutoff + solve_ladder. With the forward method the
// truncation order is min_order exactly.
template <class Real>
MomentLadder<Real> solve(const RecurrenceCoeffs<Real>& coeffs, const SolveOptions& options = {}) {
    if (coeffs.pump() == 0) {
        auto ladder = vacuum_ladder<Real>(std::max<long>(2, options.min_order + options.margin));
        ladder.epsilon = options.epsilon;
        ladder.method = options.method;
        return ladder;
    }
    const auto est = estimate_i1(coeffs, {options.tol, options.epsilon, options.max_order});
    long n_max = std::max<long>(2, options.min_order);
    if (options.method == LadderMethod::backward_ratio) {
        const auto cutoff = select_cutoff(coeffs, options.epsilon, options.max_order);
        n_max = std::max({n_max, cutoff.order, est.order}) + options.margin;
    }
    auto ladder = solve_ladder(coeffs, est.value, n_max, options.method);
    ladder.i1_bracket = est.bracket;
    ladder.epsilon = options.epsilon;
    return ladder;
}

template <class Real>
MomentLadder<Real> solve(const SystemParams& params, const SolveOptions& options = {}) {
    return solve(RecurrenceCoeffs<Real>(params), options);
}

struct LargePumpReference {
    double value = 0.0;
    bool in_regime = false;   // p >= threshold * max(gamma, kappa, g, |delta|)
};

// Thermal-limit reference I_n ~ n! (2 g^2 / (kappa p))^n for p much larger than
// every other rate; p = inf gives the vacuum.
LargePumpReference large_p_reference(const SystemParams& params, long n, double regime_ratio = 100.0);

}  // namespace qdcav
