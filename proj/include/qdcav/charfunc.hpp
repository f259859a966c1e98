// charfunc.hpp — normally ordered characteristic function of the intracavity field
//
//   Phi(|alpha|) = sum_n (-1)^n |alpha|^(2n) I_n / (n!)^2
//
// The series alternates with terms far larger than the result, so it is summed
// with compensation in a width chosen per sample. Terms are generated from the
// ladder ratios, t_n = t_{n-1} (-x) r_{n-1} / n^2 with x = |alpha|^2, which
// never forms I_n or n! explicitly.

#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qdcav/compensated.hpp"
#include "qdcav/precision.hpp"
#include "qdcav/recurrence.hpp"

namespace qdcav {

class PhiRangeError : public std::runtime_error {
public:
    PhiRangeError(const std::string& message, double max_safe_alpha)
        : std::runtime_error(message), max_safe_alpha_(max_safe_alpha) {}
    double max_safe_alpha() const noexcept { return max_safe_alpha_; }

private:
    double max_safe_alpha_;
};

struct PhiValue {
    double phi = 1.0;
    double tail_bound = 0.0;       // bound on the omitted terms past n_trunc
    double rounding_bound = 0.0;   // 4 n_trunc eps sum|t_n|
    double max_term = 1.0;
    double abs_sum = 1.0;
    long n_trunc = 0;              // terms n < n_trunc were summed
    int precision_bits = 53;

    double uncertainty() const { return tail_bound + rounding_bound; }
    bool exceeds_one() const { return std::abs(phi) - uncertainty() > 1.0; }
};

// Truncated series over the first order() - margin ladder entries; the entries
// next to the I_N = 0 edge are biased by the truncation and are skipped.
template <class Real>
PhiValue phi_series(const MomentLadder<Real>& ladder, const RecurrenceCoeffs<Real>& coeffs, double alpha_abs,
                    long margin = 32) {
    if (!(alpha_abs >= 0.0) || !std::isfinite(alpha_abs)) {
        throw std::invalid_argument("phi_series: |alpha| must be finite and >= 0");
    }
    using std::abs;
    PhiValue out;
    out.precision_bits = significand_bits<Real>();
    const long n_trunc = ladder.order() - margin;
    if (n_trunc < 2) throw std::invalid_argument("phi_series: ladder too short for the requested margin");
    out.n_trunc = n_trunc;
    if (alpha_abs == 0.0 || ladder.i_moments[1] == 0) return out;

    const Real x = Real(alpha_abs) * Real(alpha_abs);
    NeumaierSum<Real> sum;
    Real term = 1;
    Real max_term = 1;
    sum.add(term);
    for (long n = 1; n < n_trunc; ++n) {
        const Real nn(n);
        term = term * (-x) * ladder.ratios[static_cast<std::size_t>(n - 1)] / (nn * nn);
        sum.add(term);
        if (abs(term) > max_term) max_term = abs(term);
    }
    const Real phi = sum.value();
    const Real a = coeffs.alpha(n_trunc);
    Real tail = std::numeric_limits<Real>::infinity();
    if (a < 0) {
        const Real q = x * coeffs.beta(n_trunc - 1) / (-a) / (Real(n_trunc) * Real(n_trunc));
        if (q < 1) tail = abs(term) * q / (1 - q);
    }
    out.phi = to_double(phi);
    out.tail_bound = to_double(tail);
    out.rounding_bound = to_double(4 * Real(n_trunc) * machine_epsilon<Real>() * sum.abs_total());
    out.max_term = to_double(max_term);
    out.abs_sum = to_double(sum.abs_total());
    return out;
}

struct SplitValue {
    double phi = 1.0;
    double head = 1.0;     // exact moments up to N_split
    double tail = 0.0;     // asymptotic moments I_{n+1} = (xi/n) I_n past N_split
    long tail_terms = 0;
};

// Head from the ladder for n <= n_split, tail from the asymptotic relation.
// The tail equals I_N (N-1)!/xi^N sum_{n>N} n xi^n |alpha|^(2n) (-1)^n / (n!)^3.
template <class Real>
SplitValue phi_split(const MomentLadder<Real>& ladder, const RecurrenceCoeffs<Real>& coeffs, double alpha_abs,
                     long n_split, double epsilon = 0.1) {
    if (!(alpha_abs >= 0.0) || !std::isfinite(alpha_abs)) {
        throw std::invalid_argument("phi_split: |alpha| must be finite and >= 0");
    }
    const long cutoff = coeffs.pump() == 0 ? 1 : select_cutoff(coeffs, epsilon).order;
    if (n_split < cutoff) {
        throw std::invalid_argument("phi_split: N_split = " + std::to_string(n_split) + " is below the cutoff " +
                                    std::to_string(cutoff));
    }
    if (n_split > ladder.order()) throw std::invalid_argument("phi_split: N_split exceeds the ladder order");
    using std::abs;
    const Real x = Real(alpha_abs) * Real(alpha_abs);
    NeumaierSum<Real> head;
    Real term = 1;
    head.add(term);
    for (long n = 1; n <= n_split; ++n) {
        const Real nn(n);
        term = term * (-x) * ladder.ratios[static_cast<std::size_t>(n - 1)] / (nn * nn);
        head.add(term);
    }
    NeumaierSum<Real> tail;
    SplitValue out;
    const Real xi = coeffs.xi();
    const Real eps = machine_epsilon<Real>();
    for (long n = n_split; term != 0; ++n) {
        const Real next(n + 1);
        term = term * (-x) * (xi / Real(n)) / (next * next);
        tail.add(term);
        ++out.tail_terms;
        const Real ratio = x * xi / (Real(n) * next * next);
        if (ratio < Real(0.5) && abs(term) <= eps * abs(head.value() + tail.value())) break;
        if (out.tail_terms > 100'000'000) break;
    }
    out.head = to_double(head.value());
    out.tail = to_double(tail.value());
    out.phi = to_double(head.value() + tail.value());
    return out;
}

struct EnvelopeValue {
    double value = 0.0;
    bool valid = false;   // x^(1/3) >= threshold
};

// (1/(sqrt3 pi)) exp(1.5 x^(1/3)) cos((3 sqrt3 / 2) x^(1/3)), x = |alpha|^2 xi.
EnvelopeValue phi_asymp_envelope(double x, double validity_threshold = 5.0);

// (1/(sqrt3 pi)) exp(1.5 x^(1/3)): amplitude of the envelope.
double envelope_amplitude(double x);

// k-th zero of the envelope cosine: (3 sqrt3 / 2) x^(1/3) = pi/2 + k pi.
double envelope_zero(long k);

// sum_{n>=1} (-3 xt)^(3n) / (3n)!, summed term by term.
template <class Real>
Real three_exp_series(const Real& xt) {
    using std::abs;
    NeumaierSum<Real> sum;
    const Real z = -3 * xt;
    Real term = 1;
    for (long k = 1;; ++k) {
        term = term * z / Real(k);
        if (k % 3 == 0) {
            sum.add(term);
            if (Real(k) > abs(z) && abs(term) <= machine_epsilon<Real>() * abs(sum.value())) break;
        }
        if (k > 10'000'000) break;
    }
    return sum.value();
}

// (1/3) [2 exp(1.5 xt) cos((3 sqrt3 / 2) xt) + exp(-3 xt)] - 1.
template <class Real>
Real three_exp_closed(const Real& xt) {
    using std::cos;
    using std::exp;
    using std::sqrt;
    const Real root3 = sqrt(Real(3));
    return (2 * exp(Real(3) / 2 * xt) * cos(Real(3) * root3 / 2 * xt) + exp(-3 * xt)) / 3 - 1;
}

// sum_{n>=1} n (-x)^n / (n!)^3.
template <class Real>
Real reduced_series(const Real& x) {
    using std::abs;
    NeumaierSum<Real> sum;
    Real term = 1;   // (-x)^n / (n!)^3
    for (long n = 1;; ++n) {
        const Real nn(n);
        term = term * (-x) / (nn * nn * nn);
        sum.add(nn * term);
        if (nn * nn * nn > abs(x) && abs(nn * term) <= machine_epsilon<Real>() * abs(sum.value())) break;
        if (n > 10'000'000) break;
    }
    return sum.value();
}

struct PhiOptions {
    Precision precision = Precision::automatic;
    double tol = 1e-10;                 // bound on tail + rounding relative to max(1, |Phi|)
    double cancellation_limit = 1e12;   // max_term / |Phi| that triggers a wider type
    long margin = 32;
    double epsilon = 0.1;
};

// Holds one ladder per width, each long enough for |alpha| <= alpha_max.
// evaluate() is const and safe to call concurrently.
class PhiEvaluator {
public:
    PhiEvaluator(const SystemParams& params, double alpha_max, const PhiOptions& options = {});

    // Automatic mode escalates 64 -> 128 -> 256 bits when the largest term
    // exceeds cancellation_limit * |Phi| or the error bound exceeds tol.
    PhiValue evaluate(double alpha_abs) const;
    PhiValue evaluate_at(double alpha_abs, Precision precision) const;

    double alpha_max() const { return alpha_max_; }
    double xi() const { return xi_; }
    long ladder_order(Precision precision) const;
    const PhiOptions& options() const { return options_; }
    const SystemParams& params() const { return params_; }

    // Split-sum cross-check in 256-bit arithmetic.
    SplitValue evaluate_split(double alpha_abs, long n_split) const;
    // max(select_cutoff, 64), the latter capped by the ladder length.
    long default_split() const;

private:
    bool controlled(const PhiValue& value) const;

    SystemParams params_;
    PhiOptions options_;
    double alpha_max_;
    double xi_;
    RecurrenceCoeffs<double> c64_;
    RecurrenceCoeffs<Float128> c128_;
    RecurrenceCoeffs<Float256> c256_;
    MomentLadder<double> l64_;
    MomentLadder<Float128> l128_;
    MomentLadder<Float256> l256_;
};

// Largest |alpha| whose Phi stays within tol at the given width (automatic
// means 256 bits). Found by doubling and bisection to 1e-3 relative.
double max_safe_alpha(const SystemParams& params, Precision precision = Precision::bits256,
                      const PhiOptions& options = {});

struct CharFnProfile {
    std::vector<double> alpha_grid;
    std::vector<double> phi;
    std::vector<double> tail_bound;
    std::vector<double> rounding_bound;
    std::vector<double> max_term;
    std::vector<char> exceeds_one;
    std::vector<int> precision_bits;
    long n_trunc = 0;        // series truncation at the largest |alpha|
    long n_split = 0;
    double xi = 0.0;
    double i_n_split = 0.0;  // I_N at the split order
    std::vector<double> envelope;   // envelope at x = |alpha|^2 xi; NaN where x = 0
};

std::vector<double> linear_grid(double lo, double hi, std::size_t samples);

// One evaluation per grid point. The parallel version splits the grid over
// OpenMP threads; rows are written by index, so the output does not depend on
// scheduling.
CharFnProfile profile(const SystemParams& params, const std::vector<double>& grid, const PhiOptions& options = {});
CharFnProfile profile_serial(const SystemParams& params, const std::vector<double>& grid,
                             const PhiOptions& options = {});

enum class PhiVerdict { nonclassical, not_detected, inapplicable };
std::string_view to_string(PhiVerdict verdict);

struct PhiNonclassicality {
    PhiVerdict sampled = PhiVerdict::not_detected;     // some |Phi| - uncertainty > 1
    PhiVerdict asymptotic = PhiVerdict::inapplicable;  // envelope growth, requires xi > 0
    double first_alpha = -1.0;                         // first sample with |Phi| > 1
};

PhiNonclassicality nonclassicality_by_phi(const CharFnProfile& profile);

}  // namespace qdcav
