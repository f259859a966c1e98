#include "qdcav/charfunc.hpp"

#include <algorithm>
#include <exception>
#include <limits>

namespace qdcav {

namespace {

long required_order(double alpha_max, double xi, long margin) {
    const double y = std::cbrt(alpha_max * alpha_max * xi);
    return static_cast<long>(std::ceil(4.0 * y)) + 2 * margin + 32;
}

// Ladder for Phi: I_1 converged to a few ulps of the working width.
template <class Real>
MomentLadder<Real> phi_ladder(const RecurrenceCoeffs<Real>& coeffs, double alpha_max, const PhiOptions& options) {
    SolveOptions so;
    so.epsilon = options.epsilon;
    so.margin = options.margin;
    so.min_order = required_order(alpha_max, to_double(coeffs.xi()), options.margin);
    so.tol = std::max(64.0 * to_double(machine_epsilon<Real>()), 1e-300);
    for (int attempt = 0;; ++attempt) {
        try {
            return solve(coeffs, so);
        } catch (const ConvergenceError&) {
            if (attempt >= 8) throw;
            so.tol *= 100.0;
        }
    }
}

}  // namespace

EnvelopeValue phi_asymp_envelope(double x, double validity_threshold) {
    if (!(x > 0.0)) throw std::invalid_argument("phi_asymp_envelope: x must be > 0");
    const double xt = std::cbrt(x);
    EnvelopeValue out;
    out.value = envelope_amplitude(x) * std::cos(1.5 * std::numbers::sqrt3 * xt);
    out.valid = xt >= validity_threshold;
    return out;
}

double envelope_amplitude(double x) {
    return std::exp(1.5 * std::cbrt(x)) / (std::numbers::sqrt3 * std::numbers::pi);
}

double envelope_zero(long k) {
    const double xt = (std::numbers::pi / 2.0 + static_cast<double>(k) * std::numbers::pi) / (1.5 * std::numbers::sqrt3);
    return xt * xt * xt;
}

PhiEvaluator::PhiEvaluator(const SystemParams& params, double alpha_max, const PhiOptions& options)
    : params_(normalize(params)),
      options_(options),
      alpha_max_(alpha_max),
      xi_(0.0),
      c64_(params_),
      c128_(params_),
      c256_(params_) {
    if (!(alpha_max >= 0.0) || !std::isfinite(alpha_max)) {
        throw std::invalid_argument("PhiEvaluator: alpha_max must be finite and >= 0");
    }
    xi_ = c64_.xi();
    const bool all = options.precision == Precision::automatic;
    if (all || options.precision == Precision::bits64) l64_ = phi_ladder(c64_, alpha_max, options);
    if (all || options.precision == Precision::bits128) l128_ = phi_ladder(c128_, alpha_max, options);
    if (all || options.precision == Precision::bits256) l256_ = phi_ladder(c256_, alpha_max, options);
}

long PhiEvaluator::ladder_order(Precision precision) const {
    switch (precision) {
        case Precision::bits128: return l128_.order();
        case Precision::bits256: return l256_.order();
        case Precision::automatic:
        case Precision::bits64: break;
    }
    return l64_.order();
}

bool PhiEvaluator::controlled(const PhiValue& value) const {
    return std::isfinite(value.uncertainty()) && value.uncertainty() <= options_.tol * std::max(1.0, std::abs(value.phi));
}

PhiValue PhiEvaluator::evaluate_at(double alpha_abs, Precision precision) const {
    switch (precision) {
        case Precision::bits128:
            if (l128_.i_moments.empty()) throw std::logic_error("PhiEvaluator: 128-bit ladder not prepared");
            return phi_series(l128_, c128_, alpha_abs, options_.margin);
        case Precision::bits256:
            if (l256_.i_moments.empty()) throw std::logic_error("PhiEvaluator: 256-bit ladder not prepared");
            return phi_series(l256_, c256_, alpha_abs, options_.margin);
        case Precision::automatic:
        case Precision::bits64: break;
    }
    if (l64_.i_moments.empty()) throw std::logic_error("PhiEvaluator: 64-bit ladder not prepared");
    return phi_series(l64_, c64_, alpha_abs, options_.margin);
}

PhiValue PhiEvaluator::evaluate(double alpha_abs) const {
    if (options_.precision != Precision::automatic) {
        const PhiValue value = evaluate_at(alpha_abs, options_.precision);
        if (!controlled(value)) {
            throw PhiRangeError("Phi at |alpha| = " + std::to_string(alpha_abs) + " is not controllable at " +
                                    std::string(to_string(options_.precision)) + " bits",
                                max_safe_alpha(params_, options_.precision, options_));
        }
        return value;
    }
    for (Precision p : {Precision::bits64, Precision::bits128, Precision::bits256}) {
        const PhiValue value = evaluate_at(alpha_abs, p);
        const bool cancels = value.max_term > options_.cancellation_limit * std::abs(value.phi);
        if (controlled(value) && (!cancels || p == Precision::bits256)) return value;
    }
    throw PhiRangeError("Phi at |alpha| = " + std::to_string(alpha_abs) + " is not controllable at 256 bits",
                        max_safe_alpha(params_, Precision::bits256, options_));
}

long PhiEvaluator::default_split() const {
    constexpr long kMinSplit = 64;
    const long cutoff = c64_.pump() == 0 ? 1 : select_cutoff(c64_, options_.epsilon).order;
    const long order = l256_.i_moments.empty() ? l64_.order() : l256_.order();
    return std::max(cutoff, std::min(kMinSplit, order - options_.margin));
}

SplitValue PhiEvaluator::evaluate_split(double alpha_abs, long n_split) const {
    if (!l256_.i_moments.empty()) return phi_split(l256_, c256_, alpha_abs, n_split, options_.epsilon);
    return phi_split(l64_, c64_, alpha_abs, n_split, options_.epsilon);
}

double max_safe_alpha(const SystemParams& params, Precision precision, const PhiOptions& options) {
    if (precision == Precision::automatic) precision = Precision::bits256;
    PhiOptions fixed = options;
    fixed.precision = precision;
    const SystemParams prm = normalize(params);
    if (RecurrenceCoeffs<double>(prm).xi() == 0.0) return std::numeric_limits<double>::infinity();
    auto ok = [&](const PhiEvaluator& ev, double alpha) {
        const PhiValue v = ev.evaluate_at(alpha, precision);
        return std::isfinite(v.uncertainty()) && v.uncertainty() <= options.tol * std::max(1.0, std::abs(v.phi));
    };
    double lo = 0.0;
    double hi = 1.0;
    constexpr double kCeiling = 1e6;
    for (;;) {
        const PhiEvaluator ev(prm, hi, fixed);
        if (!ok(ev, hi)) break;
        lo = hi;
        hi *= 2.0;
        if (hi > kCeiling) return kCeiling;
    }
    const PhiEvaluator ev(prm, hi, fixed);
    while (hi - lo > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (ok(ev, mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t samples) {
    if (samples == 0) throw std::invalid_argument("linear_grid: need at least one sample");
    if (!(hi >= lo)) throw std::invalid_argument("linear_grid: hi must be >= lo");
    std::vector<double> grid(samples);
    if (samples == 1) {
        grid[0] = lo;
        return grid;
    }
    const double step = (hi - lo) / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) grid[i] = lo + step * static_cast<double>(i);
    grid.back() = hi;
    return grid;
}

namespace {

CharFnProfile profile_impl(const SystemParams& params, const std::vector<double>& grid, const PhiOptions& options,
                           bool parallel) {
    if (grid.empty()) throw std::invalid_argument("profile: empty |alpha| grid");
    const double alpha_max = *std::max_element(grid.begin(), grid.end());
    const PhiEvaluator evaluator(params, alpha_max, options);
    const std::size_t n = grid.size();
    CharFnProfile out;
    out.alpha_grid = grid;
    out.phi.resize(n);
    out.tail_bound.resize(n);
    out.rounding_bound.resize(n);
    out.max_term.resize(n);
    out.exceeds_one.resize(n);
    out.precision_bits.resize(n);
    out.envelope.resize(n);
    out.xi = evaluator.xi();
    std::vector<std::exception_ptr> errors(n);

    const auto body = [&](std::size_t i) {
        try {
            const PhiValue v = evaluator.evaluate(grid[i]);
            out.phi[i] = v.phi;
            out.tail_bound[i] = v.tail_bound;
            out.rounding_bound[i] = v.rounding_bound;
            out.max_term[i] = v.max_term;
            out.exceeds_one[i] = v.exceeds_one() ? 1 : 0;
            out.precision_bits[i] = v.precision_bits;
            const double x = grid[i] * grid[i] * out.xi;
            out.envelope[i] = x > 0.0 ? phi_asymp_envelope(x).value : std::nan("");
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) body(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i) body(i);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    const PhiValue last = evaluator.evaluate(alpha_max);
    out.n_trunc = last.n_trunc;
    out.n_split = evaluator.default_split();
    if (out.xi > 0.0) {
        const auto ladder = solve<double>(normalize(params), {.epsilon = options.epsilon, .min_order = out.n_split});
        out.i_n_split = ladder.i_moments[static_cast<std::size_t>(out.n_split)];
    }
    return out;
}

}  // namespace

CharFnProfile profile(const SystemParams& params, const std::vector<double>& grid, const PhiOptions& options) {
    return profile_impl(params, grid, options, true);
}

CharFnProfile profile_serial(const SystemParams& params, const std::vector<double>& grid, const PhiOptions& options) {
    return profile_impl(params, grid, options, false);
}

std::string_view to_string(PhiVerdict verdict) {
    switch (verdict) {
        case PhiVerdict::nonclassical: return "nonclassical";
        case PhiVerdict::not_detected: return "not_detected";
        case PhiVerdict::inapplicable: return "inapplicable";
    }
    return "?";
}

PhiNonclassicality nonclassicality_by_phi(const CharFnProfile& profile) {
    PhiNonclassicality out;
    for (std::size_t i = 0; i < profile.phi.size(); ++i) {
        if (profile.exceeds_one[i] != 0) {
            out.sampled = PhiVerdict::nonclassical;
            out.first_alpha = profile.alpha_grid[i];
            break;
        }
    }
    out.asymptotic = profile.xi > 0.0 ? PhiVerdict::nonclassical : PhiVerdict::inapplicable;
    return out;
}

}  // namespace qdcav
