#include "figures.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

namespace qdcav::figures {

namespace {

MomentLadder<double> ladder_for(const SystemParams& params, const NumericOptions& numeric) {
    const SystemParams prm = normalize(validate(params));
    return dispatch_precision(numeric.precision, [&]<class Real>() {
        return ladder_to_double(solve(RecurrenceCoeffs<Real>(prm), numeric.solve));
    });
}

std::string join(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != 0) out += ';';
        out += format_number(values[i]);
    }
    return out;
}

std::string join(const std::vector<long>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i != 0) out += ';';
        out += std::to_string(values[i]);
    }
    return out;
}

void describe_numeric(Table& t, const NumericOptions& numeric) { describe_solve(t, numeric.solve, numeric.precision); }

// Evaluates body(i) for i < n over OpenMP threads and rethrows the first
// failure in index order.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

double factorial(long n) {
    double f = 1.0;
    for (long k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

}  // namespace

Table fig2(const Fig2Options& options, const NumericOptions& numeric) {
    if (options.p_over_kappa.empty()) throw std::invalid_argument("fig 2: empty p/kappa list");
    const std::vector<double> g_grid = log_grid(options.g_min, options.g_max, static_cast<std::size_t>(options.points));
    Table t;
    t.kind = "fig2";
    t.set("units", std::string("kappa"));
    t.set("gamma_over_kappa", 1.0);
    t.set("delta", 0.0);
    t.set("p_over_kappa", join(options.p_over_kappa));
    t.set("g_over_kappa_grid_choice", "log " + format_number(options.g_min) + " .. " + format_number(options.g_max) +
                                          ", " + std::to_string(options.points) + " points");
    describe_numeric(t, numeric);
    t.columns = {"p_over_kappa", "g_over_kappa", "I1"};

    const std::size_t ng = g_grid.size();
    std::vector<double> i1(options.p_over_kappa.size() * ng);
    parallel_for(i1.size(), [&](std::size_t k) {
        const SystemParams prm{g_grid[k % ng], 1.0, 1.0, options.p_over_kappa[k / ng], 0.0, 0.0};
        i1[k] = ladder_for(prm, numeric)[1];
    });
    for (std::size_t k = 0; k < i1.size(); ++k) t.add_row({options.p_over_kappa[k / ng], g_grid[k % ng], i1[k]});
    return t;
}

Table fig3(const Fig3Options& options, const NumericOptions& numeric) {
    if (options.g_over_kappa.empty() || options.orders.empty()) {
        throw std::invalid_argument("fig 3: empty g/kappa or order list");
    }
    const std::vector<double> p_grid = log_grid(options.p_min, options.p_max, static_cast<std::size_t>(options.points));
    const long max_order = *std::max_element(options.orders.begin(), options.orders.end());
    Table t;
    t.kind = "fig3";
    t.set("units", std::string("kappa"));
    t.set("gamma_over_kappa", 1.0);
    t.set("delta", 0.0);
    t.set("g_over_kappa", join(options.g_over_kappa));
    t.set("orders", join(options.orders));
    t.set("p_over_kappa_grid_choice", "log " + format_number(options.p_min) + " .. " + format_number(options.p_max) +
                                          ", " + std::to_string(options.points) + " points");
    describe_numeric(t, numeric);
    t.columns = {"g_over_kappa", "p_over_kappa", "n", "normalized_moment"};

    const std::size_t np = p_grid.size();
    const std::size_t no = options.orders.size();
    std::vector<double> values(options.g_over_kappa.size() * np * no);
    parallel_for(options.g_over_kappa.size() * np, [&](std::size_t k) {
        const SystemParams prm{options.g_over_kappa[k / np], 1.0, 1.0, p_grid[k % np], 0.0, 0.0};
        NumericOptions local = numeric;
        local.solve.min_order = std::max(local.solve.min_order, max_order + 1);
        const auto ladder = ladder_for(prm, local);
        for (std::size_t j = 0; j < no; ++j) {
            const long n = options.orders[j];
            values[k * no + j] = g_n_zero(ladder.i_moments, n) / factorial(n);
        }
    });
    for (std::size_t k = 0; k < options.g_over_kappa.size() * np; ++k) {
        for (std::size_t j = 0; j < no; ++j) {
            t.add_row({options.g_over_kappa[k / np], p_grid[k % np], options.orders[j], values[k * no + j]});
        }
    }
    return t;
}

Table criteria_figure(int id, const SweepFigureOptions& options, const NumericOptions& numeric) {
    SweepOrders orders;
    orders.field.clear();
    orders.joint.clear();
    orders.entanglement.clear();
    std::vector<long>* slot = nullptr;
    std::vector<long> defaults;
    switch (id) {
        case 4: slot = &orders.field; defaults = {1, 3, 5, 10}; break;
        case 5: slot = &orders.joint; defaults = {1, 3, 5}; break;
        case 6: slot = &orders.entanglement; defaults = {0}; break;
        default: throw std::invalid_argument("criteria_figure: id must be 4, 5 or 6");
    }
    *slot = options.orders.empty() ? defaults : options.orders;
    const std::vector<double> grid = log_grid(options.p_min, options.p_max, static_cast<std::size_t>(options.points));

    Table t;
    t.kind = "fig" + std::to_string(id);
    t.set("units", std::string("si"));
    t.set("sets", std::string("setA;setB"));
    t.set("orders", join(*slot));
    t.set("p_grid_choice", "log " + format_number(options.p_min) + " .. " + format_number(options.p_max) + ", " +
                               std::to_string(options.points) + " points");
    describe_numeric(t, numeric);
    t.columns = {"set", "p", "order", "criterion", "value", "flag"};
    long failed = 0;
    for (const char* name : {"setA", "setB"}) {
        const CriteriaReport report = sweep(preset(name), grid, orders, {numeric.solve, numeric.precision});
        failed += report.failed_points;
        for (const auto& row : report.rows) {
            t.add_row({std::string(name), row.p, row.order, std::string(to_string(row.criterion)), row.value,
                       std::string(to_string(row.verdict))});
        }
    }
    t.set("failed_points", failed);
    return t;
}

Table fig7(const Fig7Options& options, const NumericOptions& numeric) {
    const std::vector<double> grid =
        linear_grid(options.alpha_min, options.alpha_max, static_cast<std::size_t>(options.samples));
    PhiOptions phi;
    phi.precision = options.precision;
    phi.epsilon = numeric.solve.epsilon;
    phi.margin = numeric.solve.margin;
    Table t;
    t.kind = "fig7";
    t.set("units", std::string("si"));
    t.set("sets", std::string("setA;setB"));
    t.set("p", options.p);
    t.set("alpha_grid_choice", "linear " + format_number(options.alpha_min) + " .. " +
                                   format_number(options.alpha_max) + ", " + std::to_string(options.samples) +
                                   " samples");
    t.set("precision", std::string(to_string(options.precision)));
    t.set("phi_tol", phi.tol);
    t.set("cancellation_limit", phi.cancellation_limit);
    t.set("eps", phi.epsilon);
    t.set("margin", phi.margin);
    t.columns = {"set", "alpha", "phi", "tail_bound", "rounding_bound", "precision_bits", "exceeds_one"};
    for (const char* name : {"setA", "setB"}) {
        const CharFnProfile prof = profile(preset(name, options.p), grid, phi);
        const PhiNonclassicality verdict = nonclassicality_by_phi(prof);
        t.set(std::string(name) + "_verdict", std::string(to_string(verdict.sampled)));
        t.set(std::string(name) + "_first_alpha_exceeding_one", verdict.first_alpha);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            t.add_row({std::string(name), grid[i], prof.phi[i], prof.tail_bound[i], prof.rounding_bound[i],
                       static_cast<long>(prof.precision_bits[i]), static_cast<long>(prof.exceeds_one[i])});
        }
    }
    return t;
}

Table fig8(const Fig8Options& options, const NumericOptions& numeric) {
    const SystemParams prm = normalize(preset("setB", options.p));
    const RecurrenceCoeffs<double> coeffs(prm);
    const double eps = numeric.solve.epsilon;
    std::vector<long> orders;
    for (double v : log_grid(options.n_min, options.n_max, static_cast<std::size_t>(options.points))) {
        const long n = std::max(1L, std::lround(v));
        if (orders.empty() || orders.back() != n) orders.push_back(n);
    }
    NumericOptions local = numeric;
    local.solve.min_order = std::max(local.solve.min_order, orders.back() + 1);
    const MomentLadder<double> ladder = ladder_for(prm, local);
    const long reliable = ladder.order() - local.solve.margin;

    Table t;
    t.kind = "fig8";
    t.set("units", std::string("si"));
    t.set("set", std::string("setB"));
    t.set("p", options.p);
    t.set("xi", coeffs.xi());
    t.set("n_grid_choice", "log " + format_number(options.n_min) + " .. " + format_number(options.n_max) + ", " +
                               std::to_string(options.points) + " points rounded to distinct integers");
    describe_numeric(t, local);
    t.columns = {"n", "lower", "upper", "lower_valid", "nlo_ratio", "asymptotic_ratio", "solved_ratio"};
    for (long n : orders) {
        const RatioBounds<double> b = ratio_bounds(coeffs, n, eps);
        const CoeffSeries<double> s = asymptotic_coeff_series(coeffs, n);
        Cell upper = std::monostate{};
        if (b.upper_bounded) upper = b.upper;
        Cell nlo = std::monostate{};
        if (s.alpha_nlo < 0.0) nlo = s.beta_nlo / -s.alpha_nlo;
        Cell solved = std::monostate{};
        if (n < reliable) solved = ladder.ratios[static_cast<std::size_t>(n)];
        t.add_row({n, b.lower, upper, static_cast<long>(b.lower_valid ? 1 : 0), nlo, coeffs.xi() / static_cast<double>(n),
                   solved});
    }
    return t;
}

}  // namespace qdcav::figures
