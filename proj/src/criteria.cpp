#include "qdcav/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qdcav {

namespace {

void require_length(std::size_t size, long index, const char* what) {
    if (index < 0 || static_cast<std::size_t>(index) >= size) {
        throw std::out_of_range(std::string(what) + " needs " + std::to_string(index + 1) + " entries, have " +
                                std::to_string(size));
    }
}

CriterionValue ratio_criterion(const std::vector<double>& m, long n, const char* name) {
    if (n < 1) throw std::invalid_argument(std::string(name) + ": order must be >= 1");
    require_length(m.size(), 2 * n, name);
    CriterionValue out;
    const double base = m[static_cast<std::size_t>(n)];
    if (!(base > 0.0)) {
        out.note = "vacuum";
        return out;
    }
    out.value = m[static_cast<std::size_t>(2 * n)] / (base * base);
    out.verdict = out.value < 1.0 ? Verdict::nonclassical : Verdict::not_detected;
    return out;
}

std::size_t max_order(const SweepOrders& orders) {
    long need = 2;
    for (long n : orders.field) need = std::max(need, 2 * n);
    for (long n : orders.joint) need = std::max(need, 2 * n + 1);
    for (long n : orders.entanglement) need = std::max(need, 2 * n + 2);
    return static_cast<std::size_t>(need);
}

std::vector<CriteriaRow> evaluate_point(const SystemParams& templ, double p, const SweepOrders& orders,
                                        const SweepOptions& options, bool& failed) {
    std::vector<CriteriaRow> rows;
    auto push = [&](long n, CriterionId id, const CriterionValue& v) {
        rows.push_back({p, n, id, v.value, v.verdict, v.note});
    };
    SystemParams prm = templ;
    prm.p = p;
    try {
        SolveOptions so = options.solve;
        so.min_order = std::max<long>(so.min_order, static_cast<long>(max_order(orders)));
        const FullMoments full = dispatch_precision(options.precision, [&]<class Real>() {
            return solve_full<Real>(prm, so);
        });
        for (long n : orders.field) push(n, CriterionId::field, field_criterion(full, n));
        for (long n : orders.joint) push(n, CriterionId::joint, joint_criterion(full, n));
        for (long n : orders.entanglement) push(n, CriterionId::entanglement, entanglement_criterion(full, n));
        failed = false;
    } catch (const std::exception& e) {
        rows.clear();
        CriterionValue bad;
        bad.note = e.what();
        for (long n : orders.field) push(n, CriterionId::field, bad);
        for (long n : orders.joint) push(n, CriterionId::joint, bad);
        for (long n : orders.entanglement) push(n, CriterionId::entanglement, bad);
        failed = true;
    }
    return rows;
}

CriteriaReport sweep_impl(const SystemParams& templ, const std::vector<double>& p_grid, const SweepOrders& orders,
                          const SweepOptions& options, bool parallel) {
    if (p_grid.empty()) throw std::invalid_argument("sweep: empty p grid");
    if (orders.field.empty() && orders.joint.empty() && orders.entanglement.empty()) {
        throw std::invalid_argument("sweep: empty orders list");
    }
    SystemParams probe = templ;
    probe.p = 0.0;
    validate(probe);

    std::vector<std::vector<CriteriaRow>> blocks(p_grid.size());
    std::vector<char> failed(p_grid.size(), 0);
    const auto body = [&](std::size_t i) {
        bool f = false;
        blocks[i] = evaluate_point(templ, p_grid[i], orders, options, f);
        failed[i] = f ? 1 : 0;
    };
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(p_grid.size()); ++i) body(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < p_grid.size(); ++i) body(i);
    }
    CriteriaReport report;
    report.p_grid = p_grid;
    report.orders = orders;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        report.rows.insert(report.rows.end(), blocks[i].begin(), blocks[i].end());
        report.failed_points += failed[i];
    }
    return report;
}

// |moment|; R_n enters the minor through its modulus.
double moment_modulus(const FullMoments& full, MomentRef ref) {
    switch (ref.kind) {
        case MomentKind::i:
            require_length(full.i_moments().size(), ref.n, "minor_2x2 (I)");
            return full.i_moments()[static_cast<std::size_t>(ref.n)];
        case MomentKind::b:
            require_length(full.b_moments.size(), ref.n, "minor_2x2 (B)");
            return full.b_moments[static_cast<std::size_t>(ref.n)];
        case MomentKind::r:
            require_length(full.r_moments.size(), ref.n, "minor_2x2 (R)");
            return std::abs(full.r_moments[static_cast<std::size_t>(ref.n)]);
    }
    return 0.0;
}

}  // namespace

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::nonclassical: return "nonclassical";
        case Verdict::not_detected: return "not_detected";
        case Verdict::undefined: return "undefined";
    }
    return "?";
}

std::string_view to_string(CriterionId id) {
    switch (id) {
        case CriterionId::field: return "field";
        case CriterionId::joint: return "joint";
        case CriterionId::entanglement: return "entanglement";
    }
    return "?";
}

CriterionValue field_criterion(const FullMoments& full, long n) {
    CriterionValue out = ratio_criterion(full.i_moments(), n, "field_criterion");
    if (n == 1 && out.verdict == Verdict::nonclassical) out.note = "sub_poissonian";
    return out;
}

CriterionValue joint_criterion(const FullMoments& full, long n) {
    return ratio_criterion(full.b_moments, n, "joint_criterion");
}

CriterionValue entanglement_criterion(const FullMoments& full, long n) {
    if (n < 0) throw std::invalid_argument("entanglement_criterion: order must be >= 0");
    require_length(full.b_moments.size(), 2 * n + 1, "entanglement_criterion");
    CriterionValue out;
    const double r = std::abs(full.r_moments[static_cast<std::size_t>(n)]);
    out.value = full.b_moments[static_cast<std::size_t>(2 * n + 1)] - r * r;
    out.verdict = out.value < 0.0 ? Verdict::nonclassical : Verdict::not_detected;
    if (n == 0 && out.verdict == Verdict::nonclassical) out.note = "entangled";
    return out;
}

double minor_2x2(const FullMoments& full, MomentRef d0, MomentRef d1, MomentRef off) {
    if (d0.kind == MomentKind::r || d1.kind == MomentKind::r) {
        throw std::invalid_argument("minor_2x2: diagonal entries must be real moments (I or B)");
    }
    const double o = moment_modulus(full, off);
    return moment_modulus(full, d0) * moment_modulus(full, d1) - o * o;
}

CriteriaReport sweep(const SystemParams& templ, const std::vector<double>& p_grid, const SweepOrders& orders,
                     const SweepOptions& options) {
    return sweep_impl(templ, p_grid, orders, options, true);
}

CriteriaReport sweep_serial(const SystemParams& templ, const std::vector<double>& p_grid, const SweepOrders& orders,
                            const SweepOptions& options) {
    return sweep_impl(templ, p_grid, orders, options, false);
}

std::vector<double> log_grid(double lo, double hi, std::size_t samples) {
    if (samples == 0) throw std::invalid_argument("log_grid: need at least one sample");
    if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("log_grid: need 0 < lo <= hi");
    std::vector<double> grid(samples);
    if (samples == 1) {
        grid[0] = lo;
        return grid;
    }
    const double a = std::log10(lo), b = std::log10(hi);
    for (std::size_t i = 0; i < samples; ++i) {
        grid[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

}  // namespace qdcav
