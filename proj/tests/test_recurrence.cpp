#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "qdcav/criteria.hpp"
#include "qdcav/recurrence.hpp"
#include "reference_values.hpp"

using namespace qdcav;

namespace {

const SystemParams kUnit{1, 1, 1, 1, 0, 0};

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double factorial(long n) {
    double f = 1;
    for (long k = 2; k <= n; ++k) f *= static_cast<double>(k);
    return f;
}

}  // namespace

TEST_CASE("coefficients at unit rates") {
    const RecurrenceCoeffs<double> c(kUnit);
    CHECK(c.sigma(0) == 2.0);
    CHECK(c.sigma(1) == 3.0);
    CHECK(c.gamma_n(0) == 1.5);
    CHECK(c.lambda(0) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
    CHECK(c.beta(0) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(c.alpha(1) == doctest::Approx(-19.0 / 8.0).epsilon(1e-15));
    CHECK(c.xi() == 2.0);

    const RecurrenceCoeffs<Float256> w(kUnit);
    CHECK(abs(w.alpha(1) + Float256(19) / 8) < Float256(1e-70));
    CHECK(abs(w.beta(0) - Float256(3) / 4) < Float256(1e-70));
}

TEST_CASE("coefficient invariants") {
    for (const SystemParams& p : {preset("setA"), preset("setB"), SystemParams{0.3, 1, 2, 5, -1, 0.7}}) {
        const RecurrenceCoeffs<double> c(normalize(p));
        for (long n = 0; n < 200; ++n) {
            CHECK(c.beta(n) > 0);
            CHECK(c.lambda(n) > 0);
            CHECK(c.gamma_n(n) > 0);
            CHECK(c.sigma(n) > 0);
        }
        const long n = 1'000'000;
        const double nn = static_cast<double>(n);
        CHECK(c.alpha(n + 1) / (-nn * nn / (4 * c.g2())) == doctest::Approx(1.0).epsilon(1e-4));
        CHECK(c.beta(n) / (c.pump() / 2 * nn) == doctest::Approx(1.0).epsilon(1e-4));
    }
}

TEST_CASE("dephasing enters only through the coherence decay") {
    const RecurrenceCoeffs<double> a({1, 1, 1, 1, 0, 0});
    const RecurrenceCoeffs<double> b({1, 1, 1, 1, 0, 2});
    CHECK(b.gamma_n(3) == a.gamma_n(3) + 1.0);
    CHECK(b.sigma(3) == a.sigma(3));
    CHECK(b.beta(3) == a.beta(3));
    CHECK(b.lambda(3) != a.lambda(3));
}

TEST_CASE("C/D sequences") {
    const RecurrenceCoeffs<double> c(kUnit);
    const auto s = cd_sequences(c, 2);
    CHECK(s.c[0] == 0.0);
    CHECK(s.c[1] == 1.0);
    CHECK(s.d[0] == 1.0);
    CHECK(s.d[1] == 0.0);
    CHECK(s.c[2] == doctest::Approx(-19.0 / 8.0).epsilon(1e-15));
    CHECK(s.d[2] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK_THROWS_AS(cd_sequences(c, 1), std::invalid_argument);
}

TEST_CASE("C/D ratios do not depend on the rescaling schedule") {
    const RecurrenceCoeffs<double> c(normalize(preset("setB")));
    const auto every = cd_sequences(c, 400, 1);
    const auto sparse = cd_sequences(c, 400, 16);
    CHECK(every.rescale_count > sparse.rescale_count);
    for (long n = 2; n <= 400; n += 7) CHECK(every.ratio(n) == doctest::Approx(sparse.ratio(n)).epsilon(1e-13));

    // A joint scale of 1e-300 leaves every ratio unchanged.
    for (long n = 2; n <= 400; n += 7) {
        const double sc = sparse.c[static_cast<std::size_t>(n)] * 1e-300;
        const double sd = sparse.d[static_cast<std::size_t>(n)] * 1e-300;
        CHECK(sd / sc == doctest::Approx(sparse.ratio(n)).epsilon(1e-15));
    }
}

TEST_CASE("C/D overflow is reported with the failing order") {
    // At p = 1e200 the factor (1 + Lambda_0)/Lambda_0 alone exceeds the double range.
    const RecurrenceCoeffs<double> c({1, 1, 1, 1e200, 0, 0});
    try {
        cd_sequences(c, 100);
        FAIL("expected overflow");
    } catch (const OverflowError& e) {
        CHECK(e.order() == 2);
    }
    CHECK_THROWS_AS(estimate_i1(c), OverflowError);
}

TEST_CASE("I1 estimate") {
    SUBCASE("no pump gives zero intensity") {
        const auto e = estimate_i1(RecurrenceCoeffs<double>({1, 1, 1, 0, 0, 0}));
        CHECK(e.value == 0.0);
    }
    SUBCASE("set B against the Liouvillian steady state") {
        const auto e = estimate_i1(RecurrenceCoeffs<double>(normalize(preset("setB"))));
        CHECK(rel(e.value, reference::kSetB_p1e11.i[1]) < 1e-6);
        CHECK(e.bracket.contains(e.value));
        CHECK(e.bracket.lower <= e.bracket.upper);
        CHECK(e.bracket.width() <= 1e-10 * e.value);
    }
    SUBCASE("oracle intensity lies inside the bracket") {
        struct Case {
            SystemParams p;
            double i1;
        };
        for (const Case& k : {Case{preset("setA", 1e10), reference::kSetA_p1e10.i[1]},
                              Case{preset("setA", 1e11), reference::kSetA_p1e11.i[1]},
                              Case{preset("setB", 1e11), reference::kSetB_p1e11.i[1]}}) {
            const auto e = estimate_i1(RecurrenceCoeffs<double>(normalize(k.p)));
            const double slack = 4e-16 * k.i1;
            CHECK(e.bracket.lower - slack <= k.i1);
            CHECK(k.i1 <= e.bracket.upper + slack);
        }
    }
    SUBCASE("non-convergence carries the last bracket") {
        try {
            estimate_i1(RecurrenceCoeffs<double>(normalize(preset("setB"))), {1e-10, 10.0, 6});
            FAIL("expected ConvergenceError");
        } catch (const ConvergenceError& e) {
            CHECK(e.order() == 6);
            CHECK(e.lower() <= e.upper());
            CHECK(e.upper() > 0.0);
        }
    }
    SUBCASE("invalid options") {
        const RecurrenceCoeffs<double> c(kUnit);
        CHECK_THROWS_AS(estimate_i1(c, {0.0}), std::invalid_argument);
        CHECK_THROWS_AS(estimate_i1(c, {1e-10, -1.0}), std::invalid_argument);
    }
}

TEST_CASE("ladder without pump is the vacuum") {
    const auto l = solve<double>(SystemParams{1, 1, 1, 0, 0, 0});
    CHECK(l.i_moments[0] == 1.0);
    for (std::size_t n = 1; n < l.i_moments.size(); ++n) CHECK(l.i_moments[n] == 0.0);
}

TEST_CASE("set A ladder matches the Liouvillian moments") {
    SolveOptions so;
    so.min_order = 20;
    const auto l = solve<double>(normalize(preset("setA")), so);
    CHECK(l.order() >= 20);
    CHECK(l.i_moments[0] == 1.0);
    for (long n = 1; n <= 10; ++n) CHECK(rel(l[n], reference::kSetA_p1e11.i[static_cast<std::size_t>(n)]) < 1e-6);
}

TEST_CASE("extended precision agrees with double") {
    const SystemParams p = normalize(preset("setB"));
    const auto d = solve<double>(p);
    const auto q = solve<Float128>(p);
    const auto o = solve<Float256>(p);
    for (long n = 1; n <= 10; ++n) {
        CHECK(rel(to_double(q[n]), d[n]) < 1e-12);
        CHECK(rel(to_double(o[n]), d[n]) < 1e-12);
    }
}

TEST_CASE("literal forward iteration loses positivity and is truncated") {
    SolveOptions so;
    so.method = LadderMethod::forward;
    so.min_order = 200;
    const auto l = solve<double>(normalize(preset("setA")), so);
    CHECK(l.truncated);
    CHECK(l.first_negative > 2);
    CHECK(l.first_negative < 200);
    CHECK(l.order() == l.first_negative - 1);
    for (double v : l.i_moments) CHECK(v >= 0.0);
    // The leading entries still carry the correct intensity.
    CHECK(rel(l[1], reference::kSetA_p1e11.i[1]) < 1e-6);
    CHECK(rel(l[2], reference::kSetA_p1e11.i[2]) < 1e-4);
}

TEST_CASE("large pumping approaches the thermal ladder") {
    const auto l = solve<double>(SystemParams{1, 1, 1, 1e4, 0, 0});
    for (long n = 2; n <= 4; ++n) {
        const double ratio = l[n] / (factorial(n) * std::pow(l[1], static_cast<double>(n)));
        CHECK(std::abs(ratio - 1.0) < 0.05);
    }
}

TEST_CASE("ratio bounds") {
    SUBCASE("no pump") {
        const RecurrenceCoeffs<double> c({1, 1, 1, 0, 0, 0});
        for (long n : {1L, 5L, 50L}) {
            const auto b = ratio_bounds(c, n, 0.1);
            CHECK(b.upper_bounded);
            CHECK(b.upper == 0.0);
        }
    }
    SUBCASE("upper bound is unbounded while alpha is nonnegative") {
        const RecurrenceCoeffs<double> c({100, 1, 0.01, 10, 0, 0});
        CHECK(c.alpha(1) >= 0.0);
        CHECK_FALSE(ratio_bounds(c, 0, 0.1).upper_bounded);
    }
    SUBCASE("both bounds approach xi/n") {
        for (const SystemParams& p : {kUnit, normalize(preset("setA")), normalize(preset("setB"))}) {
            const RecurrenceCoeffs<double> c(p);
            const long n = 1'000'000;
            const auto b = ratio_bounds(c, n, 0.1);
            CHECK(b.lower_valid);
            CHECK(b.upper / (c.xi() / static_cast<double>(n)) == doctest::Approx(1.0).epsilon(1e-3));
            CHECK(b.lower / (c.xi() / static_cast<double>(n)) == doctest::Approx(1.0).epsilon(1e-3));
        }
    }
    SUBCASE("set B: bounds meet early, the asymptote only late") {
        const RecurrenceCoeffs<double> c(normalize(preset("setB")));
        const auto b10 = ratio_bounds(c, 10, 0.1);
        CHECK((b10.upper - b10.lower) / b10.upper < 0.01);
        CHECK(c.xi() / 10.0 > 3.0 * b10.upper);
        const auto b1000 = ratio_bounds(c, 1000, 0.1);
        CHECK(std::abs(c.xi() / 1000.0 / b1000.upper - 1.0) < 0.1);
    }
    SUBCASE("solved ratios lie inside the bracket past xi/eps") {
        const RecurrenceCoeffs<double> c(normalize(preset("setB", 1e12)));
        const auto l = solve(c);
        const long start = static_cast<long>(std::ceil(c.xi() / 0.1));
        for (long n = start; n + 1 < l.order(); ++n) {
            const auto b = ratio_bounds(c, n, 0.1);
            REQUIRE(b.lower_valid);
            const double r = l.ratios[static_cast<std::size_t>(n)];
            CHECK(r >= b.lower * (1 - 1e-10));
            CHECK(r <= b.upper * (1 + 1e-10));
        }
    }
}

TEST_CASE("next-to-leading-order coefficient series") {
    const RecurrenceCoeffs<double> c(kUnit);
    for (long n : {1L, 3L, 10L, 100L}) {
        const double nn = static_cast<double>(n);
        const auto s = asymptotic_coeff_series(c, n);
        CHECK(s.alpha_nlo == doctest::Approx(-nn * nn / 4 - 2.375 * nn).epsilon(1e-14));
        CHECK(s.beta_nlo == doctest::Approx((nn + 2) / 2).epsilon(1e-14));
    }
    double previous = 1e300;
    for (long n : {100L, 1000L, 10000L, 100000L}) {
        const auto s = asymptotic_coeff_series(c, n);
        const double a_err = std::abs(s.alpha_nlo - c.alpha(n + 1)) / std::abs(c.alpha(n + 1));
        const double b_err = std::abs(s.beta_nlo - c.beta(n)) / c.beta(n);
        CHECK(a_err < previous);
        CHECK(b_err < 10.0 / static_cast<double>(n * n) + 1e-15);
        previous = a_err;
    }
    CHECK(previous < 1e-4);
    CHECK_THROWS_AS(asymptotic_coeff_series(c, 0), std::invalid_argument);
}

TEST_CASE("cutoff selection") {
    const RecurrenceCoeffs<double> unit(kUnit);
    const auto a = select_cutoff(unit, 0.01);
    CHECK(a.order >= 200);
    CHECK(a.monotone_tail);
    CHECK_FALSE(select_cutoff(unit, 2.0).monotone_tail);
    CHECK_THROWS_AS(select_cutoff(unit, 0.0), std::invalid_argument);

    const RecurrenceCoeffs<double> b(normalize(preset("setB")));
    const auto cut = select_cutoff(b, 0.1);
    const auto l = solve(b);
    REQUIRE(l.order() > cut.order + 1);
    CHECK(l[cut.order + 1] / l[cut.order] < 0.1);
    for (long n = cut.order; n + 1 < l.order(); ++n) CHECK(l.ratios[static_cast<std::size_t>(n)] < 1.0);
}

TEST_CASE("large-pump reference") {
    const SystemParams p{1, 1, 1, 1e4, 0, 0};
    const auto r1 = large_p_reference(p, 1);
    CHECK(r1.value == doctest::Approx(2e-4).epsilon(1e-12));
    CHECK(r1.in_regime);
    CHECK(large_p_reference(p, 0).value == 1.0);
    CHECK_FALSE(large_p_reference({1, 1, 1, 10, 0, 0}, 1).in_regime);
    CHECK_THROWS_AS(large_p_reference({1, 1, 1, 0, 0, 0}, 1), std::domain_error);
    CHECK(large_p_reference({1, 1, 1, std::numeric_limits<double>::infinity(), 0, 0}, 2).value == 0.0);

    // The solver's intensity is twice the reference value (4 g^2/(kappa p)),
    // so the second moment is four times the reference.
    const auto l = solve<double>(p);
    CHECK(l[1] / r1.value == doctest::Approx(2.0).epsilon(2e-3));
    CHECK(l[2] / large_p_reference(p, 2).value == doctest::Approx(4.0).epsilon(5e-3));
}

TEST_CASE("every ladder satisfies the recurrence") {
    for (const SystemParams& p : {normalize(preset("setA")), normalize(preset("setB", 1e12)), kUnit}) {
        const RecurrenceCoeffs<double> c(p);
        const auto l = solve(c);
        for (long n = 0; n + 2 < l.order(); ++n) {
            const double a = c.alpha(n + 1) * l[n + 1];
            const double b = c.beta(n) * l[n];
            const double scale = std::max({std::abs(a), std::abs(b), l[n + 2]});
            if (scale < 1e-290) break;
            // I_1 is the C/D estimate, not the backward-sweep value; their
            // recorded mismatch enters the first residual only.
            const double allowance = n == 0 ? l.i1_mismatch * std::abs(a) : 0.0;
            CHECK(std::abs(l[n + 2] - a - b) <= 64 * 2.2e-16 * scale + allowance);
        }
    }
}

TEST_CASE("ladder is invariant under kappa normalization") {
    for (const char* name : {"setA", "setB"}) {
        const auto raw = solve<double>(preset(name));
        const auto norm = solve<double>(normalize(preset(name)));
        REQUIRE(raw.order() == norm.order());
        for (long n = 1; n <= 10; ++n) CHECK(rel(raw[n], norm[n]) < 1e-12);
    }
}

TEST_CASE("no ladder over the sweep grid is thermal") {
    for (const char* name : {"setA", "setB"}) {
        for (double p : log_grid(1e8, 1e14, 25)) {
            const auto l = solve<double>(normalize(preset(name, p)));
            bool all_thermal = true;
            for (long n = 1; n <= 5; ++n) {
                const double thermal = factorial(n) * std::pow(l[1], static_cast<double>(n));
                if (std::abs(l[n] / thermal - 1.0) > 1e-3) all_thermal = false;
            }
            CHECK_FALSE(all_thermal);
        }
    }
}
