#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <algorithm>

#include "qdcav/criteria.hpp"

using namespace qdcav;

namespace {

// Verdicts of one (criterion, order) series along the sweep grid.
std::vector<Verdict> series(const CriteriaReport& r, CriterionId id, long n) {
    std::vector<Verdict> out;
    for (const auto& row : r.rows) {
        if (row.criterion == id && row.order == n) out.push_back(row.verdict);
    }
    return out;
}

int flips(const std::vector<Verdict>& v) {
    int count = 0;
    for (std::size_t i = 1; i < v.size(); ++i) count += v[i] != v[i - 1] ? 1 : 0;
    return count;
}

long count(const std::vector<Verdict>& v, Verdict x) { return std::count(v.begin(), v.end(), x); }

FullMoments from_i(std::vector<double> i) {
    FullMoments f;
    f.ladder.i_moments = std::move(i);
    return f;
}

}  // namespace

TEST_CASE("first-order field criterion is the second-order correlation") {
    for (double p : log_grid(1e9, 1e13, 9)) {
        const FullMoments f = solve_full(normalize(preset("setA", p)));
        const CriterionValue v = field_criterion(f, 1);
        CHECK(v.value == doctest::Approx(g_n_zero(f.i_moments(), 2)).epsilon(1e-14));
        CHECK((v.verdict == Verdict::nonclassical) == (mandel_q(f.i_moments()) < 0.0));
        CHECK((v.note == "sub_poissonian") == (v.verdict == Verdict::nonclassical));
    }
}

TEST_CASE("thermal and coherent reference values") {
    const FullMoments th = from_i(thermal_ladder(0.4, 12));
    const FullMoments coh = from_i(coherent_ladder(0.4, 12));
    for (long n = 1; n <= 6; ++n) {
        double central = 1.0;   // (2n)! / (n!)^2
        for (long k = 1; k <= n; ++k) central *= static_cast<double>(n + k) / static_cast<double>(k);
        CHECK(field_criterion(th, n).value == doctest::Approx(central).epsilon(1e-13));
        CHECK(field_criterion(th, n).verdict == Verdict::not_detected);
        CHECK(field_criterion(coh, n).value == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("set A pump sweep") {
    const auto r = sweep(preset("setA"), log_grid(1e8, 1e14, 121), {{1, 3, 5}, {1, 3, 5}, {0}});
    CHECK(r.failed_points == 0);
    CHECK(r.rows.size() == 121 * 7);
    for (long n : {1L, 3L, 5L}) {
        const auto v = series(r, CriterionId::field, n);
        CHECK(v.front() == Verdict::nonclassical);
        CHECK(v.back() == Verdict::not_detected);
        CHECK(flips(v) == 1);
    }
    CHECK(count(series(r, CriterionId::joint, 1), Verdict::nonclassical) == 0);
    CHECK(count(series(r, CriterionId::joint, 3), Verdict::nonclassical) > 0);
    CHECK(count(series(r, CriterionId::joint, 5), Verdict::nonclassical) > 0);
    const auto ent = series(r, CriterionId::entanglement, 0);
    CHECK(ent.front() == Verdict::nonclassical);
    CHECK(ent.back() == Verdict::not_detected);
    CHECK(flips(ent) == 1);
}

TEST_CASE("set B pump sweep") {
    const auto r = sweep(preset("setB"), log_grid(1e8, 1e14, 121), {{1, 3, 5, 10}, {1, 3, 5}, {0}});
    CHECK(r.failed_points == 0);
    for (long n : {1L, 3L, 5L}) {
        CHECK(count(series(r, CriterionId::field, n), Verdict::nonclassical) == 0);
        CHECK(count(series(r, CriterionId::joint, n), Verdict::nonclassical) == 0);
    }
    CHECK(count(series(r, CriterionId::field, 10), Verdict::nonclassical) > 0);
    CHECK(count(series(r, CriterionId::entanglement, 0), Verdict::nonclassical) == 0);
}

TEST_CASE("no pump") {
    const FullMoments f = solve_full(SystemParams{1, 1, 1, 0, 0, 0});
    const CriterionValue j = joint_criterion(f, 1);
    CHECK(j.verdict == Verdict::undefined);
    CHECK(std::isnan(j.value));
    CHECK(j.note == "vacuum");
    CHECK(field_criterion(f, 2).verdict == Verdict::undefined);
    const CriterionValue e = entanglement_criterion(f, 0);
    CHECK(e.value == 0.0);
    CHECK(e.verdict == Verdict::not_detected);
}

TEST_CASE("short ladders and bad orders") {
    const FullMoments f = from_i({1.0, 0.5, 0.3});
    CHECK_NOTHROW(field_criterion(f, 1));
    CHECK_THROWS_AS(field_criterion(f, 2), std::out_of_range);
    CHECK_THROWS_AS(joint_criterion(f, 1), std::out_of_range);
    CHECK_THROWS_AS(entanglement_criterion(f, 0), std::out_of_range);
    CHECK_THROWS_AS(field_criterion(f, 0), std::invalid_argument);
    CHECK_THROWS_AS(entanglement_criterion(f, -1), std::invalid_argument);
}

TEST_CASE("sweep argument checks") {
    CHECK_THROWS_AS(sweep(preset("setA"), {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(sweep(preset("setA"), {1e10}, SweepOrders{{}, {}, {}}), std::invalid_argument);
    CHECK_THROWS_AS(sweep(SystemParams{1, 0, 1, 1, 0, 0}, {1e10}, {}), ParamError);
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), std::invalid_argument);
    CHECK_THROWS_AS(log_grid(1.0, 2.0, 0), std::invalid_argument);
}

TEST_CASE("a singleton sweep reproduces direct evaluation") {
    const SystemParams prm = preset("setA", 1e10);
    const auto r = sweep(prm, {1e10}, {{1, 2}, {3}, {0, 1}});
    REQUIRE(r.rows.size() == 5);
    const FullMoments f = solve_full(prm, SolveOptions{});
    CHECK(r.rows[0].value == doctest::Approx(field_criterion(f, 1).value).epsilon(1e-12));
    CHECK(r.rows[1].value == doctest::Approx(field_criterion(f, 2).value).epsilon(1e-12));
    CHECK(r.rows[2].value == doctest::Approx(joint_criterion(f, 3).value).epsilon(1e-12));
    CHECK(r.rows[3].value == doctest::Approx(entanglement_criterion(f, 0).value).epsilon(1e-12));
    CHECK(r.rows[4].value == doctest::Approx(entanglement_criterion(f, 1).value).epsilon(1e-12));
    CHECK(r.rows[3].note == "entangled");
}

TEST_CASE("parallel and serial sweeps agree exactly") {
    const auto grid = log_grid(1e8, 1e14, 61);
    for (const char* name : {"setA", "setB"}) {
        const auto a = sweep(preset(name), grid, {});
        const auto b = sweep_serial(preset(name), grid, {});
        REQUIRE(a.rows.size() == b.rows.size());
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CHECK(a.rows[i].p == b.rows[i].p);
            CHECK(a.rows[i].order == b.rows[i].order);
            CHECK(a.rows[i].criterion == b.rows[i].criterion);
            CHECK(a.rows[i].verdict == b.rows[i].verdict);
            CHECK(a.rows[i].value == b.rows[i].value);
        }
    }
}

TEST_CASE("failed points are reported and the sweep continues") {
    SweepOptions opts;
    opts.solve.max_order = 50;   // too short for set B at high pump
    const auto r = sweep(preset("setB"), log_grid(1e8, 1e14, 13), {{1}, {}, {}}, opts);
    CHECK(r.failed_points > 0);
    CHECK(r.failed_points < 13);
    CHECK(r.rows.size() == 13);
    CHECK(r.rows.front().verdict != Verdict::undefined);
    CHECK(r.rows.back().verdict == Verdict::undefined);
    CHECK_FALSE(r.rows.back().note.empty());
}

TEST_CASE("criteria are 2x2 minors with an I_0 corner") {
    const FullMoments f = solve_full(normalize(preset("setA", 1e10)));
    for (long n : {1L, 2L, 3L}) {
        const double in = f.i_moments()[static_cast<std::size_t>(n)];
        const double bn = f.b_moments[static_cast<std::size_t>(n)];
        const double mi = minor_2x2(f, {MomentKind::i, 0}, {MomentKind::i, 2 * n}, {MomentKind::i, n});
        CHECK(mi / (in * in) == doctest::Approx(field_criterion(f, n).value - 1.0).epsilon(1e-12));
        const double mb = minor_2x2(f, {MomentKind::i, 0}, {MomentKind::b, 2 * n}, {MomentKind::b, n});
        CHECK(mb / (bn * bn) == doctest::Approx(joint_criterion(f, n).value - 1.0).epsilon(1e-12));
    }
    for (long n : {0L, 1L}) {
        const double mr = minor_2x2(f, {MomentKind::i, 0}, {MomentKind::b, 2 * n + 1}, {MomentKind::r, n});
        CHECK(mr == doctest::Approx(entanglement_criterion(f, n).value).epsilon(1e-12));
    }
    CHECK_THROWS_AS(minor_2x2(f, {MomentKind::r, 0}, {MomentKind::i, 0}, {MomentKind::i, 0}), std::invalid_argument);
    CHECK_THROWS_AS(minor_2x2(f, {MomentKind::i, 0}, {MomentKind::i, 100000}, {MomentKind::i, 0}), std::out_of_range);
}

TEST_CASE("values do not depend on the rate unit") {
    for (const char* name : {"setA", "setB"}) {
        const SystemParams si = preset(name, 2e11);
        const FullMoments a = solve_full(si);
        const FullMoments b = solve_full(normalize(si));
        for (long n : {1L, 3L}) {
            CHECK(field_criterion(a, n).value == doctest::Approx(field_criterion(b, n).value).epsilon(1e-12));
            CHECK(joint_criterion(a, n).value == doctest::Approx(joint_criterion(b, n).value).epsilon(1e-12));
        }
        CHECK(entanglement_criterion(a, 0).value ==
              doctest::Approx(entanglement_criterion(b, 0).value).epsilon(1e-12).scale(1e-30));
    }
}

TEST_CASE("extended precision gives the same verdicts") {
    const auto grid = log_grid(1e9, 1e13, 9);
    SweepOptions wide;
    wide.precision = Precision::bits128;
    const auto a = sweep(preset("setA"), grid, {});
    const auto b = sweep(preset("setA"), grid, {}, wide);
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].verdict == b.rows[i].verdict);
        CHECK(a.rows[i].value == doctest::Approx(b.rows[i].value).epsilon(1e-10).scale(1e-30));
    }
}

TEST_CASE("names") {
    CHECK(to_string(Verdict::nonclassical) == "nonclassical");
    CHECK(to_string(Verdict::not_detected) == "not_detected");
    CHECK(to_string(CriterionId::entanglement) == "entanglement");
}
