#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "qdcav/params.hpp"

using namespace qdcav;

namespace {

std::string error_field(const SystemParams& p) {
    try {
        validate(p);
    } catch (const ParamError& e) {
        return e.field();
    }
    return "";
}

std::string config_error_field(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ParamError& e) {
        return e.field();
    }
    return "";
}

}  // namespace

TEST_CASE("both published parameter sets are valid") {
    CHECK_NOTHROW(validate({122e9, 276e9, 113e9, 1e11, 0.0, 0.0}));
    CHECK_NOTHROW(validate({616e9, 213e9, 427e9, 1e11, 0.0, 0.0}));
}

TEST_CASE("each invalid rate is reported under its own field") {
    CHECK(error_field({1, 0, 1, 1, 0, 0}) == "kappa");
    CHECK(error_field({0, 1, 1, 1, 0, 0}) == "g");
    CHECK(error_field({1, 1, 0, 1, 0, 0}) == "gamma");
    CHECK(error_field({1, 1, 1, -1, 0, 0}) == "p");
    CHECK(error_field({1, 1, 1, 1, 0, -1}) == "gamma_d");
    CHECK(error_field({1, -2, 1, 1, 0, 0}) == "kappa");
    CHECK(error_field({1, 1, 1, 1, std::numeric_limits<double>::infinity(), 0}) == "delta");
    CHECK(error_field({std::nan(""), 1, 1, 1, 0, 0}) == "g");
}

TEST_CASE("zero kappa has a dedicated message") {
    try {
        validate({1, 0, 1, 1, 0, 0});
        FAIL("expected ParamError");
    } catch (const ParamError& e) {
        CHECK(std::string(e.what()) == "kappa must be nonzero");
    }
}

TEST_CASE("zero pump and negative detuning are admitted") {
    CHECK_NOTHROW(validate({1, 1, 1, 0, 0, 0}));
    CHECK_NOTHROW(validate({1, 1, 1, 1, -3.5, 0}));
}

TEST_CASE("normalize divides every rate by kappa") {
    const SystemParams n = normalize({2, 2, 2, 1, 0, 0});
    CHECK(n.g == 1.0);
    CHECK(n.kappa == 1.0);
    CHECK(n.gamma == 1.0);
    CHECK(n.p == 0.5);

    const SystemParams a = normalize(preset("setA"));
    CHECK(a.kappa == 1.0);
    CHECK(a.g == doctest::Approx(0.4420).epsilon(1e-3));
    CHECK(a.gamma == doctest::Approx(0.4094).epsilon(1e-3));
    CHECK(a.p == doctest::Approx(0.3623).epsilon(1e-3));

    const SystemParams one{1, 1, 1, 1, 0, 0};
    const SystemParams same = normalize(one);
    CHECK(same.g == 1.0);
    CHECK(same.gamma == 1.0);
    CHECK(same.p == 1.0);
    CHECK(same.delta == 0.0);
}

TEST_CASE("validate and normalize commute") {
    for (const SystemParams& p : {preset("setA"), preset("setB", 3e12), SystemParams{0.3, 7.0, 0.1, 0.0, -2.0, 0.5}}) {
        const SystemParams x = validate(normalize(p));
        const SystemParams y = normalize(validate(p));
        CHECK(x.g == y.g);
        CHECK(x.kappa == y.kappa);
        CHECK(x.gamma == y.gamma);
        CHECK(x.p == y.p);
        CHECK(x.delta == y.delta);
        CHECK(x.gamma_d == y.gamma_d);
    }
}

TEST_CASE("presets") {
    const SystemParams a = preset("setA");
    CHECK(a.g == 122e9);
    CHECK(a.kappa == 276e9);
    CHECK(a.gamma == 113e9);
    CHECK(a.p == 1e11);
    const SystemParams b = preset("setB", 5e10);
    CHECK(b.g == 616e9);
    CHECK(b.kappa == 213e9);
    CHECK(b.gamma == 427e9);
    CHECK(b.p == 5e10);
    CHECK_THROWS_AS(preset("setC"), ParamError);
}

TEST_CASE("config reader") {
    const ParamConfig c = parse_config("# comment\nunits = kappa\ng = 2\ngamma = 1  # trailing\np = 0.5\n");
    CHECK(c.units == Units::kappa);
    CHECK(c.params.kappa == 1.0);
    CHECK(c.params.g == 2.0);
    CHECK(c.params.p == 0.5);
    CHECK(c.params.delta == 0.0);

    CHECK(config_error_field("g = 1\nkappa = 1\ngamma = 1\np = 1\n") == "units");
    CHECK(config_error_field("units = si\ng = 1\ngamma = 1\np = 1\n") == "kappa");
    CHECK(config_error_field("units = si\ng = 1\nkappa = abc\ngamma = 1\np = 1\n") == "kappa");
    CHECK(config_error_field("units = si\ng = 1\nkappa = 1\ngamma = 1\np = 1\nfoo = 2\n") == "foo");
    CHECK(config_error_field("units = si\ng = 1\ng = 2\nkappa = 1\ngamma = 1\np = 1\n") == "g");
    CHECK(config_error_field("units = furlong\n") == "units");
    CHECK(config_error_field("units = si\ng 1\n") == "line 2");
    CHECK(config_error_field("units = si\ng = 1\nkappa = 0\ngamma = 1\np = 1\n") == "kappa");
}

TEST_CASE("shipped preset files match the built-in presets") {
    for (const char* name : {"setA", "setB"}) {
        const ParamConfig c = load_config(std::string(QDCAV_SOURCE_DIR) + "/presets/" + name + ".cfg");
        const SystemParams p = preset(name);
        CHECK(c.units == Units::si);
        CHECK(c.params.g == p.g);
        CHECK(c.params.kappa == p.kappa);
        CHECK(c.params.gamma == p.gamma);
        CHECK(c.params.p == p.p);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/file.cfg"), ParamError);
}

TEST_CASE("unit names") {
    CHECK(parse_units("si") == Units::si);
    CHECK(parse_units("kappa") == Units::kappa);
    CHECK(to_string(Units::kappa) == "kappa");
    CHECK_THROWS_AS(parse_units("hz"), ParamError);
}
