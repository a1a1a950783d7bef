#include <doctest.h>

#include "qpencil/config_io.hpp"

using namespace qp;

TEST_CASE("complex literals") {
    CHECK(parse_complex("1.5") == Complex(1.5, 0));
    CHECK(parse_complex("-2") == Complex(-2, 0));
    CHECK(parse_complex("3i") == Complex(0, 3));
    CHECK(parse_complex("-0.5i") == Complex(0, -0.5));
    CHECK(parse_complex("1+2i") == Complex(1, 2));
    CHECK(parse_complex("1.5-0.25i") == Complex(1.5, -0.25));
    CHECK(parse_complex("1e-3+2e-4i") == Complex(1e-3, 2e-4));
    CHECK(parse_complex(" 0.3 + 0.1i ") == Complex(0.3, 0.1));
    CHECK_THROWS_AS(parse_complex("abc"), Error);
    CHECK_THROWS_AS(parse_complex("1+2"), Error);

    // Round trip through the formatter.
    for (const Complex z : {Complex(0.125, -3.5), Complex(-1e-7, 2.25), Complex(42, 0)})
        CHECK(parse_complex(format_complex(z)) == z);
}

TEST_CASE("config text round trip") {
    const std::string text = R"(# d-Painleve A1 example
family = dA1
step = 0.3
a = 0.1, 0.2, 0.3, 0.4, 0.15, 0.25, 0.35, 0.25
pos0 = 1.1
x0 = 0.7+0.2i
y0 = 0.3
)";
    const RunConfig rc = parse_config_text(text);
    CHECK(rc.family.tag == FamilyTag::dA1);
    CHECK(rc.family.step == Complex(0.3));
    CHECK(rc.family.params.size() == 8);
    CHECK(rc.x0 == Complex(0.7, 0.2));
    CHECK(rc.pos0 == Complex(1.1));

    const RunConfig back = parse_config_text(config_to_text(rc));
    CHECK(back.family.params == rc.family.params);
    CHECK(back.pos0 == rc.pos0);
    CHECK(back.y0 == rc.y0);
}

TEST_CASE("config validation surfaces family errors") {
    CHECK_THROWS_AS(parse_config_text("family = dA1\nstep = 0.3\n"
                                      "a = 0.1, 0.2, 0.3, 0.4, 0.15, 0.25, 0.35, 0.15\n"),
                    ConstraintViolated);
    CHECK_THROWS_AS(parse_config_text("family = nope\nstep = 0.3\na = 1\n"), Error);
    CHECK_THROWS_AS(parse_config_text("family = dA1\na = 1\n"), Error);  // missing step
}

TEST_CASE("multiplicative config") {
    const RunConfig rc = parse_config_text(
        "family = qA0\nstep = 1.1\nkappa = 2\nz = 2, 3, 4, 5, 0.5, "
        "0.33333333333333333, 0.25, 0.2\n");
    CHECK(rc.family.tag == FamilyTag::qA0);
    CHECK(rc.pos0 == Complex(2));  // defaults to the autonomous fiber w = kappa
}
