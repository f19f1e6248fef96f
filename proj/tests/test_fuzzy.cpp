#include "imdrive/fuzzy.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

using namespace imdrive;

namespace {

FuzzyParams random_valid_params(std::mt19937& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto ordered_pair = [&](double& lo, double& hi) {
        double x = unit(rng) * 0.98;
        double y = x + 0.01 + unit(rng) * (0.99 - x);
        lo = x;
        hi = std::min(y, 1.0);
    };
    FuzzyParams p;
    p.k1 = unit(rng) * FuzzyParams::k1_max;
    p.k2 = unit(rng) * FuzzyParams::k2_max;
    p.k3 = unit(rng) * FuzzyParams::k3_max;
    ordered_pair(p.a1, p.a2);
    ordered_pair(p.b1, p.b2);
    ordered_pair(p.c1, p.c2);
    return p;
}

// the full free-function pipeline for already-normalized inputs
double pipeline_du(const FuzzyParams& p, double e_norm, double ce_norm) {
    const MembershipFamily fe(p.a1, p.a2), fce(p.b1, p.b2), fdu(p.c1, p.c2);
    return defuzzify(infer(fe.fuzzify(e_norm), fce.fuzzify(ce_norm), speed_rule_table()), fdu);
}

} // namespace

TEST_CASE("normalization clamps into the unit interval") {
    CHECK(normalize(0.0, 0.123) == 0.0);
    CHECK(normalize(150.0, 6.67e-3) == 1.0);
    CHECK(normalize(-150.0, 6.67e-3) == -1.0);
    CHECK(normalize(-75.0, 6.67e-3) == doctest::Approx(-0.50).epsilon(1e-3));
    CHECK(normalize(-75.0, 6.67e-3) == doctest::Approx(-0.50025).epsilon(1e-12));
    CHECK_THROWS_AS(normalize(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("parameter validation names the violated bound") {
    CHECK_NOTHROW(FuzzyParams::baseline().validate());

    FuzzyParams p;
    p.k1 = 0.01;
    try {
        p.validate();
        FAIL("expected a validation error");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("k1") != std::string::npos);
        CHECK(msg.find("0.00667") != std::string::npos);
    }

    p = FuzzyParams{};
    p.a2 = p.a1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = FuzzyParams{};
    p.k3 = 6.5;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = FuzzyParams{};
    p.c1 = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("flat record round trip keeps the canonical order") {
    std::mt19937 rng(5);
    const FuzzyParams p = random_valid_params(rng);
    const auto flat = p.flat();
    CHECK(flat[0] == p.k1);
    CHECK(flat[2] == p.k3);
    CHECK(flat[8] == p.c2);
    const FuzzyParams q = FuzzyParams::from_flat(flat);
    CHECK(q.flat() == flat);
}

TEST_CASE("membership peaks sit where the family puts them") {
    const MembershipFamily family(0.3, 0.7);

    const Degrees at_zero = family.fuzzify(0.0);
    for (int s = 0; s < 7; ++s)
        CHECK(at_zero[s] == (s == static_cast<int>(Label::Z) ? 1.0 : 0.0));

    const Degrees at_p1 = family.fuzzify(0.3);
    for (int s = 0; s < 7; ++s)
        CHECK(at_p1[s] == (s == static_cast<int>(Label::PS) ? 1.0 : 0.0));

    const Degrees mid = family.fuzzify(0.15);
    CHECK(mid[static_cast<int>(Label::Z)] == 0.5);
    CHECK(mid[static_cast<int>(Label::PS)] == 0.5);

    // saturation beyond the universe
    CHECK(family.fuzzify(-2.0)[static_cast<int>(Label::NB)] == 1.0);
    CHECK(family.fuzzify(2.0)[static_cast<int>(Label::PB)] == 1.0);
}

TEST_CASE("family is a symmetric partition of unity") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> x_dist(-1.0, 1.0);
    const MembershipFamily family(0.25, 0.6);
    for (int k = 0; k < 500; ++k) {
        const double x = x_dist(rng);
        const Degrees d = family.fuzzify(x);
        const Degrees mirror = family.fuzzify(-x);
        double sum = 0.0;
        int active = 0;
        for (int s = 0; s < 7; ++s) {
            CHECK(d[s] >= 0.0);
            CHECK(d[s] <= 1.0);
            CHECK(d[s] == mirror[6 - s]);  // exact mirror
            sum += d[s];
            if (d[s] > 0.0)
                ++active;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(active <= 2);
        CHECK(active >= 1);
    }
}

TEST_CASE("degenerate peak positions stay well defined") {
    const MembershipFamily family(0.0, 1.0);
    for (double x : {-1.0, -0.5, 0.0, 0.3, 1.0}) {
        const Degrees d = family.fuzzify(x);
        for (int s = 0; s < 7; ++s) {
            CHECK(std::isfinite(d[s]));
            CHECK(d[s] >= 0.0);
            CHECK(d[s] <= 1.0);
        }
    }
}

TEST_CASE("rule matrix matches the saturated-sum characterization") {
    const RuleTable& table = speed_rule_table();
    // independent characterization: out = clamp(e_index + ce_index - 3, NB, PB)
    for (int e = 0; e < 7; ++e)
        for (int ce = 0; ce < 7; ++ce)
            CHECK(static_cast<int>(table.out[ce][e]) == std::clamp(e + ce - 3, 0, 6));

    CHECK(table.rule(Label::NB, Label::NB) == Label::NB);
    CHECK(table.rule(Label::PB, Label::PB) == Label::PB);
    CHECK(table.rule(Label::NS, Label::Z) == Label::NS);
    CHECK(table.rule(Label::PB, Label::Z) == Label::PB);
    CHECK(table.rule(Label::NB, Label::PB) == Label::Z);

    // antisymmetric under simultaneous label negation
    for (int e = 0; e < 7; ++e)
        for (int ce = 0; ce < 7; ++ce)
            CHECK(static_cast<int>(table.out[6 - ce][6 - e]) ==
                  6 - static_cast<int>(table.out[ce][e]));
}

TEST_CASE("inference takes rule minima and aggregates by maximum") {
    Degrees e{}, ce{};
    e[static_cast<int>(Label::NB)] = 1.0;
    ce[static_cast<int>(Label::NB)] = 1.0;
    const Degrees full = infer(e, ce, speed_rule_table());
    for (int s = 0; s < 7; ++s)
        CHECK(full[s] == (s == static_cast<int>(Label::NB) ? 1.0 : 0.0));

    e = Degrees{};
    ce = Degrees{};
    e[static_cast<int>(Label::NS)] = 0.7;
    ce[static_cast<int>(Label::Z)] = 0.4;
    const Degrees mixed = infer(e, ce, speed_rule_table());
    CHECK(mixed[static_cast<int>(Label::NS)] == 0.4);
    for (int s = 0; s < 7; ++s)
        if (s != static_cast<int>(Label::NS))
            CHECK(mixed[s] == 0.0);

    const Degrees none = infer(Degrees{}, Degrees{}, speed_rule_table());
    for (double v : none)
        CHECK(v == 0.0);
}

TEST_CASE("centroid of symmetric masses is exactly zero") {
    const MembershipFamily family(0.3, 0.7);
    Degrees symmetric{};
    symmetric[static_cast<int>(Label::NB)] = 0.2;
    symmetric[static_cast<int>(Label::PB)] = 0.2;
    symmetric[static_cast<int>(Label::NS)] = 0.5;
    symmetric[static_cast<int>(Label::PS)] = 0.5;
    symmetric[static_cast<int>(Label::Z)] = 0.7;
    CHECK(defuzzify(symmetric, family) == 0.0);

    Degrees only_z{};
    only_z[static_cast<int>(Label::Z)] = 1.0;
    CHECK(defuzzify(only_z, family) == 0.0);

    CHECK(defuzzify(Degrees{}, family) == 0.0);
}

TEST_CASE("centroid of one full set matches the closed-form triangle centroid") {
    const MembershipFamily family(0.3, 0.7);
    Degrees only_ps{};
    only_ps[static_cast<int>(Label::PS)] = 1.0;
    // triangle with feet 0 and 0.7, peak 0.3 -> centroid (0 + 0.3 + 0.7)/3
    CHECK(defuzzify(only_ps, family) == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
}

TEST_CASE("grid centroid agrees with a fine independent quadrature") {
    const MembershipFamily family(0.2, 0.55);
    Degrees degrees{};
    degrees[static_cast<int>(Label::PS)] = 0.8;
    degrees[static_cast<int>(Label::PM)] = 0.35;
    degrees[static_cast<int>(Label::NS)] = 0.15;

    // trapezoidal quadrature at 10x the implementation resolution
    const int n = 20001;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = -1.0 + 2.0 * k / (n - 1);
        double mu = 0.0;
        for (int s = 0; s < 7; ++s)
            mu = std::max(mu, std::min(degrees[s], family.membership(s, x)));
        const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
        num += w * x * mu;
        den += w * mu;
    }
    CHECK(defuzzify(degrees, family) == doctest::Approx(num / den).epsilon(1e-3));
}

TEST_CASE("controller increment is odd and vanishes at the origin") {
    std::mt19937 rng(23);
    for (int set = 0; set < 10; ++set) {
        const FuzzyParams p = random_valid_params(rng);
        CHECK(pipeline_du(p, 0.0, 0.0) == 0.0);
        for (int i = 0; i <= 50; ++i) {
            const double e = -1.0 + 2.0 * i / 50.0;
            for (int j = 0; j <= 10; ++j) {
                const double ce = -1.0 + 2.0 * j / 10.0;
                const double forward = pipeline_du(p, e, ce);
                const double mirrored = pipeline_du(p, -e, -ce);
                CHECK(mirrored == -forward);
                CHECK(std::abs(forward) <= 1.0);
            }
        }
    }
}

TEST_CASE("response is monotone in the error at zero trend") {
    // strictly non-decreasing for the shipped defaults
    const FuzzyParams base = FuzzyParams::baseline();
    double prev = -2.0;
    for (int i = 0; i <= 200; ++i) {
        const double e = -1.0 + 2.0 * i / 200.0;
        const double du = pipeline_du(base, e, 0.0);
        CHECK(du >= prev - 1e-12);
        prev = du;
    }

    // uneven random families can regress between adjacent peaks (clipped
    // centroids are not monotone in general), but the sign always follows
    // the error: at zero trend all output mass lies on the error's side
    std::mt19937 rng(31);
    for (int set = 0; set < 5; ++set) {
        const FuzzyParams p = random_valid_params(rng);
        for (int i = 1; i <= 100; ++i) {
            const double e = i / 100.0;
            CHECK(pipeline_du(p, e, 0.0) > 0.0);
            CHECK(pipeline_du(p, -e, 0.0) < 0.0);
        }
    }
}

TEST_CASE("cached controller reproduces the free pipeline bit for bit") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int set = 0; set < 5; ++set) {
        const FuzzyParams p = random_valid_params(rng);
        const FuzzyController controller(p);
        for (int k = 0; k < 50; ++k) {
            const double e = unit(rng), ce = unit(rng);
            CHECK(controller.increment(e, ce) == pipeline_du(p, e, ce));
        }
    }
}

TEST_CASE("controller step accumulates and clamps the torque command") {
    const FuzzyParams p = FuzzyParams::baseline();

    // zero error, zero trend: command unchanged
    ControllerState state{0.0, 123.0};
    const auto [unchanged, next] = controller_step(state, 50.0, 50.0, p);
    CHECK(unchanged == 123.0);
    CHECK(next.accumulated_output == 123.0);
    CHECK(next.last_error == 0.0);

    // large positive error with flat trend pushes the command up
    ControllerState primed{1000.0, 0.0};
    const auto [pushed, after] = controller_step(primed, 1000.0, 0.0, p);
    CHECK(pushed > 0.0);
    CHECK(after.last_error == 1000.0);
    // (e, ce) = (PB, Z) fires the PB output set whose centroid is well above zero
    CHECK(pushed == doctest::Approx(p.k3 * 0.9).epsilon(0.1));

    // saturation at the torque limit
    ControllerState high{1000.0, 399.9};
    double command = controller_step(high, 1000.0, 0.0, p).first;
    CHECK(command == 400.0);
    ControllerState low{-1000.0, -399.9};
    command = controller_step(low, -1000.0, 0.0, p, 250.0).first;
    CHECK(command == -250.0);
}

TEST_CASE("mirrored speed errors produce mirrored commands") {
    const FuzzyParams p = FuzzyParams::baseline();
    ControllerState up{}, down{};
    double ref = 80.0;
    for (int k = 0; k < 200; ++k) {
        const double meas = 80.0 - 0.4 * k;  // widening positive error
        const auto [u_up, s_up] = controller_step(up, ref, meas, p);
        const auto [u_down, s_down] = controller_step(down, -ref, -meas, p);
        CHECK(u_down == -u_up);
        up = s_up;
        down = s_down;
    }
}
