#include "imdrive/machine.hpp"

#include "imdrive/errors.hpp"
#include "imdrive/foc.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace imdrive;
using imdrive::test::oriented_state;
using imdrive::test::state_from_currents;

namespace {

MachineParams paper_machine() { return MachineParams{}; }

double total_energy(const MachineState& s, const MachineParams& p) {
    const Currents c = currents_from_fluxes(s, p);
    const double magnetic = 0.5 * (s.lambda_ds * c.i_ds + s.lambda_qs * c.i_qs +
                                   s.lambda_dr * c.i_dr + s.lambda_qr * c.i_qr);
    const double omega_mech = s.omega_r / p.pole_pairs;
    return magnetic + 0.5 * p.inertia * omega_mech * omega_mech;
}

} // namespace

TEST_CASE("default parameters are the 50 HP machine and pass validation") {
    const MachineParams p = paper_machine();
    CHECK(p.r_s == 0.087);
    CHECK(p.r_r == 0.228);
    CHECK(p.l_s() == doctest::Approx(0.0355).epsilon(1e-12));
    CHECK(p.l_r() == doctest::Approx(0.0355).epsilon(1e-12));
    CHECK(p.pole_pairs == 2);
    CHECK(p.inertia == 1.662);
    CHECK(p.sigma() > 0.0);
    CHECK(p.sigma() < 1.0);
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("parameter validation rejects broken inputs") {
    MachineParams p = paper_machine();
    p.r_s = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = paper_machine();
    p.pole_pairs = 0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = paper_machine();
    p.inertia = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    // mutual larger than both totals makes the inductance matrix singular
    p = paper_machine();
    p.l_ls = 1e-9;
    p.l_lr = 1e-9;
    p.l_m = -0.01;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("zero fluxes give zero currents") {
    const Currents c = currents_from_fluxes(MachineState{}, paper_machine());
    CHECK(c.i_ds == 0.0);
    CHECK(c.i_qs == 0.0);
    CHECK(c.i_dr == 0.0);
    CHECK(c.i_qr == 0.0);
}

TEST_CASE("a singular inductance matrix is rejected at the solve") {
    // positive leakages always keep det > 0; a broken parameter set is the
    // only way to reach the guard
    MachineParams p = paper_machine();
    p.l_ls = -0.04;
    MachineState s;
    s.lambda_ds = 1.0;
    CHECK_THROWS_AS(currents_from_fluxes(s, p), std::invalid_argument);
}

TEST_CASE("constructed flux preimage is recovered") {
    const MachineParams p = paper_machine();
    MachineState s;
    s.lambda_ds = p.l_s() * 10.0;
    s.lambda_dr = p.l_m * 10.0;
    const Currents c = currents_from_fluxes(s, p);
    CHECK(c.i_ds == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(c.i_dr == doctest::Approx(0.0).scale(10.0).epsilon(1e-12));
}

TEST_CASE("d-axis solve matches an independent 2x2 elimination") {
    const MachineParams p = paper_machine();  // l_s = l_r = 0.0355, l_m = 0.0347
    MachineState s;
    s.lambda_ds = 0.96;
    s.lambda_dr = 0.96;

    // Cramer's rule on [l_s l_m; l_m l_r] [i_ds; i_dr] = [lambda_ds; lambda_dr]
    const double det = p.l_s() * p.l_r() - p.l_m * p.l_m;
    const double i_ds_oracle = (s.lambda_ds * p.l_r() - p.l_m * s.lambda_dr) / det;
    const double i_dr_oracle = (p.l_s() * s.lambda_dr - p.l_m * s.lambda_ds) / det;

    const Currents c = currents_from_fluxes(s, p);
    CHECK(c.i_ds == doctest::Approx(i_ds_oracle).epsilon(1e-12));
    CHECK(c.i_dr == doctest::Approx(i_dr_oracle).epsilon(1e-12));

    // resubstitution reproduces the fluxes
    CHECK(p.l_s() * c.i_ds + p.l_m * c.i_dr == doctest::Approx(0.96).epsilon(1e-12));
    CHECK(p.l_m * c.i_ds + p.l_r() * c.i_dr == doctest::Approx(0.96).epsilon(1e-12));
}

TEST_CASE("flux <-> current round trip on random states") {
    const MachineParams p = paper_machine();
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> flux(-1.5, 1.5);
    for (int i = 0; i < 200; ++i) {
        MachineState s;
        s.lambda_ds = flux(rng);
        s.lambda_qs = flux(rng);
        s.lambda_dr = flux(rng);
        s.lambda_qr = flux(rng);
        const Currents c = currents_from_fluxes(s, p);
        CHECK(p.l_s() * c.i_ds + p.l_m * c.i_dr ==
              doctest::Approx(s.lambda_ds).epsilon(1e-10).scale(1.0));
        CHECK(p.l_s() * c.i_qs + p.l_m * c.i_qr ==
              doctest::Approx(s.lambda_qs).epsilon(1e-10).scale(1.0));
        CHECK(p.l_r() * c.i_dr + p.l_m * c.i_ds ==
              doctest::Approx(s.lambda_dr).epsilon(1e-10).scale(1.0));
        CHECK(p.l_r() * c.i_qr + p.l_m * c.i_qs ==
              doctest::Approx(s.lambda_qr).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("torque vanishes when the cross terms cancel") {
    const MachineParams p = paper_machine();
    const MachineState s = state_from_currents({1.0, 1.0, 1.0, 1.0}, p);
    CHECK(electromagnetic_torque(s, p) == doctest::Approx(0.0).scale(100.0).epsilon(1e-12));
}

TEST_CASE("torque matches the hand-evaluated cross product") {
    MachineParams p = paper_machine();
    p.l_m = 0.0347;
    const MachineState s = state_from_currents({20.0, 50.0, 10.0, -5.0}, p);
    // 3 * 0.0347 * (50*10 - 20*(-5)) = 62.46
    CHECK(electromagnetic_torque(s, p) == doctest::Approx(62.46).epsilon(1e-9));
}

TEST_CASE("cross-product torque equals the field-oriented closed form") {
    const MachineParams p = paper_machine();
    const double lambda_r = 0.96;
    for (double i_qs : {-80.0, -5.0, 0.0, 12.5, 35.52, 140.0}) {
        const MachineState s = oriented_state(lambda_r, i_qs, p);
        const double closed_form =
            1.5 * p.pole_pairs * (p.l_m / p.l_r()) * lambda_r * i_qs;
        CHECK(electromagnetic_torque(s, p) ==
              doctest::Approx(closed_form).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("step holds the equilibrium state") {
    const MachineParams p = paper_machine();
    MachineState s;
    s.omega_r = 5.0;
    const MachineState next = step(s, 0.0, 0.0, 0.0, 0.0, 2e-6, p);
    CHECK(next.lambda_ds == 0.0);
    CHECK(next.lambda_qs == 0.0);
    CHECK(next.lambda_dr == 0.0);
    CHECK(next.lambda_qr == 0.0);
    CHECK(next.omega_r == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(next.theta_r == doctest::Approx(5.0 * 2e-6).epsilon(1e-12));
}

TEST_CASE("balanced torque leaves the speed unchanged") {
    const MachineParams p = paper_machine();
    const MachineState s = oriented_state(0.96, 20.0, p);
    const double te = electromagnetic_torque(s, p);
    const MachineState next = step(s, 0.0, 0.0, 0.0, te, 2e-6, p);
    // flux decay makes the balance drift only at second order in dt; an
    // unbalanced torque of this size would move omega by ~4e-4 per step
    CHECK(next.omega_r == doctest::Approx(s.omega_r).scale(1.0).epsilon(1e-6));
}

TEST_CASE("torque surplus accelerates per the mechanical balance") {
    const MachineParams p = paper_machine();  // J = 1.662, friction 0
    // pick i_qs so the initial torque is exactly 166.2 N m
    const double lambda_r = 0.96;
    const double i_qs = 166.2 / (1.5 * p.pole_pairs * (p.l_m / p.l_r()) * lambda_r);
    const MachineState s = oriented_state(lambda_r, i_qs, p);
    CHECK(electromagnetic_torque(s, p) == doctest::Approx(166.2).epsilon(1e-12));

    const double dt = 1e-6;
    const MachineState next = step(s, 0.0, 0.0, 0.0, 0.0, dt, p);
    // mechanical acceleration 166.2/1.662 = 100 rad/s^2, electrical is twice that
    const double accel_electrical = (next.omega_r - s.omega_r) / dt;
    CHECK(accel_electrical ==
          doctest::Approx(p.pole_pairs * 100.0).epsilon(1e-3));
}

TEST_CASE("step rejects out-of-range dt and non-finite states") {
    const MachineParams p = paper_machine();
    CHECK_THROWS_AS(step(MachineState{}, 0, 0, 0, 0, 0.0, p), std::invalid_argument);
    CHECK_THROWS_AS(step(MachineState{}, 0, 0, 0, 0, 6e-5, p), std::invalid_argument);

    // cross-axis astronomical fluxes overflow the torque product
    MachineState absurd;
    absurd.lambda_ds = 1e300;
    absurd.lambda_qr = -1e300;
    CHECK_THROWS_AS(step(absurd, 0, 0, 0, 0, 2e-6, p), DivergenceError);
}

TEST_CASE("free response dissipates energy") {
    const MachineParams base = paper_machine();
    for (double friction : {0.0, 0.05}) {
        MachineParams p = base;
        p.friction = friction;
        MachineState s;
        s.lambda_ds = 0.8;
        s.lambda_qs = -0.4;
        s.lambda_dr = 0.6;
        s.lambda_qr = 0.3;
        s.omega_r = 250.0;
        double energy = total_energy(s, p);
        for (int k = 0; k < 2000; ++k) {
            s = step(s, 0.0, 0.0, 0.0, 0.0, 2e-5, p);
            const double next_energy = total_energy(s, p);
            CHECK(next_energy <= energy * (1.0 + 1e-12) + 1e-12);
            energy = next_energy;
        }
    }
}

TEST_CASE("halving dt shrinks the error like a 4th-order scheme") {
    const MachineParams p = paper_machine();
    const double v_ds = 50.0, v_qs = 80.0, omega_frame = 100.0, load = 20.0;
    const double horizon = 0.1;

    const auto integrate = [&](double dt) {
        MachineState s;
        const long n = std::lround(horizon / dt);
        for (long k = 0; k < n; ++k)
            s = step(s, v_ds, v_qs, omega_frame, load, dt, p);
        return s;
    };

    const auto error_norm = [](const MachineState& a, const MachineState& b) {
        return std::sqrt(std::pow(a.lambda_ds - b.lambda_ds, 2) +
                         std::pow(a.lambda_qs - b.lambda_qs, 2) +
                         std::pow(a.lambda_dr - b.lambda_dr, 2) +
                         std::pow(a.lambda_qr - b.lambda_qr, 2) +
                         std::pow((a.omega_r - b.omega_r) / 100.0, 2));
    };

    const MachineState ref = integrate(2.5e-6);  // dt/16 reference
    const double err_h = error_norm(integrate(4e-5), ref);
    const double err_h2 = error_norm(integrate(2e-5), ref);
    CHECK(err_h / err_h2 >= 8.0);
}

TEST_CASE("stationary and rotating frames produce the same speed trace") {
    const MachineParams p = paper_machine();
    const double amp = 120.0;
    const double omega_e = 2.0 * std::numbers::pi * 50.0;
    const double dt = 1e-5;
    const double horizon = 0.2;
    const long n = std::lround(horizon / dt);

    const auto v_abc = [&](double t) -> std::array<double, 3> {
        constexpr double third = 2.0 * std::numbers::pi / 3.0;
        return {amp * std::cos(omega_e * t), amp * std::cos(omega_e * t - third),
                amp * std::cos(omega_e * t + third)};
    };

    MachineState stat, sync;
    double sum_sq_diff = 0.0, sum_sq_ref = 0.0;
    for (long k = 0; k < n; ++k) {
        const double t_mid = (k + 0.5) * dt;  // midpoint hold of the inputs
        const auto abc = v_abc(t_mid);
        const auto [vd_s, vq_s] = abc_to_dq(abc, 0.0);
        const auto [vd_e, vq_e] = abc_to_dq(abc, omega_e * t_mid);
        stat = step(stat, vd_s, vq_s, 0.0, 0.0, dt, p);
        sync = step(sync, vd_e, vq_e, omega_e, 0.0, dt, p);
        const double d = stat.omega_r - sync.omega_r;
        sum_sq_diff += d * d;
        sum_sq_ref += stat.omega_r * stat.omega_r;
    }
    CHECK(std::sqrt(sum_sq_diff) <= 1e-3 * std::sqrt(sum_sq_ref));
}
