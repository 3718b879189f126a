#include <doctest.h>

#include <cmath>

#include "neuropend/numerics.hpp"

using namespace neuropend;

namespace {

auto growth = [](const StateVector<1>& y, StateVector<1>& dy) { dy[0] = y[0]; };
auto decay = [](const StateVector<1>& y, StateVector<1>& dy) { dy[0] = -y[0]; };

// y = (t, sin t): the observable index 1 follows sin exactly up to RK4 error.
auto sine = [](const StateVector<2>& y, StateVector<2>& dy) {
    dy[0] = 1.0;
    dy[1] = std::cos(y[0]);
};

}  // namespace

TEST_CASE("rk4 leaves a zero vector field unchanged") {
    auto zero = [](const StateVector<3>&, StateVector<3>& dy) { dy = {0.0, 0.0, 0.0}; };
    const StateVector<3> y{1.5, -2.0, 0.25};
    CHECK(rk4_step<3>(y, zero, 0.7) == y);
}

TEST_CASE("rk4 single step of x' = x") {
    const auto y = rk4_step<1>({1.0}, growth, 0.1);
    CHECK(std::abs(y[0] - 1.10517091) < 1e-7);
}

TEST_CASE("rk4 local error shrinks by ~2^5 per halving, global by ~2^4") {
    const double one = std::abs(rk4_step<1>({1.0}, decay, 0.1)[0] - std::exp(-0.1));
    auto half = rk4_step<1>({1.0}, decay, 0.05);
    half = rk4_step<1>(half, decay, 0.05);
    const double two = std::abs(half[0] - std::exp(-0.1));
    // One step vs two half steps over the same interval: ratio ≈ 16.
    CHECK(one / two > 15.0);
    CHECK(one / two < 17.0);
}

TEST_CASE("rk4_step_checked raises on non-finite state") {
    auto blowup = [](const StateVector<1>&, StateVector<1>& dy) { dy[0] = INFINITY; };
    CHECK_THROWS_AS(rk4_step_checked<1>({0.0}, blowup, 0.1, 3.0), SimulationFault);
    try {
        (void)rk4_step_checked<1>({0.0}, blowup, 0.1, 3.0);
    } catch (const SimulationFault& f) {
        CHECK(f.time() == 3.0);
    }
}

TEST_CASE("linear crossing located to tolerance") {
    auto ramp = [](const StateVector<1>&, StateVector<1>& dy) { dy[0] = 1.0; };
    StepperConfig cfg;
    cfg.dt = 0.2;
    const StateVector<1> before{-0.1};  // q = t − 1 at t0 = 0.9
    const auto after = rk4_step<1>(before, ramp, 0.2);
    const auto c = locate_crossing<1>(before, after, 0.9, 0.2, {0, 0.0, Direction::Rising}, ramp, cfg);
    REQUIRE(c);
    CHECK(std::abs(c->time - 1.0) <= cfg.crossing_tol);
    CHECK(c->rising);
    CHECK_FALSE(c->reduced_precision);
    // wrong direction
    CHECK_FALSE(locate_crossing<1>(before, after, 0.9, 0.2, {0, 0.0, Direction::Falling}, ramp, cfg));
}

TEST_CASE("no crossing when the observable stays below the level") {
    auto flat = [](const StateVector<1>&, StateVector<1>& dy) { dy[0] = 0.0; };
    StepperConfig cfg;
    const StateVector<1> y{-0.5};
    CHECK_FALSE(locate_crossing<1>(y, y, 0.0, cfg.dt, {0, 0.0, Direction::Both}, flat, cfg));
}

TEST_CASE("sine root at pi, falling") {
    StepperConfig cfg;
    cfg.dt = 0.01;
    const double t0 = M_PI - 0.004;
    const StateVector<2> before{t0, std::sin(t0)};
    const auto after = rk4_step<2>(before, sine, cfg.dt);
    const auto c = locate_crossing<2>(before, after, t0, cfg.dt, {1, 0.0, Direction::Falling}, sine, cfg);
    REQUIRE(c);
    CHECK(std::abs(c->time - M_PI) < 1e-9);
    CHECK_FALSE(c->rising);
    CHECK(c->time >= t0);
    CHECK(c->time <= t0 + cfg.dt);
}

TEST_CASE("bisection budget exhausted flags reduced precision") {
    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.max_bisections = 3;
    const double t0 = M_PI - 0.004;
    const StateVector<2> before{t0, std::sin(t0)};
    const auto after = rk4_step<2>(before, sine, cfg.dt);
    const auto c = locate_crossing<2>(before, after, t0, cfg.dt, {1, 0.0, Direction::Both}, sine, cfg);
    REQUIRE(c);
    CHECK(c->reduced_precision);
    CHECK(std::abs(c->time - M_PI) < cfg.dt / 8);
}

TEST_CASE("wrapped angle crossings use the nearest 2pi image") {
    auto spin = [](const StateVector<1>&, StateVector<1>& dy) { dy[0] = 1.0; };
    StepperConfig cfg;
    cfg.dt = 0.1;
    // Unwrapped angle passes 4π − 1 (≡ −1) at t = 0.05.
    const StateVector<1> before{4 * M_PI - 1.05};
    const auto after = rk4_step<1>(before, spin, cfg.dt);
    const auto c = locate_crossing<1>(before, after, 0.0, cfg.dt,
                                      {0, -1.0, Direction::Rising, ObservableTransform::WrappedAngle}, spin, cfg);
    REQUIRE(c);
    CHECK(c->time == doctest::Approx(0.05).epsilon(1e-8));

    // |q| = 0.5 while q moves from −0.55 to −0.45 is a falling |q| crossing.
    const StateVector<1> b2{-0.55};
    const auto a2 = rk4_step<1>(b2, spin, cfg.dt);
    const CrossingSpec abs_spec{0, 0.5, Direction::Rising, ObservableTransform::AbsWrappedAngle};
    CHECK_FALSE(locate_crossing<1>(b2, a2, 0.0, cfg.dt, abs_spec, spin, cfg));
    const CrossingSpec abs_fall{0, 0.5, Direction::Falling, ObservableTransform::AbsWrappedAngle};
    CHECK(locate_crossing<1>(b2, a2, 0.0, cfg.dt, abs_fall, spin, cfg));
}

TEST_CASE("wrap_angle range") {
    CHECK(wrap_angle(M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(-M_PI) == doctest::Approx(M_PI));
    CHECK(wrap_angle(3 * M_PI / 2) == doctest::Approx(-M_PI / 2));
    CHECK(wrap_angle(10.0) == doctest::Approx(10.0 - 4 * M_PI));
}

TEST_CASE("stepper config validation") {
    StepperConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.dt = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.crossing_tol = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.max_bisections = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
