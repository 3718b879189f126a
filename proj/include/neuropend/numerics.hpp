#pragma once

// Fixed-step RK4 stepping and bisection-based event localization.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace neuropend {

template <std::size_t N>
using StateVector = std::array<double, N>;

/// Raised when the integrated state stops being finite.
class SimulationFault : public std::runtime_error {
public:
    SimulationFault(const std::string& what, double time)
        : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}

    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

struct StepperConfig {
    double dt = 1e-3;
    double crossing_tol = 1e-10;
    int max_bisections = 60;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

enum class Direction { Rising, Falling, Both };

/// How a scalar observable is read off the state vector.
enum class ObservableTransform {
    Identity,
    WrappedAngle,     // level is matched against every 2π image of the angle
    AbsWrappedAngle,  // |angle| reduced to [0, π]
};

struct CrossingSpec {
    std::size_t index = 0;
    double level = 0.0;
    Direction direction = Direction::Both;
    ObservableTransform transform = ObservableTransform::Identity;
};

struct Crossing {
    double time = 0.0;
    bool rising = true;
    bool reduced_precision = false;
};

inline void StepperConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("stepper.dt must be > 0");
    }
    if (!(crossing_tol > 0.0) || !(crossing_tol < dt)) {
        throw std::invalid_argument("stepper.crossing_tol must lie in (0, dt)");
    }
    if (max_bisections < 1) {
        throw std::invalid_argument("stepper.max_bisections must be >= 1");
    }
}

/// Reduces an angle to (-π, π].
inline double wrap_angle(double q) {
    constexpr double kTwoPi = 2.0 * M_PI;
    double r = std::remainder(q, kTwoPi);
    if (r <= -M_PI) {
        r += kTwoPi;
    }
    return r;
}

/// Classical 4th-order Runge-Kutta update. `rhs(state, out)` writes the derivative.
template <std::size_t N, typename Rhs>
StateVector<N> rk4_step(const StateVector<N>& y, Rhs&& rhs, double dt) {
    StateVector<N> k1{}, k2{}, k3{}, k4{}, tmp{};
    rhs(y, k1);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k1[i];
    rhs(tmp, k2);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + 0.5 * dt * k2[i];
    rhs(tmp, k3);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + dt * k3[i];
    rhs(tmp, k4);
    StateVector<N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

/// rk4_step that raises SimulationFault when the result is not finite.
template <std::size_t N, typename Rhs>
StateVector<N> rk4_step_checked(const StateVector<N>& y, Rhs&& rhs, double dt, double t) {
    auto out = rk4_step<N>(y, std::forward<Rhs>(rhs), dt);
    for (double x : out) {
        if (!std::isfinite(x)) {
            throw SimulationFault("non-finite state", t);
        }
    }
    return out;
}

namespace detail {

// Signed distance from the observable to the level. For wrapped angles the
// nearest 2π image of the level is chosen from the step's starting value so
// the same image is used throughout the bisection.
inline double shifted_level(double raw_before, const CrossingSpec& spec) {
    if (spec.transform == ObservableTransform::WrappedAngle) {
        return raw_before - wrap_angle(raw_before - spec.level);
    }
    return spec.level;
}

inline double observe(double raw, const CrossingSpec& spec, double image) {
    switch (spec.transform) {
        case ObservableTransform::Identity:
            return raw - image;
        case ObservableTransform::WrappedAngle:
            return raw - image;
        case ObservableTransform::AbsWrappedAngle:
            return std::abs(wrap_angle(raw)) - spec.level;
    }
    return raw - image;
}

inline bool direction_matches(double before, double after, Direction d) {
    const bool rising = before < 0.0 && after >= 0.0;
    const bool falling = before > 0.0 && after <= 0.0;
    switch (d) {
        case Direction::Rising: return rising;
        case Direction::Falling: return falling;
        case Direction::Both: return rising || falling;
    }
    return false;
}

}  // namespace detail

/// Finds the time at which the observable crosses `spec.level` inside
/// [t0, t0 + dt]. Sub-steps are re-integrated from `before` with one RK4 step
/// of the bisected length, so `rhs` must be the same right-hand side that
/// produced `after`.
template <std::size_t N, typename Rhs>
std::optional<Crossing> locate_crossing(const StateVector<N>& before, const StateVector<N>& after,
                                        double t0, double dt, const CrossingSpec& spec, Rhs&& rhs,
                                        const StepperConfig& cfg) {
    const double raw0 = before[spec.index];
    const double raw1 = after[spec.index];
    const double image = detail::shifted_level(raw0, spec);
    const double g0 = detail::observe(raw0, spec, image);
    const double g1 = detail::observe(raw1, spec, image);

    // A wrapped observable jumps by ~2π at the branch cut; that is not a crossing.
    if (spec.transform == ObservableTransform::AbsWrappedAngle &&
        std::abs(wrap_angle(raw1) - wrap_angle(raw0)) > M_PI) {
        return std::nullopt;
    }
    if (!detail::direction_matches(g0, g1, spec.direction)) {
        return std::nullopt;
    }

    const bool rising = g0 < 0.0;
    double lo = 0.0;
    double hi = dt;
    int iterations = 0;
    while (hi - lo > cfg.crossing_tol) {
        if (iterations >= cfg.max_bisections) {
            return Crossing{t0 + 0.5 * (lo + hi), rising, true};
        }
        const double mid = 0.5 * (lo + hi);
        const auto sub = rk4_step<N>(before, rhs, mid);
        const double gm = detail::observe(sub[spec.index], spec, image);
        if ((gm < 0.0) == rising) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++iterations;
    }
    return Crossing{t0 + 0.5 * (lo + hi), rising, false};
}

}  // namespace neuropend
