#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace morpho {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

/// Body-frame offsets of the two light sensors on the square dorsal surface
/// [-0.5, 0.5]^2 (body length units).
struct BodyDesign {
    Vec2 l1;
    Vec2 l2;

    /// Symmetric anterior placement: l1 = (0.5, 0.5), l2 = (0.5, -0.5).
    static BodyDesign canonical() { return {{0.5, 0.5}, {0.5, -0.5}}; }
    bool valid() const;
    void validate() const;

    friend bool operator==(const BodyDesign&, const BodyDesign&) = default;
};

/// Contralateral synapse weights, each in [-1, 1].
struct Policy {
    double w1 = 0.0;
    double w2 = 0.0;

    bool valid() const;
    void validate() const;

    friend bool operator==(const Policy&, const Policy&) = default;
};

struct Pose {
    double x = 0.0;
    double y = 0.0;
    double alpha = 0.0;  // heading in radians, never wrapped

    friend bool operator==(const Pose&, const Pose&) = default;
};

/// One phototaxis task. The light always sits at the world origin; only the
/// robot's starting pose differs between environments.
struct Environment {
    Pose start;
};

struct EnvironmentSet {
    std::vector<Environment> environments;

    /// Starts at (d, d), (d, -d), (-d, d), (-d, -d), in that order, truncated
    /// to the first `count` entries. The default d places the robot 4 body
    /// lengths from the light.
    static EnvironmentSet diagonal(double d = kDiagonalOffset, double heading = 0.0,
                                   std::size_t count = 4);
    /// The same set with every start reflected about the x-axis.
    EnvironmentSet mirrored() const;

    std::size_t size() const { return environments.size(); }
    const Environment& operator[](std::size_t k) const { return environments[k]; }

    static constexpr double kDiagonalOffset = 4.0 / std::numbers::sqrt2;
};

struct SimProfile {
    double dt = 0.1;
    int steps = 20000;
    double success_radius = 0.075;
    double sensor_floor = 1e-3;

    /// dt 0.1 for 10^5 steps.
    static SimProfile full() { return {0.1, 100000, 0.075, 1e-3}; }
    /// dt 0.1 for 2 * 10^4 steps; the default for sweeps.
    static SimProfile desk() { return {0.1, 20000, 0.075, 1e-3}; }

    void validate() const;

    /// Largest squared distance whose square root is still <= success_radius.
    /// Comparing squared distances against this value decides success exactly
    /// as `sqrt(d2) <= success_radius` would.
    double success_threshold_sq() const;

    friend bool operator==(const SimProfile&, const SimProfile&) = default;
};

struct TrialResult {
    bool success = false;
    double min_distance = 0.0;  // closest approach of the piecewise-linear path
    int steps_used = 0;
    double end_distance = 0.0;  // distance from the light at termination
    std::vector<double> sensor_trace_1;  // steps_used + 1 samples
    std::vector<double> sensor_trace_2;
};

/// Reduced trial outcome produced by the batched integrator.
struct TrialSummary {
    bool success = false;
    double min_distance = 0.0;
    int steps_used = 0;
    double end_distance = 0.0;

    friend bool operator==(const TrialSummary&, const TrialSummary&) = default;
};

struct TrialSpec {
    BodyDesign design;
    Policy policy;
    Pose start;
};

/// World position of a body-frame offset: (x, y) + R(alpha) * offset.
Vec2 sensor_world_position(const Pose& pose, Vec2 offset);

/// Inverse-square intensity at the sensor, with the squared distance floored
/// at floor^2.
double sensor_value(const Pose& pose, Vec2 offset, double floor);

/// One explicit Euler step. Position is advanced with the pre-step heading,
/// then the heading is advanced.
Pose step(const Pose& pose, const BodyDesign& design, const Policy& policy, double dt,
          double floor);

enum class Traces { record, skip };

TrialResult simulate(const BodyDesign& design, const Policy& policy, const Environment& env,
                     const SimProfile& profile, Traces traces = Traces::record);

/// K results in environment order. Equivalent to K calls to simulate();
/// `workers` only changes how the calls are scheduled.
std::vector<TrialResult> evaluate_all(const BodyDesign& design, const Policy& policy,
                                      const EnvironmentSet& envset, const SimProfile& profile,
                                      std::size_t workers = 1);

/// Integrates many independent trials through the vectorised kernel.
/// Output i is bit-identical to the summary fields of simulate() on specs[i].
std::vector<TrialSummary> run_trials(std::span<const TrialSpec> specs, const SimProfile& profile);

/// run_trials split into contiguous chunks across `workers` threads; the
/// output is independent of `workers`.
std::vector<TrialSummary> run_trials(std::span<const TrialSpec> specs, const SimProfile& profile,
                                     std::size_t workers);

}  // namespace morpho
