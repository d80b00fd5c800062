#include "morpho/sim/vehicle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "morpho/parallel.hpp"
#include "morpho/sim/lanes.hpp"

namespace morpho {

namespace {

using lanes::vdouble;

bool in_box(double v, double half) { return std::isfinite(v) && v >= -half && v <= half; }

// Advances (x, y, alpha) by one Euler step and reports the sensor readings
// taken at the pre-step pose.
template <class V, class L>
inline void advance(V& x, V& y, V& alpha, L l1x, L l1y, L l2x, L l2y, L w1, L w2, double dt,
                    double floor_sq, V& s1, V& s2) {
    V s, c;
    lanes::sincos(alpha, s, c);
    const V p1x = x + (c * l1x - s * l1y);
    const V p1y = y + (s * l1x + c * l1y);
    const V p2x = x + (c * l2x - s * l2y);
    const V p2y = y + (s * l2x + c * l2y);
    const V d1 = p1x * p1x + p1y * p1y;
    const V d2 = p2x * p2x + p2y * p2y;
    s1 = 1.0 / (d1 > floor_sq ? d1 : floor_sq);
    s2 = 1.0 / (d2 > floor_sq ? d2 : floor_sq);
    const V v = (w1 * s1 + w2 * s2) * 0.5;
    x = x + v * c * dt;
    y = y + v * s * dt;
    alpha = alpha + (w1 * s1 - w2 * s2) * dt;
}

// Squared distance from the origin to the segment (x0, y0) -> (x1, y1).
template <class V>
inline V segment_distance_sq(V x0, V y0, V x1, V y1) {
    const V dx = x1 - x0;
    const V dy = y1 - y0;
    const V len = dx * dx + dy * dy;
    V t = -(x0 * dx + y0 * dy) / len;
    t = t < 0.0 ? 0.0 : t;
    t = t > 1.0 ? 1.0 : t;
    t = len > 0.0 ? t : 0.0;
    const V qx = x0 + t * dx;
    const V qy = y0 + t * dy;
    return qx * qx + qy * qy;
}

void check_spec(const BodyDesign& design, const Policy& policy, const Pose& start) {
    design.validate();
    policy.validate();
    if (!std::isfinite(start.x) || !std::isfinite(start.y) || !std::isfinite(start.alpha)) {
        throw std::invalid_argument("start pose must be finite");
    }
}

}  // namespace

bool BodyDesign::valid() const {
    return in_box(l1.x, 0.5) && in_box(l1.y, 0.5) && in_box(l2.x, 0.5) && in_box(l2.y, 0.5);
}

void BodyDesign::validate() const {
    if (!valid()) throw std::invalid_argument("sensor offsets must lie in [-0.5, 0.5]^2");
}

bool Policy::valid() const { return in_box(w1, 1.0) && in_box(w2, 1.0); }

void Policy::validate() const {
    if (!valid()) throw std::invalid_argument("policy weights must lie in [-1, 1]");
}

EnvironmentSet EnvironmentSet::diagonal(double d, double heading, std::size_t count) {
    if (count < 1 || count > 4) throw std::invalid_argument("diagonal set holds 1 to 4 environments");
    if (!(d > 0.0) || !std::isfinite(d)) throw std::invalid_argument("diagonal offset must be positive");
    const std::array<Vec2, 4> corners{{{d, d}, {d, -d}, {-d, d}, {-d, -d}}};
    EnvironmentSet set;
    for (std::size_t k = 0; k < count; ++k) {
        set.environments.push_back({{corners[k].x, corners[k].y, heading}});
    }
    return set;
}

EnvironmentSet EnvironmentSet::mirrored() const {
    EnvironmentSet out;
    for (const auto& env : environments) {
        out.environments.push_back({{env.start.x, -env.start.y, -env.start.alpha}});
    }
    return out;
}

void SimProfile::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (steps < 1) throw std::invalid_argument("steps must be at least 1");
    if (!(sensor_floor > 0.0) || !(sensor_floor < success_radius) || !std::isfinite(success_radius)) {
        throw std::invalid_argument("require 0 < sensor_floor < success_radius");
    }
}

double SimProfile::success_threshold_sq() const {
    double t = success_radius * success_radius;
    while (std::sqrt(t) > success_radius) t = std::nextafter(t, 0.0);
    for (;;) {
        const double up = std::nextafter(t, std::numeric_limits<double>::infinity());
        if (std::sqrt(up) > success_radius) break;
        t = up;
    }
    return t;
}

Vec2 sensor_world_position(const Pose& pose, Vec2 offset) {
    double s, c;
    lanes::sincos(pose.alpha, s, c);
    return {pose.x + (c * offset.x - s * offset.y), pose.y + (s * offset.x + c * offset.y)};
}

double sensor_value(const Pose& pose, Vec2 offset, double floor) {
    if (!(floor > 0.0)) throw std::invalid_argument("sensor floor must be positive");
    const Vec2 p = sensor_world_position(pose, offset);
    const double d2 = p.x * p.x + p.y * p.y;
    const double floor_sq = floor * floor;
    return 1.0 / (d2 > floor_sq ? d2 : floor_sq);
}

Pose step(const Pose& pose, const BodyDesign& design, const Policy& policy, double dt, double floor) {
    Pose next = pose;
    double s1, s2;
    advance(next.x, next.y, next.alpha, design.l1.x, design.l1.y, design.l2.x, design.l2.y,
            policy.w1, policy.w2, dt, floor * floor, s1, s2);
    return next;
}

TrialResult simulate(const BodyDesign& design, const Policy& policy, const Environment& env,
                     const SimProfile& profile, Traces traces) {
    profile.validate();
    check_spec(design, policy, env.start);

    const bool record = traces == Traces::record;
    const double threshold = profile.success_threshold_sq();
    const double floor_sq = profile.sensor_floor * profile.sensor_floor;
    const double dt = profile.dt;
    const auto& [l1, l2] = design;

    TrialResult result;
    double x = env.start.x;
    double y = env.start.y;
    double alpha = env.start.alpha;
    double best = x * x + y * y;
    if (record) {
        result.sensor_trace_1.reserve(64);
        result.sensor_trace_2.reserve(64);
    }

    if (best <= threshold) {
        result.success = true;
    } else {
        for (int k = 1; k <= profile.steps; ++k) {
            const double x0 = x;
            const double y0 = y;
            double s1, s2;
            advance(x, y, alpha, l1.x, l1.y, l2.x, l2.y, policy.w1, policy.w2, dt, floor_sq, s1, s2);
            if (record) {
                result.sensor_trace_1.push_back(s1);
                result.sensor_trace_2.push_back(s2);
            }
            const double d2 = segment_distance_sq(x0, y0, x, y);
            best = d2 < best ? d2 : best;
            result.steps_used = k;
            if (best <= threshold) {
                result.success = true;
                break;
            }
        }
    }

    if (record) {
        // reading at the terminal pose
        const Pose last{x, y, alpha};
        result.sensor_trace_1.push_back(sensor_value(last, l1, profile.sensor_floor));
        result.sensor_trace_2.push_back(sensor_value(last, l2, profile.sensor_floor));
    }
    result.min_distance = std::sqrt(best);
    result.end_distance = std::sqrt(x * x + y * y);
    return result;
}

std::vector<TrialResult> evaluate_all(const BodyDesign& design, const Policy& policy,
                                      const EnvironmentSet& envset, const SimProfile& profile,
                                      std::size_t workers) {
    return parallel_map(envset.size(), workers, [&](std::size_t k) {
        return simulate(design, policy, envset[k], profile);
    });
}

std::vector<TrialSummary> run_trials(std::span<const TrialSpec> specs, const SimProfile& profile) {
    profile.validate();
    constexpr int kWidth = lanes::kWidth;
    constexpr int kChunk = 8;  // steps between lane retire/refill passes

    std::vector<TrialSummary> out(specs.size());
    const double threshold = profile.success_threshold_sq();
    const double floor_sq = profile.sensor_floor * profile.sensor_floor;
    const double dt = profile.dt;
    const double horizon = profile.steps;

    vdouble x{}, y{}, alpha{}, l1x{}, l1y{}, l2x{}, l2y{}, w1{}, w2{}, best{}, steps{};
    vdouble done = lanes::broadcast(1.0);
    std::array<std::ptrdiff_t, kWidth> slot;
    slot.fill(-1);
    std::size_t next = 0;

    auto load = [&](int lane) {
        while (next < specs.size()) {
            const std::size_t i = next++;
            const TrialSpec& t = specs[i];
            check_spec(t.design, t.policy, t.start);
            const double d2 = t.start.x * t.start.x + t.start.y * t.start.y;
            if (d2 <= threshold) {
                out[i] = {true, std::sqrt(d2), 0, std::sqrt(d2)};
                continue;
            }
            x[lane] = t.start.x;
            y[lane] = t.start.y;
            alpha[lane] = t.start.alpha;
            l1x[lane] = t.design.l1.x;
            l1y[lane] = t.design.l1.y;
            l2x[lane] = t.design.l2.x;
            l2y[lane] = t.design.l2.y;
            w1[lane] = t.policy.w1;
            w2[lane] = t.policy.w2;
            best[lane] = d2;
            steps[lane] = 0.0;
            done[lane] = 0.0;
            slot[lane] = static_cast<std::ptrdiff_t>(i);
            return;
        }
        slot[lane] = -1;
        done[lane] = 1.0;
    };

    for (int lane = 0; lane < kWidth; ++lane) load(lane);

    for (;;) {
        bool active = false;
        for (int lane = 0; lane < kWidth; ++lane) active |= slot[lane] >= 0;
        if (!active) break;

        for (int k = 0; k < kChunk; ++k) {
            vdouble nx = x, ny = y, na = alpha, s1, s2;
            advance(nx, ny, na, l1x, l1y, l2x, l2y, w1, w2, dt, floor_sq, s1, s2);
            const vdouble d2 = segment_distance_sq(x, y, nx, ny);
            const auto live = done == 0.0;
            const vdouble nb = d2 < best ? d2 : best;
            const vdouble ns = steps + 1.0;
            x = live ? nx : x;
            y = live ? ny : y;
            alpha = live ? na : alpha;
            best = live ? nb : best;
            steps = live ? ns : steps;
            done = (live && (nb <= threshold || ns >= horizon)) ? 1.0 : done;
        }

        for (int lane = 0; lane < kWidth; ++lane) {
            if (slot[lane] < 0 || done[lane] == 0.0) continue;
            out[static_cast<std::size_t>(slot[lane])] = {
                best[lane] <= threshold, std::sqrt(best[lane]), static_cast<int>(steps[lane]),
                std::sqrt(x[lane] * x[lane] + y[lane] * y[lane])};
            load(lane);
        }
    }
    return out;
}

std::vector<TrialSummary> run_trials(std::span<const TrialSpec> specs, const SimProfile& profile,
                                     std::size_t workers) {
    constexpr std::size_t kPiece = 256;
    const std::size_t pieces = (specs.size() + kPiece - 1) / kPiece;
    if (workers <= 1 || pieces <= 1) return run_trials(specs, profile);
    std::vector<TrialSummary> out(specs.size());
    parallel_for(pieces, workers, [&](std::size_t p) {
        const std::size_t begin = p * kPiece;
        const auto part = run_trials(specs.subspan(begin, std::min(kPiece, specs.size() - begin)), profile);
        std::copy(part.begin(), part.end(), out.begin() + static_cast<std::ptrdiff_t>(begin));
    });
    return out;
}

}  // namespace morpho
