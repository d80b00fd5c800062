#pragma once

// Lane-generic arithmetic shared by the scalar and batched integrators.
//
// Every routine here is written once as a template over the lane type and
// instantiated for `double` and for `vdouble`. Both instantiations perform the
// same IEEE operations in the same order, so a trial integrated in a vector
// lane is bit-identical to the same trial integrated by the scalar path.
// This only holds with FMA contraction disabled (-ffp-contract=off).

#include <cstdint>

namespace morpho::lanes {

inline constexpr int kWidth = 8;

using vdouble = double __attribute__((vector_size(8 * kWidth)));
using vmask = std::int64_t __attribute__((vector_size(8 * kWidth)));

inline double sqrt(double x) { return __builtin_sqrt(x); }

inline vdouble sqrt(vdouble x) {
    vdouble r;
    for (int i = 0; i < kWidth; ++i) r[i] = __builtin_sqrt(x[i]);
    return r;
}

inline vdouble broadcast(double v) { return vdouble{} + v; }

// sin and cos of an arbitrary (unwrapped) angle.
//
// Cody-Waite reduction by pi/2 in three pieces, then the fdlibm minimax
// kernels on [-pi/4, pi/4]. Accurate to about 1 ulp for |x| < 2^20 * pi/2;
// beyond that the reduction degrades gracefully but stays deterministic.
// Only +, -, * and comparisons are used, so the result does not depend on
// the platform libm.
template <class V>
inline void sincos(V x, V& s, V& c) {
    constexpr double kTwoOverPi = 6.36619772367581382433e-01;
    constexpr double kPio2Hi = 1.57079632673412561417e+00;
    constexpr double kPio2Mid = 6.07710050630396597660e-11;
    constexpr double kPio2Lo = 2.02226624871116645580e-21;
    // Adding and subtracting 1.5 * 2^52 rounds to the nearest integer.
    constexpr double kRound = 6755399441055744.0;

    V n = (x * kTwoOverPi + kRound) - kRound;
    V r = ((x - n * kPio2Hi) - n * kPio2Mid) - n * kPio2Lo;

    // quadrant = n mod 4, computed in floating point
    V quarter = n * 0.25;
    V fl = (quarter + kRound) - kRound;
    fl = fl > quarter ? fl - 1.0 : fl;
    V q = n - 4.0 * fl;

    V z = r * r;
    V sin_r = r + (z * r) * (-1.66666666666666324348e-01 +
                             z * (8.33333333332248946124e-03 +
                                  z * (-1.98412698298579493134e-04 +
                                       z * (2.75573137070700676789e-06 +
                                            z * (-2.50507602534068634195e-08 +
                                                 z * 1.58969099521155010221e-10)))));
    V z2 = z * z;
    V poly = z * (4.16666666666666019037e-02 +
                  z * (-1.38888888888741095749e-03 + z * 2.48015872894767294178e-05)) +
             z2 * z2 *
                 (-2.75573143513906633035e-07 +
                  z * (2.08757232129817482790e-09 + z * -1.13596475577881948265e-11));
    V half_z = 0.5 * z;
    V w = 1.0 - half_z;
    V cos_r = w + (((1.0 - w) - half_z) + z * poly);

    auto q0 = q == 0.0;
    auto q1 = q == 1.0;
    auto q2 = q == 2.0;
    s = q0 ? sin_r : (q1 ? cos_r : (q2 ? -sin_r : -cos_r));
    c = q0 ? cos_r : (q1 ? -sin_r : (q2 ? -cos_r : sin_r));
}

}  // namespace morpho::lanes
