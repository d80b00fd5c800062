#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace morpho {

struct StatResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

/// Regularised incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

/// Two-sided tail probability of Student's t with `df` degrees of freedom.
double student_t_two_sided(double t, double df);

/// Sample correlation with a two-sided p from t = r sqrt((n-2)/(1-r^2)).
/// Requires equal lengths >= 3 and non-zero variance in both series.
StatResult pearson(std::span<const double> x, std::span<const double> y);

/// Ranks 1..n, ties receive their average rank.
std::vector<double> average_ranks(std::span<const double> x);

/// Pearson correlation of the average ranks.
StatResult spearman(std::span<const double> x, std::span<const double> y);

/// Number of labelings giving each value of U (index = U) when there are no
/// ties; sums to C(n1 + n2, n1).
std::vector<std::uint64_t> mann_whitney_null_counts(std::size_t n1, std::size_t n2);

/// Mann-Whitney U for sample `a` (pairs a_i > b_j, ties count 1/2).
/// Exact two-sided p when n1 + n2 <= 16 and no value is tied; otherwise the
/// normal approximation with tie and continuity corrections.
StatResult mann_whitney(std::span<const double> a, std::span<const double> b);

/// min(1, p * comparisons)
double bonferroni(double p, std::size_t comparisons);

}  // namespace morpho
