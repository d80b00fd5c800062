#include "morpho/analysis/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace morpho {

namespace {

// Continued fraction for I_x(a, b) (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    return h;
}

double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("incomplete beta needs a, b > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("incomplete beta needs x in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                             b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double df) {
    if (!(df > 0.0)) throw std::invalid_argument("degrees of freedom must be positive");
    if (std::isnan(t)) throw std::invalid_argument("t statistic is NaN");
    if (std::isinf(t)) return 0.0;
    return std::clamp(incomplete_beta(0.5 * df, 0.5, df / (df + t * t)), 0.0, 1.0);
}

StatResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("pearson: series lengths differ");
    if (x.size() < 3) throw std::invalid_argument("pearson: need at least 3 points");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: zero variance");

    StatResult out;
    out.n = x.size();
    out.statistic = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double df = static_cast<double>(x.size()) - 2.0;
    const double one_minus = 1.0 - out.statistic * out.statistic;
    if (one_minus <= 0.0) {
        out.p_value = 0.0;
    } else {
        out.p_value = student_t_two_sided(out.statistic * std::sqrt(df / one_minus), df);
    }
    return out;
}

std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

StatResult spearman(std::span<const double> x, std::span<const double> y) {
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

std::vector<std::uint64_t> mann_whitney_null_counts(std::size_t n1, std::size_t n2) {
    if (n1 + n2 > 60) throw std::invalid_argument("exact U distribution limited to n1 + n2 <= 60");
    // table[i][j] is the distribution for sizes (i, j); the largest pooled value
    // belongs to the first sample (adding j to U) or to the second.
    std::vector<std::vector<std::vector<std::uint64_t>>> table(
        n1 + 1, std::vector<std::vector<std::uint64_t>>(n2 + 1));
    for (std::size_t i = 0; i <= n1; ++i) {
        for (std::size_t j = 0; j <= n2; ++j) {
            auto& dist = table[i][j];
            dist.assign(i * j + 1, 0);
            if (i == 0 || j == 0) {
                dist[0] = 1;
                continue;
            }
            const auto& from_first = table[i - 1][j];
            const auto& from_second = table[i][j - 1];
            for (std::size_t u = 0; u < from_first.size(); ++u) dist[u + j] += from_first[u];
            for (std::size_t u = 0; u < from_second.size(); ++u) dist[u] += from_second[u];
        }
    }
    return table[n1][n2];
}

StatResult mann_whitney(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("mann-whitney needs two non-empty samples");
    const std::size_t n1 = a.size();
    const std::size_t n2 = b.size();

    double u = 0.0;
    for (double ai : a) {
        for (double bj : b) {
            if (ai > bj) u += 1.0;
            else if (ai == bj) u += 0.5;
        }
    }

    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    std::sort(pooled.begin(), pooled.end());
    double tie_term = 0.0;
    bool ties = false;
    for (std::size_t i = 0; i < pooled.size();) {
        std::size_t j = i;
        while (j + 1 < pooled.size() && pooled[j + 1] == pooled[i]) ++j;
        const double t = static_cast<double>(j - i + 1);
        if (t > 1.0) {
            ties = true;
            tie_term += t * t * t - t;
        }
        i = j + 1;
    }

    StatResult out;
    out.statistic = u;
    out.n = n1 + n2;
    out.n1 = n1;
    out.n2 = n2;

    if (!ties && n1 + n2 <= 16) {
        const auto counts = mann_whitney_null_counts(n1, n2);
        const auto observed = static_cast<std::size_t>(u);
        std::uint64_t total = 0, below = 0, above = 0;
        for (std::size_t v = 0; v < counts.size(); ++v) {
            total += counts[v];
            if (v <= observed) below += counts[v];
            if (v >= observed) above += counts[v];
        }
        const double tail = static_cast<double>(std::min(below, above)) / static_cast<double>(total);
        out.p_value = std::min(1.0, 2.0 * tail);
        return out;
    }

    const double nn = static_cast<double>(n1 + n2);
    const double mu = 0.5 * static_cast<double>(n1) * static_cast<double>(n2);
    const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                       ((nn + 1.0) - tie_term / (nn * (nn - 1.0)));
    if (!(var > 0.0)) {
        out.p_value = 1.0;
        return out;
    }
    const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
    out.p_value = std::min(1.0, std::erfc(z / std::numbers::sqrt2));
    return out;
}

double bonferroni(double p, std::size_t comparisons) {
    return std::min(1.0, p * static_cast<double>(comparisons));
}

}  // namespace morpho
