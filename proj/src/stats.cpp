#include "sep/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sep/rng.hpp"

namespace sep {

double empirical_quantile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
    if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in (0,1]");
    std::sort(values.begin(), values.end());
    double r = static_cast<double>(values.size());
    long long idx = static_cast<long long>(std::ceil(q * r)) - 1;
    idx = std::max(0LL, std::min(idx, static_cast<long long>(values.size()) - 1));
    return values[static_cast<size_t>(idx)];
}

double bootstrap_quantile_stderr(const std::vector<double>& values, double q, int resamples,
                                 uint64_t seed) {
    if (values.size() < 2 || resamples < 2) return 0.0;
    SplitMix64 rng(subseed(seed, /*tag=*/0x626f6f74));
    std::vector<double> stats(static_cast<size_t>(resamples));
    std::vector<double> draw(values.size());
    for (int b = 0; b < resamples; ++b) {
        for (auto& d : draw) d = values[rng.below(values.size())];
        stats[static_cast<size_t>(b)] = empirical_quantile(draw, q);
    }
    MeanStderr ms = sample_mean(stats);
    return ms.stderr_ * std::sqrt(static_cast<double>(resamples));  // sd, not sd/sqrt(B)
}

MeanStderr sample_mean(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("mean of an empty sample");
    MeanStderr ms;
    for (double v : values) ms.mean += v;
    ms.mean /= static_cast<double>(values.size());
    if (values.size() == 1) return ms;
    double ss = 0.0;
    for (double v : values) ss += (v - ms.mean) * (v - ms.mean);
    double var = ss / static_cast<double>(values.size() - 1);
    ms.stderr_ = std::sqrt(var / static_cast<double>(values.size()));
    return ms;
}

MeanStderr batch_means(const std::vector<double>& series, int batches) {
    if (batches < 2) throw std::invalid_argument("batch means needs at least 2 batches");
    size_t per = series.size() / static_cast<size_t>(batches);
    if (per == 0) throw std::invalid_argument("series shorter than the batch count");
    std::vector<double> means(static_cast<size_t>(batches), 0.0);
    for (int b = 0; b < batches; ++b) {
        double s = 0.0;
        for (size_t i = 0; i < per; ++i) s += series[static_cast<size_t>(b) * per + i];
        means[static_cast<size_t>(b)] = s / static_cast<double>(per);
    }
    return sample_mean(means);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("line fit needs matching samples of size >= 2");
    size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("line fit needs non-constant x");

    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.residuals.resize(n);
    double ssr = 0.0;
    for (size_t i = 0; i < n; ++i) {
        fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += fit.residuals[i] * fit.residuals[i];
    }
    if (n > 2) fit.slope_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
    return fit;
}

ChiSquareResult two_sample_chi_square(const std::vector<long long>& a,
                                      const std::vector<long long>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("chi-square needs count vectors of equal length");
    long long ta = 0, tb = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] < 0 || b[i] < 0) throw std::invalid_argument("negative count");
        ta += a[i];
        tb += b[i];
    }
    if (ta != tb)
        throw std::invalid_argument("equal-size two-sample statistic needs equal totals");

    ChiSquareResult res;
    int cells = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        double s = static_cast<double>(a[i] + b[i]);
        if (s == 0.0) continue;
        double d = static_cast<double>(a[i] - b[i]);
        res.statistic += d * d / s;
        ++cells;
    }
    res.dof = std::max(1, cells - 1);
    res.threshold = chi_square_quantile_99(res.dof);
    res.consistent = res.statistic <= res.threshold;
    return res;
}

double chi_square_quantile_99(int dof) {
    if (dof < 1) throw std::invalid_argument("chi-square needs dof >= 1");
    // Wilson-Hilferty cube approximation at the 0.99 normal quantile
    double k = static_cast<double>(dof);
    double z = 2.3263478740408408;
    double c = 1.0 - 2.0 / (9.0 * k) + z * std::sqrt(2.0 / (9.0 * k));
    return k * c * c * c;
}

}  // namespace sep
