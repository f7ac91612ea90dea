#pragma once

#include <cstdint>
#include <vector>

namespace sep {

// q-quantile of a sample by the ceiling rule: the ceil(q*R)-th smallest value
// (1-indexed). Copies and sorts internally. Requires q in (0, 1].
double empirical_quantile(std::vector<double> values, double q);

// Bootstrap standard error of empirical_quantile over `resamples` resamples.
double bootstrap_quantile_stderr(const std::vector<double>& values, double q, int resamples,
                                 uint64_t seed);

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
};

MeanStderr sample_mean(const std::vector<double>& values);

// Batch-means standard error for a correlated time series: split into
// `batches` equal batches, use the batch averages' spread.
MeanStderr batch_means(const std::vector<double>& series, int batches);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    std::vector<double> residuals;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double threshold = 0.0;   // 0.99 quantile of chi-square with `dof`
    bool consistent = false;  // statistic <= threshold
};

// Two-sample homogeneity statistic for equal-size count vectors:
// sum (a_i - b_i)^2 / (a_i + b_i) over cells with a_i + b_i > 0, dof = number
// of such cells - 1. Valid when both samples have the same total.
ChiSquareResult two_sample_chi_square(const std::vector<long long>& a,
                                      const std::vector<long long>& b);

// Wilson-Hilferty approximation of the chi-square 0.99 quantile.
double chi_square_quantile_99(int dof);

}  // namespace sep
