#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "stegodct/errors.hpp"
#include "stegodct/image.hpp"

namespace stegodct {

namespace detail {

inline void require_same_geometry(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height || a.channels != b.channels) {
        raise(ErrorKind::format, "images have mismatching geometry");
    }
}

}  // namespace detail

struct PsnrResult {
    double psnr_db = 0.0;  // +infinity when mse == 0
    double mse = 0.0;
    double xi = 0.0;  // peak value: max sample over both images
};

inline PsnrResult psnr(const Image& cover, const Image& stego) {
    detail::require_same_geometry(cover, stego);
    const std::size_t n = cover.samples.size();
    double sum_sq = 0.0;
    int peak = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = double(cover.samples[i]) - double(stego.samples[i]);
        sum_sq += d * d;
        peak = std::max({peak, int(cover.samples[i]), int(stego.samples[i])});
    }
    PsnrResult r;
    r.mse = sum_sq / double(n);
    r.xi = double(peak);
    r.psnr_db = r.mse == 0.0 ? std::numeric_limits<double>::infinity()
                             : 10.0 * std::log10(r.xi * r.xi / r.mse);
    return r;
}

// Single global universal image quality index, in [-1,1]; 1 for identical
// images. Variances and covariance are (N-1)-normalized. Degenerate cases:
// both variances zero with equal means is the identical-constant limit (1);
// any other zero denominator yields 0.
inline double uiqi(const Image& cover, const Image& stego) {
    detail::require_same_geometry(cover, stego);
    const std::size_t n = cover.samples.size();
    if (n < 2) raise(ErrorKind::params, "uiqi needs at least 2 samples");

    double sum_c = 0.0, sum_s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_c += double(cover.samples[i]);
        sum_s += double(stego.samples[i]);
    }
    const double mean_c = sum_c / double(n);
    const double mean_s = sum_s / double(n);

    double var_c = 0.0, var_s = 0.0, cov = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dc = double(cover.samples[i]) - mean_c;
        const double ds = double(stego.samples[i]) - mean_s;
        var_c += dc * dc;
        var_s += ds * ds;
        cov += dc * ds;
    }
    var_c /= double(n - 1);
    var_s /= double(n - 1);
    cov /= double(n - 1);

    const double var_sum = var_c + var_s;
    const double mean_sq_sum = mean_c * mean_c + mean_s * mean_s;
    if (var_sum == 0.0) return mean_c == mean_s ? 1.0 : 0.0;
    if (mean_sq_sum == 0.0) return 0.0;
    return (4.0 * cov / var_sum) * (mean_c * mean_s / mean_sq_sum);
}

// 1 - sum((C-S)^2) / sum(C^2).
inline double image_fidelity(const Image& cover, const Image& stego) {
    detail::require_same_geometry(cover, stego);
    double sum_sq_err = 0.0, sum_sq_cover = 0.0;
    for (std::size_t i = 0; i < cover.samples.size(); ++i) {
        const double c = double(cover.samples[i]);
        const double d = c - double(stego.samples[i]);
        sum_sq_err += d * d;
        sum_sq_cover += c * c;
    }
    if (sum_sq_cover == 0.0) {
        raise(ErrorKind::params, "image fidelity is undefined for an all-zero cover");
    }
    return 1.0 - sum_sq_err / sum_sq_cover;
}

// RE(P_C || P_S) = sum P_C |log(P_C / P_S)| over 256-bin histograms of all
// samples (channels pooled), natural log. Empty cover bins contribute nothing;
// an empty stego bin under cover mass is floored at eps = 1e-10.
inline double relative_entropy(const Image& cover, const Image& stego) {
    detail::require_same_geometry(cover, stego);
    std::array<std::uint64_t, 256> hist_c{}, hist_s{};
    for (std::uint8_t v : cover.samples) ++hist_c[v];
    for (std::uint8_t v : stego.samples) ++hist_s[v];
    const double n = double(cover.samples.size());
    constexpr double eps = 1e-10;

    double re = 0.0;
    for (int b = 0; b < 256; ++b) {
        if (hist_c[b] == 0) continue;
        const double pc = double(hist_c[b]) / n;
        const double ps = hist_s[b] == 0 ? eps : double(hist_s[b]) / n;
        re += pc * std::fabs(std::log(pc / ps));
    }
    return re;
}

struct MetricsReport {
    double psnr_db = 0.0;
    double mse = 0.0;
    double xi = 0.0;
    double uiqi = 0.0;
    double image_fidelity = 0.0;
    double relative_entropy = 0.0;
};

inline MetricsReport compute_metrics(const Image& cover, const Image& stego) {
    MetricsReport r;
    const PsnrResult p = psnr(cover, stego);
    r.psnr_db = p.psnr_db;
    r.mse = p.mse;
    r.xi = p.xi;
    r.uiqi = uiqi(cover, stego);
    r.image_fidelity = image_fidelity(cover, stego);
    r.relative_entropy = relative_entropy(cover, stego);
    return r;
}

struct BoxplotSummary {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    double lower_fence = 0.0;  // q1 - 1.5 iqr
    double upper_fence = 0.0;  // q3 + 1.5 iqr
    std::vector<double> outliers;
};

// Quartiles by linear interpolation of the order statistics at rank p*(n-1);
// outliers are the values strictly outside the fences.
inline BoxplotSummary boxplot_summary(std::span<const double> values) {
    if (values.empty()) raise(ErrorKind::params, "boxplot of an empty sample");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    auto quantile = [&](double p) {
        const double rank = p * double(sorted.size() - 1);
        const std::size_t lo = std::size_t(rank);
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        const double frac = rank - double(lo);
        return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
    };

    BoxplotSummary s;
    s.q1 = quantile(0.25);
    s.median = quantile(0.5);
    s.q3 = quantile(0.75);
    s.iqr = s.q3 - s.q1;
    s.lower_fence = s.q1 - 1.5 * s.iqr;
    s.upper_fence = s.q3 + 1.5 * s.iqr;
    for (double v : sorted) {
        if (v < s.lower_fence || v > s.upper_fence) s.outliers.push_back(v);
    }
    return s;
}

}  // namespace stegodct
