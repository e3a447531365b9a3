#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "stegodct/errors.hpp"

namespace stegodct {

// Parameters of the discrete fractional chaotic map. These are secret material
// shared between embedder and extractor, on par with the 128-bit key: never
// log or echo them.
//
// The map's nonlinearity is fixed as g(j, x) = gain * y * (1 - y) - y with
// y = frac(|x(j)|), a logistic-form term. Swapping in a different g changes
// every derived permutation, so extraction only works against the same g.
struct FractionalMapParams {
    double x0 = 0.0;    // initial condition, in (0,1)
    double nu = 0.0;    // fractional order, in (0,1]
    double gain = 3.9;  // logistic gain, in (0,4]
};

inline void validate_map_params(const FractionalMapParams& p) {
    if (!(p.x0 > 0.0 && p.x0 < 1.0)) raise(ErrorKind::params, "x0 must lie in (0,1)");
    if (!(p.nu > 0.0 && p.nu <= 1.0)) raise(ErrorKind::params, "nu must lie in (0,1]");
    if (!(p.gain > 0.0 && p.gain <= 4.0)) raise(ErrorKind::params, "gain must lie in (0,4]");
}

namespace detail {

inline double frac_abs(double x) {
    const double a = std::fabs(x);
    return a - std::floor(a);
}

}  // namespace detail

// Lazily extended orbit of the fractional map
//
//   x(n+1) = x(0) + (1/Gamma(nu)) * sum_{0<=j<=n} K(n-j) * g(j, x(j)),
//   K(d)   = Gamma(d+nu) / Gamma(d+1),
//
// evaluated with a pinned operation order (ascending j, kernel via
// exp(lgamma-lgamma), division by Gamma(nu) after the sum) so that two
// implementations of the same recurrence agree bit for bit. Values handed out
// are frac(|x(i)|) in [0,1).
class FractionalMapSequence {
public:
    explicit FractionalMapSequence(const FractionalMapParams& params) : params_(params) {
        validate_map_params(params);
        x_.push_back(params.x0);
        g_.push_back(nonlinearity(params.x0));
        kernel_.push_back(kernel_ratio(0));
        gamma_nu_ = std::tgamma(params.nu);
    }

    const FractionalMapParams& params() const { return params_; }

    // frac(|x(i)|) for i >= 1; i = 0 is the seed and is never emitted.
    double frac_at(std::size_t i) {
        while (x_.size() <= i) step();
        return detail::frac_abs(x_[i]);
    }

private:
    double nonlinearity(double x) const {
        const double y = detail::frac_abs(x);
        return params_.gain * y * (1.0 - y) - y;
    }

    double kernel_ratio(std::size_t d) const {
        // Direct Gamma overflows near d ~ 170; the log-gamma difference does not.
        return std::exp(std::lgamma(double(d) + params_.nu) - std::lgamma(double(d) + 1.0));
    }

    void step() {
        const std::size_t n = x_.size() - 1;  // computing x(n+1)
        while (kernel_.size() <= n) kernel_.push_back(kernel_ratio(kernel_.size()));
        double acc = 0.0;
        for (std::size_t j = 0; j <= n; ++j) acc += kernel_[n - j] * g_[j];
        const double next = params_.x0 + acc / gamma_nu_;
        if (!std::isfinite(next)) {
            raise(ErrorKind::params,
                  "fractional map produced a non-finite value at step " + std::to_string(n + 1));
        }
        x_.push_back(next);
        g_.push_back(nonlinearity(next));
    }

    FractionalMapParams params_;
    double gamma_nu_ = 1.0;
    std::vector<double> x_;       // raw orbit, x_[0] = x0
    std::vector<double> g_;       // g_[j] = g(j, x(j))
    std::vector<double> kernel_;  // kernel_[d] = K(d)
};

// frac(|x(1)|) .. frac(|x(count)|).
inline std::vector<double> fractional_map_sequence(const FractionalMapParams& params,
                                                   std::size_t count) {
    FractionalMapSequence seq(params);
    std::vector<double> out;
    out.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) out.push_back(seq.frac_at(i));
    return out;
}

// Distinct indices in [0,n), in order of first appearance.
using Permutation = std::vector<std::uint32_t>;

// Index permutation of order n: candidate at step i is
// floor(frac(|x(i)|) * 10^14) mod n, starting at i = 1; repeats are skipped
// and iteration continues until n distinct indices have been collected.
inline Permutation chaotic_permutation(FractionalMapSequence& seq, std::size_t n) {
    if (n < 1) raise(ErrorKind::params, "permutation order must be at least 1");
    Permutation out;
    out.reserve(n);
    std::vector<bool> seen(n, false);
    const std::size_t max_draws = 64 * n;
    for (std::size_t i = 1; i <= max_draws && out.size() < n; ++i) {
        const double scaled = std::floor(seq.frac_at(i) * 1e14);
        const auto idx = std::uint32_t(std::uint64_t(scaled) % n);
        if (!seen[idx]) {
            seen[idx] = true;
            out.push_back(idx);
        }
    }
    if (out.size() < n) {
        raise(ErrorKind::params, "chaotic map is degenerate: could not collect " +
                                     std::to_string(n) + " distinct indices");
    }
    return out;
}

inline Permutation chaotic_permutation(const FractionalMapParams& params, std::size_t n) {
    FractionalMapSequence seq(params);
    return chaotic_permutation(seq, n);
}

// Per-chunk embedding schedule: a permutation of the 64 coefficient slots.
using PositionList = std::array<std::uint8_t, 64>;

// Derives position schedules from the map and 64-bit key chunks.
//
// The base permutation (order 64) and the orbit are shared across chunks; the
// schedule for a given chunk pattern is memoized, since a cyclically expanded
// key presents only a handful of distinct chunks.
class ChaoticScheduler {
public:
    explicit ChaoticScheduler(const FractionalMapParams& params)
        : seq_(params), base_(chaotic_permutation(seq_, 64)) {}

    const Permutation& base_permutation() const { return base_; }

    // key_chunk: exactly 64 values in {0,1}.
    //
    // Slots of the base permutation walked alongside a set key bit are taken
    // first, in base order; the remaining slots (still in base order) are then
    // appended after one more chaotic permutation of their positions.
    const PositionList& positions(std::span<const std::uint8_t> key_chunk) {
        if (key_chunk.size() != 64) {
            raise(ErrorKind::params, "key chunk must be exactly 64 bits");
        }
        std::uint64_t pattern = 0;
        for (int j = 0; j < 64; ++j) {
            if (key_chunk[j]) pattern |= std::uint64_t(1) << j;
        }
        if (auto it = memo_.find(pattern); it != memo_.end()) return it->second;

        PositionList out{};
        std::size_t k = 0;
        std::vector<std::uint32_t> remaining;
        for (int j = 0; j < 64; ++j) {
            if (key_chunk[j]) {
                out[k++] = std::uint8_t(base_[j]);
            } else {
                remaining.push_back(base_[j]);
            }
        }
        if (!remaining.empty()) {
            const Permutation sub = chaotic_permutation(seq_, remaining.size());
            for (std::uint32_t idx : sub) out[k++] = std::uint8_t(remaining[idx]);
        }
        return memo_.emplace(pattern, out).first->second;
    }

private:
    FractionalMapSequence seq_;
    Permutation base_;
    std::unordered_map<std::uint64_t, PositionList> memo_;
};

inline PositionList chaotic_positions(std::span<const std::uint8_t> key_chunk,
                                      const FractionalMapParams& params) {
    ChaoticScheduler sched(params);
    return sched.positions(key_chunk);
}

}  // namespace stegodct
