#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "stegodct/errors.hpp"
#include "stegodct/image.hpp"

namespace stegodct {

// Real-valued 8x8 DCT coefficients, row-major, (0,0) = DC.
using CoeffBlock = std::array<double, 64>;
// Quantized integer coefficients, row-major.
using QuantBlock = std::array<int, 64>;
// The 64 quantized coefficients in zigzag order: element 0 is DC, elements
// 1..8 are the first eight AC coefficients.
using ZigzagVec = std::array<int, 64>;

struct QuantTable {
    double mu = 0.0;
    std::array<double, 64> entries{};  // every entry >= 1
};

namespace detail {

// Base quantification matrix; the table used at quality mu is
// max(1, (100-mu)/50 * base).
inline constexpr std::array<double, 64> kQuantBase = {
    16, 11, 10, 16, 24,  40,  51,  61,   //
    12, 12, 14, 19, 26,  58,  60,  55,   //
    14, 13, 16, 24, 40,  57,  69,  56,   //
    14, 17, 22, 29, 51,  87,  80,  62,   //
    18, 22, 37, 56, 68,  109, 103, 77,   //
    24, 35, 55, 64, 81,  104, 113, 92,   //
    49, 64, 78, 87, 103, 121, 120, 101,  //
    72, 92, 95, 98, 112, 100, 103, 99,
};

// basis[u][i] = sigma(u) * cos(pi*u*(2i+1)/16) / 2, so that both transform
// directions are plain double matrix products against the same table.
inline const std::array<std::array<double, 8>, 8>& dct_basis() {
    static const std::array<std::array<double, 8>, 8> table = [] {
        std::array<std::array<double, 8>, 8> t{};
        const double pi = std::acos(-1.0);
        for (int u = 0; u < 8; ++u) {
            const double sigma = u == 0 ? std::sqrt(0.5) : 1.0;
            for (int i = 0; i < 8; ++i) {
                t[u][i] = sigma * std::cos(pi * u * (2 * i + 1) / 16.0) / 2.0;
            }
        }
        return t;
    }();
    return table;
}

// Zigzag position -> row-major index, generated from the diagonal walk:
// even diagonals run bottom-left to top-right, odd ones the other way.
inline constexpr std::array<int, 64> make_zigzag_index() {
    std::array<int, 64> idx{};
    int pos = 0;
    for (int s = 0; s <= 14; ++s) {
        const int lo = s > 7 ? s - 7 : 0;
        const int hi = s < 7 ? s : 7;
        if (s % 2 == 1) {
            for (int i = lo; i <= hi; ++i) idx[pos++] = i * 8 + (s - i);
        } else {
            for (int i = hi; i >= lo; --i) idx[pos++] = i * 8 + (s - i);
        }
    }
    return idx;
}

inline constexpr std::array<int, 64> kZigzagIndex = make_zigzag_index();

}  // namespace detail

// Nearest integer, ties away from zero. This one rule is used everywhere a
// real value becomes an integer so embedder and extractor cannot disagree.
inline long round_half_away(double x) { return std::lround(x); }

inline CoeffBlock dct_forward(const PixelBlock& block) {
    const auto& basis = detail::dct_basis();
    std::array<std::array<double, 8>, 8> tmp{};
    for (int u = 0; u < 8; ++u) {
        for (int j = 0; j < 8; ++j) {
            double acc = 0.0;
            for (int i = 0; i < 8; ++i) acc += basis[u][i] * block[i * 8 + j];
            tmp[u][j] = acc;
        }
    }
    CoeffBlock out{};
    for (int u = 0; u < 8; ++u) {
        for (int v = 0; v < 8; ++v) {
            double acc = 0.0;
            for (int j = 0; j < 8; ++j) acc += basis[v][j] * tmp[u][j];
            out[u * 8 + v] = acc;
        }
    }
    return out;
}

// Real-valued spatial tile; round_half_away + clamping happen at assembly.
inline std::array<double, 64> dct_inverse(const CoeffBlock& coeffs) {
    const auto& basis = detail::dct_basis();
    std::array<std::array<double, 8>, 8> tmp{};
    for (int i = 0; i < 8; ++i) {
        for (int v = 0; v < 8; ++v) {
            double acc = 0.0;
            for (int u = 0; u < 8; ++u) acc += basis[u][i] * coeffs[u * 8 + v];
            tmp[i][v] = acc;
        }
    }
    std::array<double, 64> out{};
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            double acc = 0.0;
            for (int v = 0; v < 8; ++v) acc += basis[v][j] * tmp[i][v];
            out[i * 8 + j] = acc;
        }
    }
    return out;
}

inline PixelBlock round_to_pixels(const std::array<double, 64>& tile) {
    PixelBlock out{};
    for (int i = 0; i < 64; ++i) out[i] = int(round_half_away(tile[i]));
    return out;
}

inline QuantTable build_quant_table(double mu) {
    if (!(mu > 50.0 && mu < 100.0)) {
        raise(ErrorKind::params, "quality factor must lie strictly between 50 and 100");
    }
    const double chi = (100.0 - mu) / 50.0;
    QuantTable table;
    table.mu = mu;
    for (int i = 0; i < 64; ++i) {
        table.entries[i] = std::max(1.0, chi * detail::kQuantBase[i]);
    }
    return table;
}

inline QuantBlock quantize(const CoeffBlock& coeffs, const QuantTable& table) {
    QuantBlock out{};
    for (int i = 0; i < 64; ++i) {
        out[i] = int(round_half_away(coeffs[i] / table.entries[i]));
    }
    return out;
}

inline CoeffBlock dequantize(const QuantBlock& block, const QuantTable& table) {
    CoeffBlock out{};
    for (int i = 0; i < 64; ++i) {
        out[i] = double(round_half_away(block[i] * table.entries[i]));
    }
    return out;
}

inline ZigzagVec zigzag(const QuantBlock& block) {
    ZigzagVec out{};
    for (int p = 0; p < 64; ++p) out[p] = block[detail::kZigzagIndex[p]];
    return out;
}

inline QuantBlock inverse_zigzag(const ZigzagVec& v) {
    QuantBlock out{};
    for (int p = 0; p < 64; ++p) out[detail::kZigzagIndex[p]] = v[p];
    return out;
}

}  // namespace stegodct
