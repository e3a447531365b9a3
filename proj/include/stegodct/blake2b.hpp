#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <span>

namespace stegodct {

namespace detail {

inline constexpr std::array<std::uint64_t, 8> kBlake2bIv = {
    0x6a09e667f3bcc908ULL, 0xbb67ae8584caa73bULL,
    0x3c6ef372fe94f82bULL, 0xa54ff53a5f1d36f1ULL,
    0x510e527fade682d1ULL, 0x9b05688c2b3e6c1fULL,
    0x1f83d9abfb41bd6bULL, 0x5be0cd19137e2179ULL,
};

inline constexpr std::uint8_t kBlake2bSigma[10][16] = {
    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15},
    {14, 10, 4, 8, 9, 15, 13, 6, 1, 12, 0, 2, 11, 7, 5, 3},
    {11, 8, 12, 0, 5, 2, 15, 13, 10, 14, 3, 6, 7, 1, 9, 4},
    {7, 9, 3, 1, 13, 12, 11, 14, 2, 6, 5, 10, 4, 0, 15, 8},
    {9, 0, 5, 7, 2, 4, 10, 15, 14, 1, 11, 12, 6, 8, 3, 13},
    {2, 12, 6, 10, 0, 11, 8, 3, 4, 13, 7, 5, 15, 14, 1, 9},
    {12, 5, 1, 15, 14, 13, 4, 10, 0, 7, 6, 3, 9, 2, 8, 11},
    {13, 11, 7, 14, 12, 1, 3, 9, 5, 0, 15, 4, 8, 6, 2, 10},
    {6, 15, 14, 9, 11, 3, 0, 8, 12, 2, 13, 7, 1, 4, 10, 5},
    {10, 2, 8, 4, 7, 6, 1, 5, 15, 11, 9, 14, 3, 12, 13, 0},
};

inline std::uint64_t load_le64(const std::uint8_t* p) {
    std::uint64_t w = 0;
    for (int i = 7; i >= 0; --i) w = (w << 8) | p[i];
    return w;
}

inline void blake2b_mix(std::uint64_t v[16], int a, int b, int c, int d,
                        std::uint64_t x, std::uint64_t y) {
    v[a] = v[a] + v[b] + x;
    v[d] = std::rotr(v[d] ^ v[a], 32);
    v[c] = v[c] + v[d];
    v[b] = std::rotr(v[b] ^ v[c], 24);
    v[a] = v[a] + v[b] + y;
    v[d] = std::rotr(v[d] ^ v[a], 16);
    v[c] = v[c] + v[d];
    v[b] = std::rotr(v[b] ^ v[c], 63);
}

inline void blake2b_compress(std::uint64_t h[8], const std::uint8_t block[128],
                             std::uint64_t bytes_so_far, bool last) {
    std::uint64_t m[16];
    for (int i = 0; i < 16; ++i) m[i] = load_le64(block + 8 * i);

    std::uint64_t v[16];
    for (int i = 0; i < 8; ++i) v[i] = h[i];
    for (int i = 0; i < 8; ++i) v[8 + i] = kBlake2bIv[i];
    v[12] ^= bytes_so_far;  // low word of the 128-bit counter; high word stays 0
    if (last) v[14] = ~v[14];

    for (int r = 0; r < 12; ++r) {
        const std::uint8_t* s = kBlake2bSigma[r % 10];
        blake2b_mix(v, 0, 4, 8, 12, m[s[0]], m[s[1]]);
        blake2b_mix(v, 1, 5, 9, 13, m[s[2]], m[s[3]]);
        blake2b_mix(v, 2, 6, 10, 14, m[s[4]], m[s[5]]);
        blake2b_mix(v, 3, 7, 11, 15, m[s[6]], m[s[7]]);
        blake2b_mix(v, 0, 5, 10, 15, m[s[8]], m[s[9]]);
        blake2b_mix(v, 1, 6, 11, 12, m[s[10]], m[s[11]]);
        blake2b_mix(v, 2, 7, 8, 13, m[s[12]], m[s[13]]);
        blake2b_mix(v, 3, 4, 9, 14, m[s[14]], m[s[15]]);
    }

    for (int i = 0; i < 8; ++i) h[i] ^= v[i] ^ v[8 + i];
}

}  // namespace detail

// BLAKE2b with 512-bit output, no key, no salt, sequential mode.
inline std::array<std::uint8_t, 64> blake2b512(std::span<const std::uint8_t> msg) {
    std::uint64_t h[8];
    for (int i = 0; i < 8; ++i) h[i] = detail::kBlake2bIv[i];
    h[0] ^= 0x01010040ULL;  // depth 1, fanout 1, no key, 64-byte digest

    std::size_t off = 0;
    // Full blocks, except the final one (the last block always carries the flag,
    // even when the message is empty).
    while (msg.size() - off > 128) {
        detail::blake2b_compress(h, msg.data() + off, off + 128, false);
        off += 128;
    }
    std::uint8_t block[128] = {};
    const std::size_t rest = msg.size() - off;
    if (rest > 0) std::memcpy(block, msg.data() + off, rest);
    detail::blake2b_compress(h, block, msg.size(), true);

    std::array<std::uint8_t, 64> out{};
    for (int i = 0; i < 8; ++i) {
        std::uint64_t w = h[i];
        for (int b = 0; b < 8; ++b) out[8 * i + b] = std::uint8_t(w >> (8 * b));
    }
    return out;
}

}  // namespace stegodct
