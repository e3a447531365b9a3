#pragma once

#include <array>
#include <cctype>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stegodct/blake2b.hpp"
#include "stegodct/errors.hpp"

namespace stegodct {

using Key128 = std::array<std::uint8_t, 16>;

// 1024-bit digest of the 128-bit key: two domain-separated BLAKE2b-512
// digests, H(key || 0x00) || H(key || 0x01). Both sides must derive the same
// bytes, so the construction is part of the wire contract.
inline std::array<std::uint8_t, 128> derive_digest(std::span<const std::uint8_t> key) {
    if (key.size() != 16) {
        raise(ErrorKind::params, "key must be exactly 128 bits (16 bytes)");
    }
    std::array<std::uint8_t, 17> buf{};
    for (int i = 0; i < 16; ++i) buf[i] = key[i];

    std::array<std::uint8_t, 128> digest{};
    buf[16] = 0x00;
    const auto half0 = blake2b512(buf);
    buf[16] = 0x01;
    const auto half1 = blake2b512(buf);
    for (int i = 0; i < 64; ++i) {
        digest[i] = half0[i];
        digest[64 + i] = half1[i];
    }
    return digest;
}

// Cyclic repetition of the digest, truncated to target_bits. Bits are read
// most-significant-bit-first within each byte; entry i equals digest bit
// (i mod 1024).
inline std::vector<std::uint8_t> expand_key_bits(const std::array<std::uint8_t, 128>& digest,
                                                 std::size_t target_bits) {
    std::vector<std::uint8_t> bits(target_bits);
    for (std::size_t i = 0; i < target_bits; ++i) {
        const std::size_t b = i % 1024;
        bits[i] = (digest[b / 8] >> (7 - b % 8)) & 1;
    }
    return bits;
}

inline Key128 parse_hex_key(const std::string& hex) {
    if (hex.size() != 32) {
        raise(ErrorKind::params, "key must be exactly 32 hexadecimal characters");
    }
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        raise(ErrorKind::params, "key contains a non-hexadecimal character");
    };
    Key128 key{};
    for (int i = 0; i < 16; ++i) {
        key[i] = std::uint8_t(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    }
    return key;
}

}  // namespace stegodct
