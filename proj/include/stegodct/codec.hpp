#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "stegodct/chaos.hpp"
#include "stegodct/errors.hpp"
#include "stegodct/image.hpp"
#include "stegodct/keyschedule.hpp"
#include "stegodct/transform.hpp"

namespace stegodct {

enum class StegoMode { pixel, coefficient };

// Everything the two parties must share: key, map parameters, quality factor,
// and whether the stego artifact is a pixel image or a coefficient record.
struct EmbedConfig {
    Key128 key{};
    FractionalMapParams map{};
    double mu = 75.0;
    StegoMode mode = StegoMode::pixel;
};

// The quantized transform of an image: one zigzag-ordered coefficient vector
// per 8x8 block, blocks in BlockGrid order. Also the in-memory form of the
// coefficient record.
struct QuantizedImage {
    int width = 0;
    int height = 0;
    int channels = 0;
    double mu = 0.0;
    std::vector<ZigzagVec> blocks;
};

// R(x, b): replace the least significant bit of x >= 0 with b.
inline int lsb_replace(int x, int bit) { return (x & ~1) | bit; }

// R^-1(x): the least significant bit of x >= 0.
inline int lsb_extract(int x) { return x & 1; }

// The carrier array omega: zigzag elements 1..8 (the first eight AC
// coefficients) of every block, in block order.
inline std::vector<int> collect_ac(const std::vector<ZigzagVec>& blocks) {
    std::vector<int> omega;
    omega.reserve(blocks.size() * 8);
    for (const ZigzagVec& zz : blocks) {
        for (int j = 1; j <= 8; ++j) omega.push_back(zz[j]);
    }
    return omega;
}

inline void scatter_ac(std::vector<ZigzagVec>& blocks, std::span<const int> omega) {
    for (std::size_t k = 0; k < blocks.size(); ++k) {
        for (int j = 1; j <= 8; ++j) blocks[k][j] = omega[8 * k + (j - 1)];
    }
}

inline QuantizedImage quantize_image(const Image& img, double mu) {
    const QuantTable table = build_quant_table(mu);
    const BlockGrid grid = partition_blocks(img);
    QuantizedImage q{img.width, img.height, img.channels, mu, {}};
    q.blocks.reserve(grid.blocks.size());
    for (const PixelBlock& block : grid.blocks) {
        q.blocks.push_back(zigzag(quantize(dct_forward(block), table)));
    }
    return q;
}

inline Image reconstruct_image(const QuantizedImage& q) {
    const QuantTable table = build_quant_table(q.mu);
    BlockGrid grid{q.width, q.height, q.channels, {}};
    grid.blocks.reserve(q.blocks.size());
    for (const ZigzagVec& zz : q.blocks) {
        grid.blocks.push_back(round_to_pixels(dct_inverse(dequantize(inverse_zigzag(zz), table))));
    }
    return assemble_image(grid);
}

// Embeddable bits: 8 AC slots per block, restricted to whole 64-coefficient
// chunks. A trailing partial chunk carries nothing.
inline std::size_t capacity_bits(std::size_t block_count) {
    const std::size_t slots = 8 * block_count;
    return slots - slots % 64;
}

inline std::size_t capacity_bits(const QuantizedImage& q) { return capacity_bits(q.blocks.size()); }

inline std::size_t capacity_bits(const Image& img) {
    validate_geometry(img.width, img.height, img.channels);
    return capacity_bits(std::size_t(img.width / 8) * (img.height / 8) * img.channels);
}

// Bit sequences are handled as one value in {0,1} per element.
inline std::vector<std::uint8_t> bytes_to_bits(std::span<const std::uint8_t> bytes) {
    std::vector<std::uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (std::uint8_t b : bytes) {
        for (int k = 7; k >= 0; --k) bits.push_back((b >> k) & 1);
    }
    return bits;
}

// MSB-first per byte; a final partial byte is zero-padded in its low bits.
inline std::vector<std::uint8_t> bits_to_bytes(std::span<const std::uint8_t> bits) {
    std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) bytes[i / 8] |= std::uint8_t(1) << (7 - i % 8);
    }
    return bytes;
}

// 32-bit big-endian payload length, then the payload bits.
inline std::vector<std::uint8_t> frame_payload(std::span<const std::uint8_t> payload_bits) {
    if (payload_bits.size() > 0xFFFFFFFFull) {
        raise(ErrorKind::capacity, "payload too large for the 32-bit length header");
    }
    const auto len = std::uint32_t(payload_bits.size());
    std::vector<std::uint8_t> framed;
    framed.reserve(32 + payload_bits.size());
    for (int k = 31; k >= 0; --k) framed.push_back((len >> k) & 1);
    framed.insert(framed.end(), payload_bits.begin(), payload_bits.end());
    return framed;
}

// LSB-substitutes `bits` into one 64-coefficient chunk at the schedule
// positions, sign preserved via the absolute value.
inline void embed_chunk(std::span<int> omega_chunk, std::span<const std::uint8_t> key_chunk,
                        std::span<const std::uint8_t> bits, ChaoticScheduler& sched) {
    const PositionList& pos = sched.positions(key_chunk);
    for (std::size_t k = 0; k < bits.size(); ++k) {
        const int psi = pos[k];
        const int v = omega_chunk[psi];
        const int bit = bits[k];
        omega_chunk[psi] = v < 0 ? -lsb_replace(-v, bit) : lsb_replace(v, bit);
    }
}

namespace detail {

inline void embed_framed_bits(QuantizedImage& q, std::span<const std::uint8_t> framed,
                              const EmbedConfig& cfg) {
    std::vector<int> omega = collect_ac(q.blocks);
    const std::vector<std::uint8_t> kbar =
        expand_key_bits(derive_digest(cfg.key), omega.size());
    ChaoticScheduler sched(cfg.map);

    const std::size_t full_chunks = omega.size() / 64;
    std::size_t taken = 0;
    for (std::size_t i = 0; i < full_chunks && taken < framed.size(); ++i) {
        const std::size_t n = std::min<std::size_t>(64, framed.size() - taken);
        embed_chunk(std::span(omega).subspan(64 * i, 64),
                    std::span(kbar).subspan(64 * i, 64), framed.subspan(taken, n), sched);
        taken += n;
    }
    scatter_ac(q.blocks, omega);
}

// First `count` LSBs in schedule order (chunk by chunk, positions in rho
// order), from the coefficients' absolute values.
inline std::vector<std::uint8_t> read_schedule_bits(const QuantizedImage& q,
                                                    const EmbedConfig& cfg, std::size_t count) {
    const std::vector<int> omega = collect_ac(q.blocks);
    const std::vector<std::uint8_t> kbar =
        expand_key_bits(derive_digest(cfg.key), omega.size());
    ChaoticScheduler sched(cfg.map);

    std::vector<std::uint8_t> bits;
    bits.reserve(count);
    const std::size_t full_chunks = omega.size() / 64;
    for (std::size_t i = 0; i < full_chunks && bits.size() < count; ++i) {
        const PositionList& pos = sched.positions(std::span(kbar).subspan(64 * i, 64));
        for (std::size_t k = 0; k < 64 && bits.size() < count; ++k) {
            const int v = omega[64 * i + pos[k]];
            bits.push_back(std::uint8_t(lsb_extract(v < 0 ? -v : v)));
        }
    }
    return bits;
}

}  // namespace detail

// Quantizes the cover and embeds the framed payload into the AC coefficients.
inline QuantizedImage embed_to_coefficients(const Image& cover,
                                            std::span<const std::uint8_t> payload_bits,
                                            const EmbedConfig& cfg) {
    validate_map_params(cfg.map);
    QuantizedImage q = quantize_image(cover, cfg.mu);
    const std::size_t cap = capacity_bits(q);
    const std::vector<std::uint8_t> framed = frame_payload(payload_bits);
    if (framed.size() > cap) {
        raise(ErrorKind::capacity,
              "message needs " + std::to_string(framed.size()) + " bits (32-bit header + " +
                  std::to_string(payload_bits.size()) + " payload bits) but capacity is " +
                  std::to_string(cap) + " bits");
    }
    detail::embed_framed_bits(q, framed, cfg);
    return q;
}

inline Image embed_to_image(const Image& cover, std::span<const std::uint8_t> payload_bits,
                            const EmbedConfig& cfg) {
    return reconstruct_image(embed_to_coefficients(cover, payload_bits, cfg));
}

// Reads the 32-bit header, then that many payload bits, in schedule order.
inline std::vector<std::uint8_t> extract_payload(const QuantizedImage& q,
                                                 const EmbedConfig& cfg) {
    validate_map_params(cfg.map);
    const std::size_t cap = capacity_bits(q);
    if (cap < 32) {
        raise(ErrorKind::extract, "stego carrier is too small to hold a length header");
    }
    const std::vector<std::uint8_t> header = detail::read_schedule_bits(q, cfg, 32);
    std::uint32_t len = 0;
    for (int k = 0; k < 32; ++k) len = (len << 1) | header[k];
    if (len > cap - 32) {
        raise(ErrorKind::extract,
              "header announces " + std::to_string(len) + " payload bits but capacity is " +
                  std::to_string(cap - 32) + "; wrong key/parameters or corrupted stego");
    }
    std::vector<std::uint8_t> all = detail::read_schedule_bits(q, cfg, 32 + std::size_t(len));
    return std::vector<std::uint8_t>(all.begin() + 32, all.end());
}

// Pixel-mode extraction re-runs the quantization pipeline on the stego image.
inline std::vector<std::uint8_t> extract_payload(const Image& stego, const EmbedConfig& cfg) {
    return extract_payload(quantize_image(stego, cfg.mu), cfg);
}

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

// Coefficient record: magic "SCQ1", one ASCII header line
// "mu=<decimal> w=<width> h=<height> c=<channels>\n", then all quantized
// coefficients as little-endian int16 in block/zigzag order.
inline void write_coefficient_record(const QuantizedImage& q, const std::string& path) {
    validate_geometry(q.width, q.height, q.channels);
    std::string header = "SCQ1mu=" + detail::format_double(q.mu) + " w=" + std::to_string(q.width) +
                         " h=" + std::to_string(q.height) + " c=" + std::to_string(q.channels) +
                         "\n";
    std::vector<std::uint8_t> body;
    body.reserve(q.blocks.size() * 128);
    for (const ZigzagVec& zz : q.blocks) {
        for (int v : zz) {
            if (v < -32768 || v > 32767) {
                raise(ErrorKind::format, "coefficient out of int16 range");
            }
            const auto u = std::uint16_t(std::int16_t(v));
            body.push_back(std::uint8_t(u));
            body.push_back(std::uint8_t(u >> 8));
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorKind::io, "cannot write " + path);
    out.write(header.data(), std::streamsize(header.size()));
    out.write(reinterpret_cast<const char*>(body.data()), std::streamsize(body.size()));
    out.flush();
    if (!out) raise(ErrorKind::io, "write failure on " + path);
}

inline QuantizedImage read_coefficient_record(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorKind::io, "cannot open " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
    if (in.bad()) raise(ErrorKind::io, "read failure on " + path);

    if (buf.size() < 4 || std::string(buf.begin(), buf.begin() + 4) != "SCQ1") {
        raise(ErrorKind::format, path + ": not a coefficient record");
    }
    std::size_t eol = 4;
    while (eol < buf.size() && eol < 256 && buf[eol] != '\n') ++eol;
    if (eol >= buf.size() || buf[eol] != '\n') {
        raise(ErrorKind::format, path + ": malformed record header");
    }
    const std::string header(buf.begin() + 4, buf.begin() + std::ptrdiff_t(eol));

    QuantizedImage q;
    double mu = 0.0;
    int w = 0, h = 0, c = 0;
    {
        const char* p = header.data();
        const char* end = header.data() + header.size();
        auto expect = [&](const char* tag) {
            const std::size_t n = std::string(tag).size();
            if (std::size_t(end - p) < n || std::string(p, p + n) != tag) {
                raise(ErrorKind::format, path + ": malformed record header");
            }
            p += n;
        };
        auto parse_num = [&](auto& value) {
            const auto res = std::from_chars(p, end, value);
            if (res.ec != std::errc()) {
                raise(ErrorKind::format, path + ": malformed record header");
            }
            p = res.ptr;
        };
        expect("mu=");
        parse_num(mu);
        expect(" w=");
        parse_num(w);
        expect(" h=");
        parse_num(h);
        expect(" c=");
        parse_num(c);
        if (p != end) raise(ErrorKind::format, path + ": malformed record header");
    }
    validate_geometry(w, h, c);
    if (!(mu > 50.0 && mu < 100.0)) {
        raise(ErrorKind::format, path + ": quality factor out of range");
    }

    const std::size_t nblocks = std::size_t(w / 8) * (h / 8) * c;
    const std::size_t body_off = eol + 1;
    if (buf.size() - body_off != nblocks * 128) {
        raise(ErrorKind::format, path + ": coefficient payload size mismatch");
    }
    q.width = w;
    q.height = h;
    q.channels = c;
    q.mu = mu;
    q.blocks.resize(nblocks);
    for (std::size_t k = 0; k < nblocks; ++k) {
        for (int j = 0; j < 64; ++j) {
            const std::size_t o = body_off + 128 * k + 2 * std::size_t(j);
            q.blocks[k][j] = std::int16_t(buf[o] | (buf[o + 1] << 8));
        }
    }
    return q;
}

}  // namespace stegodct
