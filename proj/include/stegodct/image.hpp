#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "stegodct/errors.hpp"

namespace stegodct {

// 8-bit raster image. Samples are stored planar (all of channel 0, then
// channel 1, ...), row-major within a plane. Color planes are in R,G,B order.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 (grayscale) or 3 (color)
    std::vector<std::uint8_t> samples;

    std::uint8_t& at(int channel, int y, int x) {
        return samples[std::size_t(channel) * width * height + std::size_t(y) * width + x];
    }
    std::uint8_t at(int channel, int y, int x) const {
        return samples[std::size_t(channel) * width * height + std::size_t(y) * width + x];
    }

    bool operator==(const Image&) const = default;
};

// One 8x8 tile, row-major. Values may leave [0,255] between transform steps;
// assemble_image clamps them back.
using PixelBlock = std::array<int, 64>;

struct BlockLocation {
    int channel;
    int block_row;
    int block_col;
};

// Non-overlapping 8x8 tiles of an image, channel-major, row-major per channel.
struct BlockGrid {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<PixelBlock> blocks;

    std::size_t blocks_per_channel() const {
        return std::size_t(width / 8) * std::size_t(height / 8);
    }

    BlockLocation location(std::size_t block_index) const {
        const std::size_t per_channel = blocks_per_channel();
        const int cols = width / 8;
        return BlockLocation{
            int(block_index / per_channel),
            int((block_index % per_channel) / cols),
            int((block_index % per_channel) % cols),
        };
    }
};

inline void validate_geometry(int width, int height, int channels) {
    if (width <= 0 || height <= 0) {
        raise(ErrorKind::format, "image dimensions must be positive");
    }
    if (width % 8 != 0 || height % 8 != 0) {
        raise(ErrorKind::format, "image dimensions must be multiples of 8 (got " +
                                     std::to_string(width) + "x" + std::to_string(height) + ")");
    }
    if (channels != 1 && channels != 3) {
        raise(ErrorKind::format, "image must have 1 or 3 channels");
    }
}

inline BlockGrid partition_blocks(const Image& img) {
    validate_geometry(img.width, img.height, img.channels);
    BlockGrid grid{img.width, img.height, img.channels, {}};
    grid.blocks.reserve(grid.blocks_per_channel() * img.channels);
    for (int c = 0; c < img.channels; ++c) {
        for (int by = 0; by < img.height / 8; ++by) {
            for (int bx = 0; bx < img.width / 8; ++bx) {
                PixelBlock block;
                for (int y = 0; y < 8; ++y) {
                    for (int x = 0; x < 8; ++x) {
                        block[y * 8 + x] = img.at(c, by * 8 + y, bx * 8 + x);
                    }
                }
                grid.blocks.push_back(block);
            }
        }
    }
    return grid;
}

inline Image assemble_image(const BlockGrid& grid) {
    validate_geometry(grid.width, grid.height, grid.channels);
    const std::size_t expected = grid.blocks_per_channel() * grid.channels;
    if (grid.blocks.size() != expected) {
        raise(ErrorKind::format, "geometry mismatch: expected " + std::to_string(expected) +
                                     " blocks, have " + std::to_string(grid.blocks.size()));
    }
    Image img{grid.width, grid.height, grid.channels, {}};
    img.samples.resize(std::size_t(grid.width) * grid.height * grid.channels);
    for (std::size_t k = 0; k < grid.blocks.size(); ++k) {
        const auto [c, by, bx] = grid.location(k);
        const PixelBlock& block = grid.blocks[k];
        for (int y = 0; y < 8; ++y) {
            for (int x = 0; x < 8; ++x) {
                const int v = std::clamp(block[y * 8 + x], 0, 255);
                img.at(c, by * 8 + y, bx * 8 + x) = std::uint8_t(v);
            }
        }
    }
    return img;
}

namespace detail {

inline std::uint16_t read_u16(const std::uint8_t* p) {
    return std::uint16_t(p[0] | (p[1] << 8));
}
inline std::uint32_t read_u32(const std::uint8_t* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
           (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}
inline std::int32_t read_i32(const std::uint8_t* p) {
    return std::int32_t(read_u32(p));
}
inline void put_u16(std::vector<std::uint8_t>& v, std::uint16_t x) {
    v.push_back(std::uint8_t(x));
    v.push_back(std::uint8_t(x >> 8));
}
inline void put_u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
    for (int i = 0; i < 4; ++i) v.push_back(std::uint8_t(x >> (8 * i)));
}

inline std::size_t bmp_row_stride(int width, int bit_count) {
    return (std::size_t(width) * (bit_count / 8) + 3) & ~std::size_t(3);
}

}  // namespace detail

// Reads an uncompressed BMP: 24-bit color or 8-bit with a grayscale palette.
// Bottom-up and top-down (negative height) layouts are both accepted.
inline Image load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorKind::io, "cannot open " + path);
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
    if (in.bad()) raise(ErrorKind::io, "read failure on " + path);

    if (buf.size() < 54 || buf[0] != 'B' || buf[1] != 'M') {
        raise(ErrorKind::format, path + ": not a BMP file");
    }
    const std::uint32_t data_offset = detail::read_u32(&buf[10]);
    const std::uint32_t header_size = detail::read_u32(&buf[14]);
    if (header_size < 40) raise(ErrorKind::format, path + ": unsupported BMP header");

    const std::int32_t width = detail::read_i32(&buf[18]);
    const std::int32_t raw_height = detail::read_i32(&buf[22]);
    const bool top_down = raw_height < 0;
    const std::int32_t height = top_down ? -raw_height : raw_height;
    const std::uint16_t bit_count = detail::read_u16(&buf[28]);
    const std::uint32_t compression = detail::read_u32(&buf[30]);

    if (compression != 0) raise(ErrorKind::format, path + ": compressed BMP is not supported");
    if (bit_count != 8 && bit_count != 24) {
        raise(ErrorKind::format, path + ": only 8-bit and 24-bit BMP are supported");
    }
    if (width <= 0 || height <= 0) raise(ErrorKind::format, path + ": bad dimensions");
    if (width % 8 != 0 || height % 8 != 0) {
        raise(ErrorKind::format, path + ": dimensions must be multiples of 8 (got " +
                                     std::to_string(width) + "x" + std::to_string(height) + ")");
    }

    // 8-bit pixels index a palette; require it to be gray so the index maps to
    // one intensity.
    std::array<std::uint8_t, 256> gray_map{};
    if (bit_count == 8) {
        std::uint32_t colors = detail::read_u32(&buf[46]);
        if (colors == 0) colors = 256;
        const std::size_t palette_off = 14 + header_size;
        if (palette_off + std::size_t(colors) * 4 > buf.size()) {
            raise(ErrorKind::format, path + ": truncated palette");
        }
        for (std::uint32_t i = 0; i < colors; ++i) {
            const std::uint8_t b = buf[palette_off + 4 * i];
            const std::uint8_t g = buf[palette_off + 4 * i + 1];
            const std::uint8_t r = buf[palette_off + 4 * i + 2];
            if (b != g || g != r) {
                raise(ErrorKind::format, path + ": 8-bit BMP palette is not grayscale");
            }
            gray_map[i] = r;
        }
    }

    const int channels = bit_count == 24 ? 3 : 1;
    const std::size_t stride = detail::bmp_row_stride(width, bit_count);
    if (std::size_t(data_offset) + stride * std::size_t(height) > buf.size()) {
        raise(ErrorKind::format, path + ": truncated pixel data");
    }

    Image img{width, height, channels, {}};
    img.samples.resize(std::size_t(width) * height * channels);
    for (int y = 0; y < height; ++y) {
        const int src_row = top_down ? y : height - 1 - y;
        const std::uint8_t* row = &buf[data_offset + stride * std::size_t(src_row)];
        if (bit_count == 24) {
            for (int x = 0; x < width; ++x) {
                img.at(2, y, x) = row[3 * x];      // B
                img.at(1, y, x) = row[3 * x + 1];  // G
                img.at(0, y, x) = row[3 * x + 2];  // R
            }
        } else {
            for (int x = 0; x < width; ++x) img.at(0, y, x) = gray_map[row[x]];
        }
    }
    return img;
}

// Writes a bottom-up uncompressed BMP: 24-bit for color images, 8-bit with an
// identity gray palette for single-channel images.
inline void save_image(const Image& img, const std::string& path) {
    validate_geometry(img.width, img.height, img.channels);
    if (img.samples.size() != std::size_t(img.width) * img.height * img.channels) {
        raise(ErrorKind::format, "sample buffer does not match geometry");
    }

    const int bit_count = img.channels == 3 ? 24 : 8;
    const std::size_t stride = detail::bmp_row_stride(img.width, bit_count);
    const std::size_t palette_bytes = bit_count == 8 ? 256 * 4 : 0;
    const std::size_t data_offset = 54 + palette_bytes;
    const std::size_t file_size = data_offset + stride * std::size_t(img.height);

    std::vector<std::uint8_t> buf;
    buf.reserve(file_size);
    buf.push_back('B');
    buf.push_back('M');
    detail::put_u32(buf, std::uint32_t(file_size));
    detail::put_u32(buf, 0);
    detail::put_u32(buf, std::uint32_t(data_offset));
    detail::put_u32(buf, 40);
    detail::put_u32(buf, std::uint32_t(img.width));
    detail::put_u32(buf, std::uint32_t(img.height));
    detail::put_u16(buf, 1);
    detail::put_u16(buf, std::uint16_t(bit_count));
    detail::put_u32(buf, 0);  // BI_RGB
    detail::put_u32(buf, std::uint32_t(stride * std::size_t(img.height)));
    detail::put_u32(buf, 2835);
    detail::put_u32(buf, 2835);
    detail::put_u32(buf, bit_count == 8 ? 256 : 0);
    detail::put_u32(buf, 0);
    if (bit_count == 8) {
        for (int i = 0; i < 256; ++i) {
            buf.push_back(std::uint8_t(i));
            buf.push_back(std::uint8_t(i));
            buf.push_back(std::uint8_t(i));
            buf.push_back(0);
        }
    }

    for (int y = img.height - 1; y >= 0; --y) {
        const std::size_t row_start = buf.size();
        if (bit_count == 24) {
            for (int x = 0; x < img.width; ++x) {
                buf.push_back(img.at(2, y, x));
                buf.push_back(img.at(1, y, x));
                buf.push_back(img.at(0, y, x));
            }
        } else {
            for (int x = 0; x < img.width; ++x) buf.push_back(img.at(0, y, x));
        }
        while (buf.size() - row_start < stride) buf.push_back(0);
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(ErrorKind::io, "cannot write " + path);
    out.write(reinterpret_cast<const char*>(buf.data()), std::streamsize(buf.size()));
    out.flush();
    if (!out) raise(ErrorKind::io, "write failure on " + path);
}

}  // namespace stegodct
