#include <gtest/gtest.h>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <vector>

#include "stegodct/errors.hpp"
#include "stegodct/image.hpp"
#include "testutil.hpp"

using namespace stegodct;
using testutil::Rng;
using testutil::TempDir;

namespace {

void put_u16(std::vector<std::uint8_t>& v, std::uint16_t x) {
    v.push_back(std::uint8_t(x));
    v.push_back(std::uint8_t(x >> 8));
}
void put_u32(std::vector<std::uint8_t>& v, std::uint32_t x) {
    for (int i = 0; i < 4; ++i) v.push_back(std::uint8_t(x >> (8 * i)));
}

// Hand-rolled writer, independent of save_image, for crafting inputs the
// library writer would refuse to produce.
std::vector<std::uint8_t> make_bmp24(int width, int height, bool top_down,
                                     const std::vector<std::uint8_t>& bgr_rows_top_first) {
    const std::size_t stride = (std::size_t(width) * 3 + 3) & ~std::size_t(3);
    std::vector<std::uint8_t> bmp;
    bmp.push_back('B');
    bmp.push_back('M');
    put_u32(bmp, std::uint32_t(54 + stride * height));
    put_u32(bmp, 0);
    put_u32(bmp, 54);
    put_u32(bmp, 40);
    put_u32(bmp, std::uint32_t(width));
    put_u32(bmp, std::uint32_t(top_down ? -height : height));
    put_u16(bmp, 1);
    put_u16(bmp, 24);
    put_u32(bmp, 0);
    put_u32(bmp, std::uint32_t(stride * height));
    put_u32(bmp, 2835);
    put_u32(bmp, 2835);
    put_u32(bmp, 0);
    put_u32(bmp, 0);
    for (int y = 0; y < height; ++y) {
        const int row = top_down ? y : height - 1 - y;
        for (int x = 0; x < width * 3; ++x) {
            bmp.push_back(bgr_rows_top_first[std::size_t(row) * width * 3 + x]);
        }
        for (std::size_t p = std::size_t(width) * 3; p < stride; ++p) bmp.push_back(0);
    }
    return bmp;
}

std::vector<std::uint8_t> make_bmp8_gray(int width, int height, std::uint8_t fill) {
    const std::size_t stride = (std::size_t(width) + 3) & ~std::size_t(3);
    std::vector<std::uint8_t> bmp;
    bmp.push_back('B');
    bmp.push_back('M');
    put_u32(bmp, std::uint32_t(54 + 1024 + stride * height));
    put_u32(bmp, 0);
    put_u32(bmp, 54 + 1024);
    put_u32(bmp, 40);
    put_u32(bmp, std::uint32_t(width));
    put_u32(bmp, std::uint32_t(height));
    put_u16(bmp, 1);
    put_u16(bmp, 8);
    put_u32(bmp, 0);
    put_u32(bmp, std::uint32_t(stride * height));
    put_u32(bmp, 2835);
    put_u32(bmp, 2835);
    put_u32(bmp, 256);
    put_u32(bmp, 0);
    for (int i = 0; i < 256; ++i) {
        bmp.push_back(std::uint8_t(i));
        bmp.push_back(std::uint8_t(i));
        bmp.push_back(std::uint8_t(i));
        bmp.push_back(0);
    }
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) bmp.push_back(fill);
        for (std::size_t p = width; p < stride; ++p) bmp.push_back(0);
    }
    return bmp;
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected a stegodct::Error";
    return ErrorKind::io;
}

}  // namespace

TEST(ImageIo, Loads24BitBmp) {
    TempDir dir("load24");
    std::vector<std::uint8_t> rows(512 * 512 * 3);
    Rng rng(1);
    for (auto& b : rows) b = rng.byte();
    write_bytes(dir.file("c.bmp"), make_bmp24(512, 512, false, rows));

    const Image img = load_image(dir.file("c.bmp"));
    EXPECT_EQ(img.width, 512);
    EXPECT_EQ(img.height, 512);
    EXPECT_EQ(img.channels, 3);
    ASSERT_EQ(img.samples.size(), std::size_t(512) * 512 * 3);
    // File rows are BGR, top row first in our buffer; check one pixel.
    EXPECT_EQ(img.at(0, 0, 0), rows[2]);  // R
    EXPECT_EQ(img.at(1, 0, 0), rows[1]);  // G
    EXPECT_EQ(img.at(2, 0, 0), rows[0]);  // B
}

TEST(ImageIo, TopDownAndBottomUpAgree) {
    TempDir dir("topdown");
    std::vector<std::uint8_t> rows(16 * 8 * 3);
    Rng rng(2);
    for (auto& b : rows) b = rng.byte();
    write_bytes(dir.file("up.bmp"), make_bmp24(16, 8, false, rows));
    write_bytes(dir.file("down.bmp"), make_bmp24(16, 8, true, rows));
    EXPECT_EQ(load_image(dir.file("up.bmp")), load_image(dir.file("down.bmp")));
}

TEST(ImageIo, RejectsNonMultipleOf8Dimensions) {
    TempDir dir("baddims");
    std::vector<std::uint8_t> rows(510 * 512 * 3, 0);
    write_bytes(dir.file("bad.bmp"), make_bmp24(510, 512, false, rows));
    try {
        load_image(dir.file("bad.bmp"));
        FAIL() << "expected format error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::format);
        EXPECT_NE(std::string(e.what()).find("multiples of 8"), std::string::npos);
    }
}

TEST(ImageIo, LoadsGrayscale8BitBmp) {
    TempDir dir("gray");
    write_bytes(dir.file("g.bmp"), make_bmp8_gray(8, 8, 128));
    const Image img = load_image(dir.file("g.bmp"));
    EXPECT_EQ(img.channels, 1);
    ASSERT_EQ(img.samples.size(), 64u);
    for (auto s : img.samples) EXPECT_EQ(s, 128);
}

TEST(ImageIo, RejectsCorruptAndUnsupportedFiles) {
    TempDir dir("corrupt");
    write_bytes(dir.file("short.bmp"), {'B', 'M', 1, 2, 3});
    EXPECT_EQ(kind_of([&] { load_image(dir.file("short.bmp")); }), ErrorKind::format);

    write_bytes(dir.file("notbmp.bmp"), std::vector<std::uint8_t>(64, 0x7f));
    EXPECT_EQ(kind_of([&] { load_image(dir.file("notbmp.bmp")); }), ErrorKind::format);

    // Truncated pixel data: header promises more than the file holds.
    auto bmp = make_bmp24(8, 8, false, std::vector<std::uint8_t>(8 * 8 * 3, 1));
    bmp.resize(bmp.size() - 10);
    write_bytes(dir.file("trunc.bmp"), bmp);
    EXPECT_EQ(kind_of([&] { load_image(dir.file("trunc.bmp")); }), ErrorKind::format);

    EXPECT_EQ(kind_of([&] { load_image(dir.file("missing.bmp")); }), ErrorKind::io);
}

TEST(ImageIo, SaveLoadRoundTripIsExact) {
    TempDir dir("roundtrip");
    Rng rng(3);
    for (int channels : {1, 3}) {
        const Image img = testutil::random_image(rng, 24, 16, channels);
        const std::string path = dir.file("img" + std::to_string(channels) + ".bmp");
        save_image(img, path);
        EXPECT_EQ(load_image(path), img);
    }
}

TEST(ImageIo, FileSizeMatchesFormatArithmetic) {
    TempDir dir("filesize");
    Rng rng(4);
    const Image img = testutil::random_image(rng, 512, 512, 3);
    save_image(img, dir.file("c.bmp"));
    // Width 512 keeps every row a multiple of four bytes: no padding.
    EXPECT_EQ(std::filesystem::file_size(dir.file("c.bmp")), 54u + 512u * 512u * 3u);
}

TEST(ImageIo, SaveToUnwritablePathFails) {
    Rng rng(5);
    const Image img = testutil::random_image(rng, 8, 8, 1);
    EXPECT_EQ(kind_of([&] { save_image(img, "/nonexistent-dir/x.bmp"); }), ErrorKind::io);
}

TEST(Blocks, CountsAndOrdering) {
    Rng rng(6);
    const Image img = testutil::random_image(rng, 512, 512, 3);
    const BlockGrid grid = partition_blocks(img);
    EXPECT_EQ(grid.blocks.size(), 12288u);  // (512/8)^2 * 3

    const BlockGrid again = partition_blocks(img);
    EXPECT_EQ(grid.blocks, again.blocks);

    const auto loc0 = grid.location(0);
    EXPECT_EQ(loc0.channel, 0);
    EXPECT_EQ(loc0.block_row, 0);
    EXPECT_EQ(loc0.block_col, 0);
    const auto locLast = grid.location(grid.blocks.size() - 1);
    EXPECT_EQ(locLast.channel, 2);
    EXPECT_EQ(locLast.block_row, 63);
    EXPECT_EQ(locLast.block_col, 63);
}

TEST(Blocks, SingleBlockImageIsIdentity) {
    Rng rng(7);
    const Image img = testutil::random_image(rng, 8, 8, 1);
    const BlockGrid grid = partition_blocks(img);
    ASSERT_EQ(grid.blocks.size(), 1u);
    for (int i = 0; i < 64; ++i) EXPECT_EQ(grid.blocks[0][i], img.samples[i]);
}

TEST(Blocks, ConstantTilesLandInSeparateBlocks) {
    Image img{16, 8, 1, std::vector<std::uint8_t>(16 * 8)};
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 16; ++x) img.at(0, y, x) = x < 8 ? 0 : 255;
    }
    const BlockGrid grid = partition_blocks(img);
    ASSERT_EQ(grid.blocks.size(), 2u);
    for (int i = 0; i < 64; ++i) {
        EXPECT_EQ(grid.blocks[0][i], 0);
        EXPECT_EQ(grid.blocks[1][i], 255);
    }
}

TEST(Blocks, PartitionAssembleRoundTrip) {
    Rng rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const int w = 8 * (1 + int(rng.below(6)));
        const int h = 8 * (1 + int(rng.below(6)));
        const int c = rng.bit() ? 3 : 1;
        const Image img = testutil::random_image(rng, w, h, c);
        EXPECT_EQ(assemble_image(partition_blocks(img)), img);
    }
}

TEST(Blocks, AssembleClampsOutOfRangeTiles) {
    BlockGrid grid{8, 8, 1, {PixelBlock{}}};
    grid.blocks[0][0] = 260;
    grid.blocks[0][1] = -3;
    grid.blocks[0][2] = 255;
    const Image img = assemble_image(grid);
    EXPECT_EQ(img.samples[0], 255);
    EXPECT_EQ(img.samples[1], 0);
    EXPECT_EQ(img.samples[2], 255);
}

TEST(Blocks, AssembleRejectsGeometryMismatch) {
    BlockGrid grid{16, 8, 1, {PixelBlock{}}};  // needs 2 blocks, has 1
    EXPECT_EQ(kind_of([&] { assemble_image(grid); }), ErrorKind::format);
}
