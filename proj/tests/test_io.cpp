#include <gtest/gtest.h>

#include <png.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "ltip/io.hpp"
#include "support.hpp"

using namespace ltip;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "ltip_io_tests";
    fs::create_directories(dir);
    return dir / name;
}

// Writes a PNG with explicit integer codes via libpng's simplified API.
void write_codes(const fs::path& path, int w, int h, bool gray, bool sixteen, const std::vector<std::uint16_t>& codes) {
    png_image img{};
    img.version = PNG_IMAGE_VERSION;
    img.width = static_cast<png_uint_32>(w);
    img.height = static_cast<png_uint_32>(h);
    img.format = (gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB) | (sixteen ? PNG_FORMAT_FLAG_LINEAR : 0);
    if (sixteen) {
        ASSERT_TRUE(png_image_write_to_file(&img, path.c_str(), 0, codes.data(), 0, nullptr));
    } else {
        std::vector<std::uint8_t> bytes(codes.begin(), codes.end());
        ASSERT_TRUE(png_image_write_to_file(&img, path.c_str(), 0, bytes.data(), 0, nullptr));
    }
}

}  // namespace

TEST(Decode, EightBitEndpoints) {
    const auto p = scratch("endpoints.png");
    write_codes(p, 3, 1, false, false, {0, 0, 0, 255, 255, 255, 128, 64, 32});
    const auto img = decode_image(p);
    ASSERT_EQ(img.channels(), 3);
    EXPECT_EQ(img(0, 0, 0), 0.0);
    EXPECT_EQ(img(1, 0, 1), 1.0 - kClampMargin);
    EXPECT_EQ(img(2, 0, 0), 128.0 / 255.0);
    EXPECT_EQ(img(2, 0, 2), 32.0 / 255.0);
}

TEST(Decode, GrayIsPromoted) {
    const auto p = scratch("gray.png");
    write_codes(p, 2, 2, true, false, {0, 51, 102, 255});
    const auto img = decode_image(p);
    ASSERT_EQ(img.channels(), 3);
    for (int c = 0; c < 3; ++c) EXPECT_EQ(img(1, 0, c), 51.0 / 255.0);
}

TEST(Decode, SixteenBitScaling) {
    const auto p = scratch("sixteen.png");
    write_codes(p, 1, 1, true, true, {32768});
    const auto raw = read_raw(p);
    EXPECT_EQ(raw.bit_depth, 16);
    // The simplified writer stores linear 16-bit data as-is.
    const auto img = normalize_raw(raw);
    EXPECT_EQ(img(0, 0, 0), static_cast<double>(raw.samples[0]) / 65535.0);
    RawImage direct{1, 1, 1, 16, {32768}};
    EXPECT_EQ(normalize_raw(direct)(0, 0, 0), 32768.0 / 65535.0);
}

TEST(Decode, CorruptOrMissingFilesFail) {
    const auto p = scratch("corrupt.jpg");
    std::ofstream(p) << "not a jpeg";
    EXPECT_THROW(decode_image(p), IoError);
    EXPECT_THROW(decode_image(scratch("does_not_exist.png")), IoError);
}

TEST(Encode, QuantizationRule) {
    EXPECT_EQ(quantize8(0.5), 128);
    EXPECT_EQ(quantize8(0.0), 0);
    EXPECT_EQ(quantize8(1.0 - kClampMargin), 255);
    EXPECT_EQ(quantize8(-0.3), 0);
    EXPECT_EQ(quantize8(7.0), 255);
}

TEST(Encode, DecodeOfEncodeIsWithinQuantizationBound) {
    std::mt19937_64 rng(1);
    const auto img = ltip::testing::random_image(23, 17, 3, rng);
    const auto p = scratch("roundtrip.png");
    encode_png(p, img);
    const auto back = decode_image(p);
    EXPECT_LE(ltip::testing::max_abs_diff(img, back), 1.0 / 510.0 + kClampMargin);
}

TEST(Encode, IsDeterministic) {
    std::mt19937_64 rng(2);
    const auto img = ltip::testing::random_image(31, 9, 3, rng);
    encode_png(scratch("a.png"), img);
    encode_png(scratch("b.png"), img);
    std::ifstream a(scratch("a.png"), std::ios::binary), b(scratch("b.png"), std::ios::binary);
    const std::string sa((std::istreambuf_iterator<char>(a)), {}), sb((std::istreambuf_iterator<char>(b)), {});
    EXPECT_EQ(sa, sb);
}

TEST(Encode, UnwritablePathFails) {
    EXPECT_THROW(encode_png("/nonexistent-dir/x.png", Image(2, 2, 3)), IoError);
}

TEST(Pfm, RoundTripsColourAndGray) {
    std::mt19937_64 rng(3);
    for (int channels : {1, 3}) {
        const auto img = ltip::testing::random_image(7, 5, channels, rng, 50.0);
        const auto p = scratch("map" + std::to_string(channels) + ".pfm");
        write_pfm(p, img);
        const auto back = read_pfm(p);
        ASSERT_TRUE(back.same_shape(img));
        EXPECT_LT(ltip::testing::max_abs_diff(img, back), 50.0 * 1e-7);
    }
}

TEST(Pfm, HeaderAndRowOrder) {
    Image img(2, 2, 1);
    img(0, 0, 0) = 1.0f;  // top-left
    img(0, 1, 0) = 2.0f;  // bottom-left
    const auto p = scratch("layout.pfm");
    write_pfm(p, img);
    std::ifstream in(p, std::ios::binary);
    const std::string all((std::istreambuf_iterator<char>(in)), {});
    const std::string header = "Pf\n2 2\n-1.0\n";
    ASSERT_EQ(all.substr(0, header.size()), header);
    float first = 0.0f;
    std::memcpy(&first, all.data() + header.size(), sizeof first);
    EXPECT_EQ(first, 2.0f);
}

TEST(Pfm, ReadsBigEndian) {
    const auto p = scratch("big.pfm");
    {
        std::ofstream out(p, std::ios::binary);
        out << "Pf\n1 1\n1.0\n";
        const unsigned char bytes[4] = {0x40, 0x40, 0x00, 0x00};  // 3.0f
        out.write(reinterpret_cast<const char*>(bytes), 4);
    }
    EXPECT_EQ(read_pfm(p)(0, 0, 0), 3.0);
    std::ofstream(scratch("bad.pfm")) << "P6\n1 1\n255\n";
    EXPECT_THROW(read_pfm(scratch("bad.pfm")), IoError);
}
