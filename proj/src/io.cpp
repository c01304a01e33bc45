#include "ltip/io.hpp"

#include <png.h>
#include <jpeglib.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "ltip/algebra.hpp"

namespace ltip {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const noexcept {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
    FilePtr f(std::fopen(path.c_str(), mode));
    if (!f) throw IoError("cannot open " + path.string());
    return f;
}

std::uint32_t float_bits_le(float v) {
    const auto bits = std::bit_cast<std::uint32_t>(v);
    if constexpr (std::endian::native == std::endian::big) {
        return ((bits & 0xffu) << 24) | ((bits & 0xff00u) << 8) | ((bits >> 8) & 0xff00u) | (bits >> 24);
    }
    return bits;
}

float float_from_bytes(const unsigned char* b, bool big_endian) {
    std::uint32_t i = big_endian ? (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
                                       (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3])
                                 : (std::uint32_t(b[3]) << 24) | (std::uint32_t(b[2]) << 16) |
                                       (std::uint32_t(b[1]) << 8) | std::uint32_t(b[0]);
    return std::bit_cast<float>(i);
}

// --- PNG -----------------------------------------------------------------

bool read_png_file(std::FILE* fp, RawImage& out, std::string& error) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) {
        error = "png_create_read_struct failed";
        return false;
    }
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        error = "png_create_info_struct failed";
        return false;
    }
    // Containers live outside the setjmp scope so a longjmp never skips a destructor.
    std::vector<png_bytep> rows;
    std::vector<unsigned char> buffer;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        error = "corrupt PNG data";
        return false;
    }
    png_init_io(png, fp);
    png_read_info(png, info);
    const int color_type = png_get_color_type(png, info);
    int depth = png_get_bit_depth(png, info);
    if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
    if (depth == 16) png_set_swap(png);
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = png_get_channels(png, info);
    depth = png_get_bit_depth(png, info);
    out.bit_depth = depth;
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    buffer.resize(rowbytes * static_cast<std::size_t>(out.height));
    rows.resize(static_cast<std::size_t>(out.height));
    for (int y = 0; y < out.height; ++y) rows[static_cast<std::size_t>(y)] = buffer.data() + rowbytes * y;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    const std::size_t count = static_cast<std::size_t>(out.width) * out.height * out.channels;
    out.samples.resize(count);
    if (depth == 16) {
        for (std::size_t i = 0; i < count; ++i) {
            out.samples[i] = static_cast<std::uint16_t>(buffer[2 * i] | (buffer[2 * i + 1] << 8));
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) out.samples[i] = buffer[i];
    }
    return true;
}

// --- JPEG ----------------------------------------------------------------

struct JpegError {
    jpeg_error_mgr mgr;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegError*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

bool read_jpeg_file(std::FILE* fp, RawImage& out, std::string& error) {
    jpeg_decompress_struct cinfo{};
    JpegError err{};
    std::vector<JSAMPLE> row;
    cinfo.err = jpeg_std_error(&err.mgr);
    err.mgr.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        error = err.message;
        return false;
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, fp);
    jpeg_read_header(&cinfo, TRUE);
    if (cinfo.jpeg_color_space != JCS_GRAYSCALE) cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);
    out.width = static_cast<int>(cinfo.output_width);
    out.height = static_cast<int>(cinfo.output_height);
    out.channels = cinfo.output_components;
    out.bit_depth = 8;
    const std::size_t stride = static_cast<std::size_t>(out.width) * out.channels;
    out.samples.resize(stride * out.height);
    row.resize(stride);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW rp = row.data();
        const auto y = cinfo.output_scanline;
        jpeg_read_scanlines(&cinfo, &rp, 1);
        std::copy(row.begin(), row.end(), out.samples.begin() + static_cast<std::ptrdiff_t>(stride * y));
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return true;
}

bool write_png_file(std::FILE* fp, int width, int height, int channels, const std::vector<unsigned char>& data,
                    std::string& error) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) {
        error = "png_create_write_struct failed";
        return false;
    }
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        error = "png_create_info_struct failed";
        return false;
    }
    std::vector<png_bytep> rows(static_cast<std::size_t>(height));
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        error = "PNG encoding failed";
        return false;
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const std::size_t stride = static_cast<std::size_t>(width) * channels;
    for (int y = 0; y < height; ++y) {
        rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(data.data() + stride * y);
    }
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

}  // namespace

void write_pfm(const std::filesystem::path& path, const Image& image) {
    if (image.channels() != 1 && image.channels() != 3) {
        throw IoError("PFM supports 1 or 3 channels, got " + std::to_string(image.channels()));
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << (image.channels() == 3 ? "PF" : "Pf") << "\n" << image.width() << " " << image.height() << "\n-1.0\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(image.width()) * image.channels() * 4);
    for (int y = image.height() - 1; y >= 0; --y) {
        std::size_t k = 0;
        for (int x = 0; x < image.width(); ++x) {
            for (int c = 0; c < image.channels(); ++c) {
                const std::uint32_t bits = float_bits_le(static_cast<float>(image(x, y, c)));
                std::memcpy(row.data() + k, &bits, 4);
                k += 4;
            }
        }
        out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size()));
    }
    if (!out) throw IoError("failed writing " + path.string());
}

Image read_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::string magic;
    int width = 0;
    int height = 0;
    double scale = 0.0;
    in >> magic >> width >> height >> scale;
    if (!in || (magic != "PF" && magic != "Pf") || width <= 0 || height <= 0 || scale == 0.0) {
        throw IoError(path.string() + ": malformed PFM header");
    }
    in.get();  // single whitespace before raster
    const int channels = magic == "PF" ? 3 : 1;
    const bool big_endian = scale > 0.0;
    Image img(width, height, channels);
    std::vector<unsigned char> row(static_cast<std::size_t>(width) * channels * 4);
    for (int y = height - 1; y >= 0; --y) {
        in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
        if (!in) throw IoError(path.string() + ": truncated PFM raster");
        std::size_t k = 0;
        for (int x = 0; x < width; ++x) {
            for (int c = 0; c < channels; ++c, k += 4) img(x, y, c) = float_from_bytes(row.data() + k, big_endian);
        }
    }
    return img;
}

RawImage read_raw(const std::filesystem::path& path) {
    FilePtr f = open_file(path, "rb");
    std::array<unsigned char, 8> sig{};
    const std::size_t got = std::fread(sig.data(), 1, sig.size(), f.get());
    std::rewind(f.get());
    RawImage raw;
    std::string error;
    bool ok = false;
    if (got == 8 && png_sig_cmp(sig.data(), 0, 8) == 0) {
        ok = read_png_file(f.get(), raw, error);
    } else if (got >= 3 && sig[0] == 0xFF && sig[1] == 0xD8 && sig[2] == 0xFF) {
        ok = read_jpeg_file(f.get(), raw, error);
    } else {
        throw IoError(path.string() + ": unsupported format (expected PNG or JPEG)");
    }
    if (!ok) throw IoError(path.string() + ": " + error);
    if (raw.channels != 1 && raw.channels != 3) {
        throw IoError(path.string() + ": unsupported channel count " + std::to_string(raw.channels));
    }
    return raw;
}

Image normalize_raw(const RawImage& raw) {
    Image img(raw.width, raw.height, 3);
    const double scale = 1.0 / static_cast<double>((1u << raw.bit_depth) - 1u);
    const std::size_t pixels = static_cast<std::size_t>(raw.width) * raw.height;
    for (int c = 0; c < 3; ++c) {
        auto dst = img.channel(c).values();
        const int src_c = raw.channels == 1 ? 0 : c;
        for (std::size_t p = 0; p < pixels; ++p) {
            dst[p] = clamp_to_domain(raw.samples[p * raw.channels + src_c] * scale);
        }
    }
    return img;
}

Image decode_image(const std::filesystem::path& path) { return normalize_raw(read_raw(path)); }

std::uint8_t quantize8(double v) noexcept {
    const double code = std::floor(v * 255.0 + 0.5);
    if (!(code > 0.0)) return 0;
    return code >= 255.0 ? 255 : static_cast<std::uint8_t>(code);
}

void encode_png(const std::filesystem::path& path, const Image& image) {
    if (image.channels() != 1 && image.channels() != 3) {
        throw IoError("PNG output supports 1 or 3 channels, got " + std::to_string(image.channels()));
    }
    const int w = image.width();
    const int h = image.height();
    const int ch = image.channels();
    std::vector<unsigned char> data(static_cast<std::size_t>(w) * h * ch);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int c = 0; c < ch; ++c) {
                data[(static_cast<std::size_t>(y) * w + x) * ch + c] = quantize8(image(x, y, c));
            }
        }
    }
    FilePtr f = open_file(path, "wb");
    std::string error;
    if (!write_png_file(f.get(), w, h, ch, data, error)) throw IoError(path.string() + ": " + error);
    if (std::fflush(f.get()) != 0) throw IoError("failed writing " + path.string());
}

}  // namespace ltip
