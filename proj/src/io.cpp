#include "colvis/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "json.hpp"

namespace colvis {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

[[noreturn]] void io_fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

GrayImage read_png(const std::string& path, std::FILE* fp) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) io_fail(path, "png init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        io_fail(path, "png init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        io_fail(path, "png decode failed");
    }
    png_init_io(png, fp);
    png_read_info(png, info);

    const png_uint_32 w = png_get_image_width(png, info);
    const png_uint_32 h = png_get_image_height(png, info);
    const int color = png_get_color_type(png, info);

    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8)
        png_set_expand_gray_1_2_4_to_8(png);
    if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
    png_set_strip_alpha(png);
    png_read_update_info(png, info);

    const int depth = png_get_bit_depth(png, info);
    const int channels = png_get_channels(png, info);
    if ((depth != 8 && depth != 16) || (channels != 1 && channels != 3)) {
        png_destroy_read_struct(&png, &info, nullptr);
        io_fail(path, "unsupported png layout");
    }

    const size_t stride = png_get_rowbytes(png, info);
    std::vector<unsigned char> bytes(stride * h);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 r = 0; r < h; ++r) rows[r] = bytes.data() + stride * r;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    GrayImage img(static_cast<int>(h), static_cast<int>(w));
    const double scale = depth == 16 ? 65535.0 : 255.0;
    for (png_uint_32 r = 0; r < h; ++r) {
        const unsigned char* src = bytes.data() + stride * r;
        for (png_uint_32 c = 0; c < w; ++c) {
            std::array<double, 3> px{};
            for (int ch = 0; ch < channels; ++ch) {
                const size_t off = (static_cast<size_t>(c) * channels + ch) * (depth / 8);
                px[ch] = depth == 16
                             ? static_cast<double>((src[off] << 8) | src[off + 1])
                             : static_cast<double>(src[off]);
            }
            const double v = channels == 3
                                 ? 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2]
                                 : px[0];
            img.at(static_cast<int>(r), static_cast<int>(c)) = v / scale;
        }
    }
    return img;
}

int pgm_token(std::istream& in, const std::string& path) {
    // skips whitespace and '#' comments
    while (true) {
        int ch = in.peek();
        if (ch == '#') {
            std::string line;
            std::getline(in, line);
        } else if (ch != EOF && std::isspace(static_cast<unsigned char>(ch))) {
            in.get();
        } else {
            break;
        }
    }
    int value = 0;
    if (!(in >> value)) io_fail(path, "malformed pgm header");
    return value;
}

GrayImage read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open");
    std::string magic(2, '\0');
    in.read(magic.data(), 2);
    const bool binary = magic == "P5";
    if (!binary && magic != "P2") io_fail(path, "not a pgm file");
    const int w = pgm_token(in, path);
    const int h = pgm_token(in, path);
    const int maxval = pgm_token(in, path);
    if (w < 1 || h < 1 || maxval < 1 || maxval > 65535) io_fail(path, "bad pgm dimensions");
    GrayImage img(h, w);
    if (binary) {
        in.get();  // single whitespace after maxval
        const int bpp = maxval > 255 ? 2 : 1;
        std::vector<unsigned char> buf(static_cast<size_t>(w) * h * bpp);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() != static_cast<std::streamsize>(buf.size()))
            io_fail(path, "truncated pgm data");
        for (size_t i = 0; i < static_cast<size_t>(w) * h; ++i) {
            const int v = bpp == 2 ? (buf[2 * i] << 8) | buf[2 * i + 1] : buf[i];
            img.data[i] = static_cast<double>(v) / maxval;
        }
    } else {
        for (size_t i = 0; i < static_cast<size_t>(w) * h; ++i) {
            const int v = pgm_token(in, path);
            img.data[i] = static_cast<double>(v) / maxval;
        }
    }
    return img;
}

}  // namespace

GrayImage read_image(const std::string& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) io_fail(path, "cannot open");
    unsigned char magic[8] = {};
    if (std::fread(magic, 1, 8, fp.get()) != 8) io_fail(path, "file too short");
    if (png_sig_cmp(magic, 0, 8) == 0) {
        std::rewind(fp.get());
        return read_png(path, fp.get());
    }
    if (magic[0] == 'P' && (magic[1] == '2' || magic[1] == '5')) {
        fp.reset();
        return read_pgm(path);
    }
    io_fail(path, "unrecognized image format (png/pgm supported)");
}

void write_png16(const std::string& path, const GrayImage& map) {
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) io_fail(path, "cannot open for writing");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) io_fail(path, "png init failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        io_fail(path, "png init failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        io_fail(path, "png encode failed");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, static_cast<png_uint_32>(map.width),
                 static_cast<png_uint_32>(map.height), 16, PNG_COLOR_TYPE_GRAY,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);

    std::vector<unsigned char> row(static_cast<size_t>(map.width) * 2);
    for (int r = 0; r < map.height; ++r) {
        for (int c = 0; c < map.width; ++c) {
            const double v = std::clamp(map.at(r, c), 0.0, 1.0);
            const auto q = static_cast<unsigned>(std::lround(v * 65535.0));
            row[2 * static_cast<size_t>(c)] = static_cast<unsigned char>(q >> 8);
            row[2 * static_cast<size_t>(c) + 1] = static_cast<unsigned char>(q & 0xff);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

std::string format_double(double v) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc()) throw std::runtime_error("number formatting failed");
    return std::string(buf.data(), ptr);
}

void write_csv(const std::string& path, const GrayImage& map) {
    std::string out;
    out.reserve(static_cast<size_t>(map.height) * map.width * 8);
    for (int r = 0; r < map.height; ++r) {
        for (int c = 0; c < map.width; ++c) {
            if (c) out.push_back(',');
            out += format_double(map.at(r, c));
        }
        out.push_back('\n');
    }
    write_text(path, out);
}

void write_sweep_csv(const std::string& path, const SweepResult& sweep) {
    std::string out = sweep.variable + ",response,control,ratio";
    const bool with_norm = !sweep.normalized.empty();
    if (with_norm) out += ",normalized";
    out.push_back('\n');
    for (size_t i = 0; i < sweep.values.size(); ++i) {
        out += format_double(sweep.values[i]);
        out.push_back(',');
        out += format_double(sweep.response[i]);
        out.push_back(',');
        out += format_double(sweep.control[i]);
        out.push_back(',');
        out += format_double(sweep.control[i] > 0.0 ? sweep.response[i] / sweep.control[i] : 0.0);
        if (with_norm) {
            out.push_back(',');
            out += format_double(sweep.normalized[i]);
        }
        out.push_back('\n');
    }
    write_text(path, out);
}

void write_profiles_csv(const std::string& path, const SweepResult& sweep) {
    if (sweep.profiles.empty()) return;
    std::string out = sweep.variable;
    for (size_t c = 0; c < sweep.profiles.front().size(); ++c) {
        out.push_back(',');
        out += "col_" + std::to_string(c);
    }
    out.push_back('\n');
    for (size_t i = 0; i < sweep.profiles.size(); ++i) {
        out += format_double(sweep.values[static_cast<size_t>(sweep.profile_points[i])]);
        for (double v : sweep.profiles[i]) {
            out.push_back(',');
            out += format_double(v);
        }
        out.push_back('\n');
    }
    write_text(path, out);
}

std::string roi_list_json(const RoiList& rois) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Roi& roi : rois) {
        nlohmann::ordered_json j;
        j["rank"] = roi.rank;
        j["center"] = {roi.center_row, roi.center_col};
        j["bbox"] = {roi.top, roi.left, roi.height, roi.width};
        j["score"] = roi.score;
        arr.push_back(std::move(j));
    }
    return arr.dump(2) + "\n";
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) io_fail(path, "cannot open for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) io_fail(path, "write failed");
}

std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) io_fail(path, "cannot open");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                                EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 init failed");
    std::vector<char> buf(1 << 16);
    while (in) {
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        const std::streamsize got = in.gcount();
        if (got > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<size_t>(got)) != 1)
            throw std::runtime_error("sha256 update failed");
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
        throw std::runtime_error("sha256 final failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

}  // namespace colvis
