#include "gridsight/image.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

namespace gridsight {

namespace {

std::size_t pixel_count(int w, int h, int c) {
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h) *
           static_cast<std::size_t>(c);
}

// Reads one whitespace-separated header token, skipping '#' comments.
// Returns false if the header ends prematurely.
bool next_token(std::span<const std::uint8_t> bytes, std::size_t& pos,
                std::string& token) {
    while (pos < bytes.size()) {
        char ch = static_cast<char>(bytes[pos]);
        if (ch == '#') {
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (std::isspace(static_cast<unsigned char>(ch))) {
            ++pos;
        } else {
            break;
        }
    }
    token.clear();
    while (pos < bytes.size() &&
           !std::isspace(static_cast<unsigned char>(bytes[pos])) &&
           bytes[pos] != '#') {
        token.push_back(static_cast<char>(bytes[pos]));
        ++pos;
    }
    return !token.empty();
}

int parse_positive_int(const std::string& token, const char* what) {
    if (token.empty() || token.size() > 9) {
        throw ParseError(ParseFault::BadHeader,
                         std::string("netpbm: bad ") + what + " '" + token + "'");
    }
    for (char ch : token) {
        if (!std::isdigit(static_cast<unsigned char>(ch))) {
            throw ParseError(ParseFault::BadHeader,
                             std::string("netpbm: bad ") + what + " '" + token + "'");
        }
    }
    return std::stoi(token);
}

} // namespace

Image::Image(int w, int h, int c) : width(w), height(h), channels(c) {
    if (w < 1 || h < 1 || (c != 1 && c != 3)) {
        throw ValidationError("image: bad dimensions " + std::to_string(w) + "x" +
                              std::to_string(h) + "x" + std::to_string(c));
    }
    pixels.assign(pixel_count(w, h, c), 0);
}

void validate_roi(const Roi& roi, int frame_width, int frame_height) {
    if (roi.width < 1 || roi.height < 1 || roi.x < 0 || roi.y < 0 ||
        roi.x + roi.width > frame_width || roi.y + roi.height > frame_height) {
        throw ValidationError(
            "roi " + std::to_string(roi.x) + "," + std::to_string(roi.y) + "," +
            std::to_string(roi.width) + "," + std::to_string(roi.height) +
            " outside " + std::to_string(frame_width) + "x" +
            std::to_string(frame_height) + " frame");
    }
}

void validate_grid(const GridSpec& grid, int roi_width, int roi_height) {
    if (grid.rows < 1 || grid.cols < 1 || grid.cell_width < 1 ||
        grid.cell_height < 1) {
        throw ValidationError("grid: rows/cols/cell sizes must be positive");
    }
    if (grid.cols * grid.cell_width > roi_width ||
        grid.rows * grid.cell_height > roi_height) {
        throw ValidationError(
            "grid " + std::to_string(grid.rows) + "x" + std::to_string(grid.cols) +
            " of " + std::to_string(grid.cell_width) + "x" +
            std::to_string(grid.cell_height) + " cells exceeds " +
            std::to_string(roi_width) + "x" + std::to_string(roi_height) + " roi");
    }
}

Image decode_netpbm(std::span<const std::uint8_t> bytes) {
    std::size_t pos = 0;
    std::string token;
    if (!next_token(bytes, pos, token) || (token != "P5" && token != "P6")) {
        throw ParseError(ParseFault::BadHeader,
                         "netpbm: expected P5 or P6 magic, got '" + token + "'");
    }
    const int channels = token == "P5" ? 1 : 3;

    if (!next_token(bytes, pos, token)) {
        throw ParseError(ParseFault::BadHeader, "netpbm: missing width");
    }
    const int width = parse_positive_int(token, "width");
    if (!next_token(bytes, pos, token)) {
        throw ParseError(ParseFault::BadHeader, "netpbm: missing height");
    }
    const int height = parse_positive_int(token, "height");
    if (width < 1 || height < 1) {
        throw ParseError(ParseFault::BadHeader, "netpbm: zero-sized image");
    }
    if (!next_token(bytes, pos, token)) {
        throw ParseError(ParseFault::BadHeader, "netpbm: missing maxval");
    }
    const int maxval = parse_positive_int(token, "maxval");
    if (maxval != 255) {
        throw ParseError(ParseFault::BadMaxval,
                         "netpbm: maxval " + std::to_string(maxval) +
                         " unsupported, need 255");
    }
    // Exactly one whitespace byte separates the header from the body.
    if (pos >= bytes.size() ||
        !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        throw ParseError(ParseFault::BadHeader,
                         "netpbm: missing whitespace before body");
    }
    ++pos;

    Image img(width, height, channels);
    const std::size_t need = pixel_count(width, height, channels);
    if (bytes.size() - pos < need) {
        throw ParseError(ParseFault::Truncated,
                         "netpbm: body has " + std::to_string(bytes.size() - pos) +
                         " bytes, need " + std::to_string(need));
    }
    std::copy_n(bytes.begin() + pos, need, img.pixels.begin());
    return img;
}

std::vector<std::uint8_t> encode_netpbm(const Image& image) {
    if (image.channels != 1 && image.channels != 3) {
        throw ValidationError("netpbm: can only encode 1- or 3-channel images");
    }
    char header[64];
    int n = std::snprintf(header, sizeof header, "%s\n%d %d\n255\n",
                          image.channels == 1 ? "P5" : "P6", image.width,
                          image.height);
    std::vector<std::uint8_t> out(header, header + n);
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
}

Image to_grayscale(const Image& image) {
    if (image.channels == 1) return image;
    Image gray(image.width, image.height, 1);
    const std::size_t n =
        static_cast<std::size_t>(image.width) * image.height;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = image.pixels[i * 3 + 0];
        const double g = image.pixels[i * 3 + 1];
        const double b = image.pixels[i * 3 + 2];
        double luma = std::floor(0.299 * r + 0.587 * g + 0.114 * b + 0.5);
        if (luma < 0.0) luma = 0.0;
        if (luma > 255.0) luma = 255.0;
        gray.pixels[i] = static_cast<std::uint8_t>(luma);
    }
    return gray;
}

Image extract_roi(const Image& image, const Roi& roi) {
    validate_roi(roi, image.width, image.height);
    Image out(roi.width, roi.height, image.channels);
    const std::size_t row_bytes =
        static_cast<std::size_t>(roi.width) * image.channels;
    for (int y = 0; y < roi.height; ++y) {
        const std::uint8_t* src = &image.pixels[pixel_count(
            image.width, roi.y + y, 1) * image.channels +
            static_cast<std::size_t>(roi.x) * image.channels];
        std::copy_n(src, row_bytes, &out.pixels[static_cast<std::size_t>(y) * row_bytes]);
    }
    return out;
}

std::vector<Image> split_cells(const Image& roi_image, const GridSpec& grid) {
    validate_grid(grid, roi_image.width, roi_image.height);
    std::vector<Image> cells;
    cells.reserve(static_cast<std::size_t>(grid.rows) * grid.cols);
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            cells.push_back(extract_roi(
                roi_image, Roi{c * grid.cell_width, r * grid.cell_height,
                               grid.cell_width, grid.cell_height}));
        }
    }
    return cells;
}

Image load_netpbm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed on " + path.string());
    return decode_netpbm(bytes);
}

void save_netpbm(const std::filesystem::path& path, const Image& image) {
    const auto bytes = encode_netpbm(image);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed on " + path.string());
}

} // namespace gridsight
