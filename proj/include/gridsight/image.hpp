#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gridsight/error.hpp"

namespace gridsight {

/// 8-bit raster image, row major, interleaved RGB when channels == 3.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;

    Image() = default;
    /// Zero-filled image. Throws ValidationError on bad dimensions.
    Image(int w, int h, int c);

    std::uint8_t& at(int x, int y, int c = 0) {
        return pixels[static_cast<std::size_t>(y * width + x) * channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const {
        return pixels[static_cast<std::size_t>(y * width + x) * channels + c];
    }

    bool operator==(const Image&) const = default;
};

/// Axis-aligned sub-rectangle of a frame, in pixels.
struct Roi {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;

    bool operator==(const Roi&) const = default;
};

/// Fixed grid of equally sized cells laid over the top-left of a ROI.
struct GridSpec {
    int rows = 9;
    int cols = 8;
    int cell_width = 44;
    int cell_height = 44;

    bool operator==(const GridSpec&) const = default;
};

/// Throws ValidationError unless the ROI lies inside a width x height frame.
void validate_roi(const Roi& roi, int frame_width, int frame_height);

/// Throws ValidationError unless the grid fits inside a ROI of the given size.
void validate_grid(const GridSpec& grid, int roi_width, int roi_height);

/// Parses a binary NetPBM image (P5 grayscale or P6 RGB, maxval 255).
/// Header comments (# to end of line) are accepted. Throws ParseError with
/// fault BadHeader, BadMaxval or Truncated.
Image decode_netpbm(std::span<const std::uint8_t> bytes);

/// Serializes to binary P5/P6 with maxval 255. decode(encode(img)) == img.
std::vector<std::uint8_t> encode_netpbm(const Image& image);

/// Rec. 601 luma with round half up; grayscale input is returned unchanged.
Image to_grayscale(const Image& image);

/// Copies the ROI pixels out of the image. Throws on out-of-bounds ROI.
Image extract_roi(const Image& image, const Roi& roi);

/// Slices the grid out of a ROI image, row major (row 0 left to right, then
/// row 1, ...). ROI pixels right of / below the grid extent are ignored.
std::vector<Image> split_cells(const Image& roi_image, const GridSpec& grid);

/// File helpers; throw IoError on filesystem failures.
Image load_netpbm(const std::filesystem::path& path);
void save_netpbm(const std::filesystem::path& path, const Image& image);

} // namespace gridsight
