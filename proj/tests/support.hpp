#pragma once

// Shared helpers for the test suites.

#include <unistd.h>

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "gridsight/image.hpp"

namespace testsupport {

inline gridsight::Image random_gray(int w, int h, std::uint64_t seed, int lo = 0,
                                    int hi = 255) {
    gridsight::Image img(w, h, 1);
    std::mt19937_64 rng(seed);
    const int span = hi - lo + 1;
    for (auto& px : img.pixels) {
        px = static_cast<std::uint8_t>(lo + static_cast<int>(rng() % span));
    }
    return img;
}

inline gridsight::Image random_rgb(int w, int h, std::uint64_t seed) {
    gridsight::Image img(w, h, 3);
    std::mt19937_64 rng(seed);
    for (auto& px : img.pixels) px = static_cast<std::uint8_t>(rng() % 256);
    return img;
}

// Clockwise quarter turn; out(x, y) = in(y, H-1-x).
inline gridsight::Image rot90(const gridsight::Image& in) {
    gridsight::Image out(in.height, in.width, in.channels);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            for (int c = 0; c < in.channels; ++c) {
                out.at(x, y, c) = in.at(y, in.height - 1 - x, c);
            }
        }
    }
    return out;
}

inline gridsight::Image shifted(const gridsight::Image& in, int delta) {
    gridsight::Image out = in;
    for (auto& px : out.pixels) {
        px = static_cast<std::uint8_t>(static_cast<int>(px) + delta);
    }
    return out;
}

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("gridsight_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void spit(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

} // namespace testsupport
