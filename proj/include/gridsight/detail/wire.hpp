#pragma once

// Little-endian byte packing shared by the GSVM and GSDS formats.

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace gridsight::detail {

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

inline void put_f64(std::vector<std::uint8_t>& out, double v) {
    put_u64(out, std::bit_cast<std::uint64_t>(v));
}

inline std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[pos++]) << (8 * i);
    return v;
}

inline std::uint64_t get_u64(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[pos++]) << (8 * i);
    return v;
}

inline double get_f64(std::span<const std::uint8_t> bytes, std::size_t& pos) {
    return std::bit_cast<double>(get_u64(bytes, pos));
}

} // namespace gridsight::detail
