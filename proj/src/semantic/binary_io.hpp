#pragma once

// Little-endian scalar encoding shared by the SCEB and SCWH formats.

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "scc/common/error.hpp"

namespace scc::semantic::binio {

template <class U>
void put_le(std::ostream& out, U value) {
    char bytes[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i) {
        bytes[i] = static_cast<char>((value >> (8 * i)) & 0xff);
    }
    out.write(bytes, sizeof(U));
}

template <class U>
U get_le(std::istream& in, const char* what) {
    unsigned char bytes[sizeof(U)];
    in.read(reinterpret_cast<char*>(bytes), sizeof(U));
    if (in.gcount() != static_cast<std::streamsize>(sizeof(U))) {
        throw DataError(std::string("truncated payload while reading ") + what);
    }
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) value |= static_cast<U>(bytes[i]) << (8 * i);
    return value;
}

inline void put_u32(std::ostream& out, std::uint32_t v) { put_le(out, v); }
inline void put_f32(std::ostream& out, float v) { put_le(out, std::bit_cast<std::uint32_t>(v)); }
inline void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

inline std::uint32_t get_u32(std::istream& in, const char* what) { return get_le<std::uint32_t>(in, what); }
inline float get_f32(std::istream& in, const char* what) {
    return std::bit_cast<float>(get_le<std::uint32_t>(in, what));
}
inline double get_f64(std::istream& in, const char* what) {
    return std::bit_cast<double>(get_le<std::uint64_t>(in, what));
}

inline void expect_magic(std::istream& in, const char (&magic)[5], const char* format) {
    char got[4];
    in.read(got, 4);
    if (in.gcount() != 4 || std::string(got, 4) != std::string(magic, 4)) {
        throw DataError(std::string(format) + ": bad magic");
    }
}

inline void expect_end(std::istream& in, const char* format) {
    if (in.peek() != std::char_traits<char>::eof()) {
        throw DataError(std::string(format) + ": trailing bytes after payload");
    }
}

}  // namespace scc::semantic::binio
