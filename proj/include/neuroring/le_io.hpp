#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

// Little-endian primitives for the binary file formats.
namespace neuroring::le
{

template <typename U>
void put_uint(std::ostream& out, U value)
{
    char bytes[sizeof(U)];
    for (std::size_t i = 0; i < sizeof(U); ++i)
        bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
    out.write(bytes, sizeof(U));
}

template <typename U>
U get_uint(std::istream& in)
{
    unsigned char bytes[sizeof(U)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(U)))
        throw std::runtime_error("unexpected end of file");
    U value = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        value |= static_cast<U>(bytes[i]) << (8 * i);
    return value;
}

inline void put_u8(std::ostream& out, std::uint8_t v) { put_uint<std::uint8_t>(out, v); }
inline void put_u16(std::ostream& out, std::uint16_t v) { put_uint<std::uint16_t>(out, v); }
inline void put_u32(std::ostream& out, std::uint32_t v) { put_uint<std::uint32_t>(out, v); }
inline void put_u64(std::ostream& out, std::uint64_t v) { put_uint<std::uint64_t>(out, v); }
inline void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline std::uint8_t get_u8(std::istream& in) { return get_uint<std::uint8_t>(in); }
inline std::uint16_t get_u16(std::istream& in) { return get_uint<std::uint16_t>(in); }
inline std::uint32_t get_u32(std::istream& in) { return get_uint<std::uint32_t>(in); }
inline std::uint64_t get_u64(std::istream& in) { return get_uint<std::uint64_t>(in); }
inline double get_f64(std::istream& in) { return std::bit_cast<double>(get_u64(in)); }

} // namespace neuroring::le
