#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pas {

using BigInt = boost::multiprecision::cpp_int;

// ⌊log2 x⌋ for x > 0, -1 for x == 0.
long floor_log2(const BigInt& x);

// log2 x without overflowing a double for very large x. Returns -inf for 0.
double log2(const BigInt& x);

// num / den as a double, valid for operands far beyond the double range.
double ratio(const BigInt& num, const BigInt& den);

// Conversion that saturates to +inf instead of overflowing.
double to_double(const BigInt& x);

// Most-significant-bit-first packing of a bit vector into an integer.
BigInt from_bits(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> to_bits(const BigInt& value, std::size_t width);

std::string to_hex(const BigInt& value);
BigInt from_hex(std::string_view text);

BigInt factorial(unsigned n);

} // namespace pas
