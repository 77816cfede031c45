#include "pas/bigint.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "pas/error.hpp"

namespace pas {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::invalid_parameter: return "invalid-parameter";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::invalid_index: return "invalid-index";
    case ErrorKind::invalid_sequence: return "invalid-sequence";
    case ErrorKind::precision_too_small: return "precision-too-small";
    case ErrorKind::numerical_error: return "numerical-error";
    case ErrorKind::io_error: return "io-error";
    }
    return "unknown";
}

long floor_log2(const BigInt& x)
{
    if (x <= 0)
        return -1;
    return static_cast<long>(boost::multiprecision::msb(x));
}

namespace {

// Split x into (top 62 bits as double, shift) so that x ≈ head·2^shift.
std::pair<double, long> split(const BigInt& x)
{
    const long top = floor_log2(x);
    const long shift = top > 62 ? top - 62 : 0;
    const BigInt head = x >> shift;
    return {head.convert_to<double>(), shift};
}

} // namespace

double log2(const BigInt& x)
{
    if (x <= 0)
        return -std::numeric_limits<double>::infinity();
    const auto [head, shift] = split(x);
    return std::log2(head) + static_cast<double>(shift);
}

double ratio(const BigInt& num, const BigInt& den)
{
    if (den == 0)
        fail(ErrorKind::numerical_error, "ratio: division by zero");
    if (num == 0)
        return 0.0;
    const auto [hn, sn] = split(num);
    const auto [hd, sd] = split(den);
    return std::ldexp(hn / hd, static_cast<int>(sn - sd));
}

double to_double(const BigInt& x)
{
    if (x == 0)
        return 0.0;
    const auto [head, shift] = split(x);
    if (shift > 2000)
        return std::numeric_limits<double>::infinity();
    return std::ldexp(head, static_cast<int>(shift));
}

BigInt from_bits(std::span<const std::uint8_t> bits)
{
    BigInt value = 0;
    for (const auto b : bits) {
        value <<= 1;
        if (b & 1u)
            value |= 1;
    }
    return value;
}

std::vector<std::uint8_t> to_bits(const BigInt& value, std::size_t width)
{
    if (value < 0 || floor_log2(value) >= static_cast<long>(width))
        fail(ErrorKind::invalid_parameter, "to_bits: value does not fit in " + std::to_string(width) + " bits");
    std::vector<std::uint8_t> out(width, 0);
    for (std::size_t i = 0; i < width; ++i)
        out[width - 1 - i] = boost::multiprecision::bit_test(value, static_cast<unsigned>(i)) ? 1 : 0;
    return out;
}

std::string to_hex(const BigInt& value)
{
    if (value == 0)
        return "0";
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    BigInt v = value;
    while (v > 0) {
        out.push_back(digits[static_cast<unsigned>(v & 0xf)]);
        v >>= 4;
    }
    return {out.rbegin(), out.rend()};
}

BigInt from_hex(std::string_view text)
{
    if (text.starts_with("0x") || text.starts_with("0X"))
        text.remove_prefix(2);
    if (text.empty())
        fail(ErrorKind::invalid_parameter, "from_hex: empty string");
    BigInt value = 0;
    for (const char c : text) {
        int d;
        if (c >= '0' && c <= '9')
            d = c - '0';
        else if (c >= 'a' && c <= 'f')
            d = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            d = c - 'A' + 10;
        else
            fail(ErrorKind::invalid_parameter, std::string("from_hex: bad digit '") + c + "'");
        value <<= 4;
        value += d;
    }
    return value;
}

BigInt factorial(unsigned n)
{
    BigInt f = 1;
    for (unsigned i = 2; i <= n; ++i)
        f *= i;
    return f;
}

} // namespace pas
