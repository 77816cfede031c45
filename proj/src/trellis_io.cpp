#include "pas/trellis_io.hpp"

#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "pas/error.hpp"

namespace pas {

namespace {

constexpr std::array<char, 4> kMagic{'E', 'S', 'S', 'T'};
constexpr std::uint32_t kMaxAlphabet = 1u << 16;
constexpr std::uint32_t kMaxCountBytes = 1u << 20;

template <typename T>
void put(std::ostream& out, T value)
{
    using U = std::make_unsigned_t<T>;
    auto u = static_cast<U>(value);
    std::array<char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes[i] = static_cast<char>(u & 0xff);
        u = static_cast<U>(u >> 8);
    }
    out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream& in)
{
    using U = std::make_unsigned_t<T>;
    std::array<unsigned char, sizeof(T)> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in)
        fail(ErrorKind::io_error, "trellis file is truncated");
    U u = 0;
    for (std::size_t i = sizeof(T); i-- > 0;)
        u = static_cast<U>((u << 8) | bytes[i]);
    return static_cast<T>(u);
}

void write_header(std::ostream& out, const Trellis& t, std::uint8_t mode, std::uint32_t n_m, std::uint32_t n_p)
{
    const auto& g = t.geometry();
    out.write(kMagic.data(), kMagic.size());
    put<std::uint16_t>(out, kTrellisFormatVersion);
    put<std::uint8_t>(out, mode);
    put<std::uint8_t>(out, 0);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.length));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.symbols()));
    for (const auto e : g.energies)
        put<std::int64_t>(out, e);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.amplitudes.size()));
    for (const auto a : g.amplitudes)
        put<std::int32_t>(out, a);
    put<std::int64_t>(out, g.e_max);
    put<std::uint32_t>(out, n_m);
    put<std::uint32_t>(out, n_p);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(g.levels));
}

void finish(std::ostream& out)
{
    out.flush();
    if (!out)
        fail(ErrorKind::io_error, "failed to write trellis");
}

} // namespace

void write_trellis(std::ostream& out, const EssTrellis& trellis)
{
    write_header(out, trellis, 0, 0, 0);
    for (const auto& c : trellis.raw_counts()) {
        std::vector<unsigned char> bytes;
        boost::multiprecision::export_bits(c, std::back_inserter(bytes), 8, false);
        if (c == 0)
            bytes.clear();
        put<std::uint32_t>(out, static_cast<std::uint32_t>(bytes.size()));
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    }
    finish(out);
}

void write_trellis(std::ostream& out, const BoundedTrellis& trellis)
{
    write_header(out, trellis, 1, static_cast<std::uint32_t>(trellis.mantissa_bits()),
                 static_cast<std::uint32_t>(trellis.exponent_bits()));
    for (int n = 0; n <= trellis.length(); ++n) {
        for (int j = 0; j < trellis.num_levels(); ++j) {
            put<std::uint64_t>(out, trellis.mantissa(n, j));
            put<std::uint32_t>(out, trellis.exponent(n, j));
        }
    }
    finish(out);
}

AnyTrellis read_trellis(std::istream& in)
{
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic)
        fail(ErrorKind::io_error, "not a trellis file (bad magic)");
    const auto version = get<std::uint16_t>(in);
    if (version != kTrellisFormatVersion)
        fail(ErrorKind::io_error, "unsupported trellis format version " + std::to_string(version));
    const auto mode = get<std::uint8_t>(in);
    get<std::uint8_t>(in);
    const auto length = get<std::uint32_t>(in);
    const auto symbols = get<std::uint32_t>(in);
    if (symbols == 0 || symbols > kMaxAlphabet)
        fail(ErrorKind::io_error, "trellis file has an invalid alphabet size");
    std::vector<long long> energies(symbols);
    for (auto& e : energies)
        e = get<std::int64_t>(in);
    const auto num_amps = get<std::uint32_t>(in);
    if (num_amps != 0 && num_amps != symbols)
        fail(ErrorKind::io_error, "trellis file has an inconsistent amplitude list");
    std::vector<int> amplitudes(num_amps);
    for (auto& a : amplitudes)
        a = get<std::int32_t>(in);
    const auto e_max = get<std::int64_t>(in);
    const auto n_m = get<std::uint32_t>(in);
    const auto n_p = get<std::uint32_t>(in);
    const auto levels = get<std::uint32_t>(in);

    auto geom = make_geometry(static_cast<int>(length), std::move(energies), std::move(amplitudes), e_max);
    if (static_cast<std::uint32_t>(geom.levels) != levels)
        fail(ErrorKind::io_error, "trellis file level count disagrees with its geometry");
    const std::size_t nodes = static_cast<std::size_t>(length + 1) * levels;

    if (mode == 0) {
        std::vector<BigInt> counts(nodes);
        std::vector<unsigned char> bytes;
        for (auto& c : counts) {
            const auto size = get<std::uint32_t>(in);
            if (size > kMaxCountBytes)
                fail(ErrorKind::io_error, "trellis file has an oversized count");
            bytes.resize(size);
            in.read(reinterpret_cast<char*>(bytes.data()), size);
            if (!in)
                fail(ErrorKind::io_error, "trellis file is truncated");
            c = 0;
            if (size > 0)
                boost::multiprecision::import_bits(c, bytes.begin(), bytes.end(), 8, false);
        }
        return EssTrellis::from_counts(std::move(geom), std::move(counts));
    }
    if (mode == 1) {
        std::vector<std::uint64_t> mantissas(nodes);
        std::vector<std::uint32_t> exponents(nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            mantissas[i] = get<std::uint64_t>(in);
            exponents[i] = get<std::uint32_t>(in);
        }
        return BoundedTrellis::from_parts(std::move(geom), static_cast<int>(n_m), static_cast<int>(n_p),
                                          std::move(mantissas), std::move(exponents));
    }
    fail(ErrorKind::io_error, "unknown trellis mode " + std::to_string(mode));
}

const Trellis& as_trellis(const AnyTrellis& any)
{
    return std::visit([](const auto& t) -> const Trellis& { return t; }, any);
}

namespace {

template <typename T>
void save_impl(const std::filesystem::path& path, const T& trellis)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail(ErrorKind::io_error, "cannot open " + path.string() + " for writing");
    write_trellis(out, trellis);
}

} // namespace

void save_trellis(const std::filesystem::path& path, const EssTrellis& trellis) { save_impl(path, trellis); }
void save_trellis(const std::filesystem::path& path, const BoundedTrellis& trellis) { save_impl(path, trellis); }

AnyTrellis load_trellis(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorKind::io_error, "cannot open " + path.string());
    auto trellis = read_trellis(in);
    if (in.peek() != std::char_traits<char>::eof())
        fail(ErrorKind::io_error, path.string() + ": trailing bytes after the trellis payload");
    return trellis;
}

} // namespace pas
