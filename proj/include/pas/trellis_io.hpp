#pragma once

#include <filesystem>
#include <iosfwd>
#include <variant>

#include "pas/trellis.hpp"

namespace pas {

// Versioned little-endian binary container for trellises; see docs/formats.md.
inline constexpr std::uint16_t kTrellisFormatVersion = 1;

void write_trellis(std::ostream& out, const EssTrellis& trellis);
void write_trellis(std::ostream& out, const BoundedTrellis& trellis);

using AnyTrellis = std::variant<EssTrellis, BoundedTrellis>;

AnyTrellis read_trellis(std::istream& in);
const Trellis& as_trellis(const AnyTrellis& any);

void save_trellis(const std::filesystem::path& path, const EssTrellis& trellis);
void save_trellis(const std::filesystem::path& path, const BoundedTrellis& trellis);
AnyTrellis load_trellis(const std::filesystem::path& path);

} // namespace pas
