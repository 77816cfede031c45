#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pas/bigint.hpp"

namespace pas {

/// Shape of a bounded-energy trellis. Column n holds the accumulated
/// energies n·e_min + j·step for j ∈ [0, levels); a symbol with energy ε moves
/// a path from level j to level j + (ε - e_min)/step in the next column.
struct TrellisGeometry {
    int length = 0;                 // N
    std::vector<long long> energies; // strictly increasing
    std::vector<int> amplitudes;    // empty for energy-only trellises
    long long e_max = 0;
    long long e_min = 0;
    long long step = 1;
    int levels = 0;                 // L
    std::vector<int> offsets;       // per-symbol level increment

    int symbols() const noexcept { return static_cast<int>(energies.size()); }
    long long level_energy(int column, int level) const noexcept
    {
        return static_cast<long long>(column) * e_min + static_cast<long long>(level) * step;
    }
};

TrellisGeometry make_geometry(int length, std::vector<long long> energies, std::vector<int> amplitudes,
                              long long e_max);

/// Path-count grid T_n^e over a TrellisGeometry. Counts of out-of-range
/// children are zero.
class Trellis {
public:
    const TrellisGeometry& geometry() const noexcept { return geom_; }
    int length() const noexcept { return geom_.length; }
    int num_levels() const noexcept { return geom_.levels; }
    long long e_max() const noexcept { return geom_.e_max; }
    const std::vector<int>& amplitudes() const noexcept { return geom_.amplitudes; }
    const std::vector<long long>& energies() const noexcept { return geom_.energies; }

    const BigInt& count(int column, int level) const
    {
        return counts_[static_cast<std::size_t>(column) * geom_.levels + level];
    }
    // Count of the node reached from (column, level) by `symbol`; zero past the last level.
    const BigInt& child(int column, int level, int symbol) const;

    const BigInt& sphere_size() const { return count(0, 0); }
    // k = ⌊log2 T_0^0⌋: message bits the shaper accepts.
    long input_bits() const { return floor_log2(sphere_size()); }
    std::vector<long long> final_energies() const;

    const std::vector<BigInt>& raw_counts() const noexcept { return counts_; }

protected:
    Trellis() = default;
    Trellis(TrellisGeometry geom, std::vector<BigInt> counts);

    TrellisGeometry geom_;
    std::vector<BigInt> counts_;
};

/// Exact arbitrary-precision path counts.
class EssTrellis : public Trellis {
public:
    static EssTrellis build(TrellisGeometry geom);
    // Adopts precomputed counts (file import); checks dimensions and the last column.
    static EssTrellis from_counts(TrellisGeometry geom, std::vector<BigInt> counts);

private:
    using Trellis::Trellis;
};

EssTrellis build_trellis(int length, std::span<const int> amplitudes, long long e_max);
EssTrellis build_trellis_from_energies(int length, std::span<const long long> energies, long long e_max);

/// Counts rounded down to mantissa·2^exponent with `mantissa_bits` and
/// `exponent_bits` of storage. Each node keeps the top mantissa bits of the
/// exact sum of its already-rounded children, so T̂ ≤ Σ children T̂ holds
/// node by node and every index below T̂_0^0 is decodable.
class BoundedTrellis : public Trellis {
public:
    static BoundedTrellis build(TrellisGeometry geom, int mantissa_bits, int exponent_bits);
    static BoundedTrellis from_parts(TrellisGeometry geom, int mantissa_bits, int exponent_bits,
                                     std::vector<std::uint64_t> mantissas, std::vector<std::uint32_t> exponents);

    int mantissa_bits() const noexcept { return mantissa_bits_; }
    int exponent_bits() const noexcept { return exponent_bits_; }
    std::uint64_t mantissa(int column, int level) const
    {
        return mantissas_[static_cast<std::size_t>(column) * geom_.levels + level];
    }
    std::uint32_t exponent(int column, int level) const
    {
        return exponents_[static_cast<std::size_t>(column) * geom_.levels + level];
    }

private:
    BoundedTrellis() = default;

    int mantissa_bits_ = 0;
    int exponent_bits_ = 0;
    std::vector<std::uint64_t> mantissas_;
    std::vector<std::uint32_t> exponents_;
};

BoundedTrellis build_bounded_trellis(int length, std::span<const int> amplitudes, long long e_max,
                                     int mantissa_bits, int exponent_bits);

// Lexicographic unranking/ranking. Symbols are indices into the trellis
// alphabet (ordered by energy); the amplitude overloads map through
// Trellis::amplitudes().
std::vector<int> shape_symbols(const BigInt& index, const Trellis& trellis);
BigInt deshape_symbols(std::span<const int> symbols, const Trellis& trellis);
std::vector<int> shape(const BigInt& index, const Trellis& trellis);
BigInt deshape(std::span<const int> amplitudes, const Trellis& trellis);

/// Exact-energy counts of all length-N sequences: counts[j] sequences have
/// energy base + j·step. Truncated at `max_energy`.
struct EnergyHistogram {
    long long base = 0;
    long long step = 1;
    std::vector<BigInt> counts;
};

EnergyHistogram energy_histogram(int length, std::span<const long long> energies, long long max_energy);

// Smallest energy bound on the achievable grid whose sphere carries k bits.
long long find_emax(int length, std::span<const int> amplitudes, long input_bits);

struct InducedStats {
    BigInt sequences;
    std::map<long long, BigInt> histogram; // final energy -> sequence count (nonzero only)
    double avg_energy = 0.0;               // per symbol
    std::vector<double> pmf;               // per alphabet symbol, averaged over positions
};

// Statistics over every sequence in the sphere (uniform over |S|).
InducedStats induced_stats(const EssTrellis& trellis);

// Statistics over the sequences with index < `count` (the ones a k-bit
// shaper actually emits when count = 2^k). Histogram is left empty.
InducedStats used_stats(const EssTrellis& trellis, const BigInt& count);

/// Sphere size and symbol statistics from forward counts only, without
/// materialising the trellis. Cheap enough for block-length sweeps.
struct SphereSummary {
    BigInt size;
    double avg_energy = 0.0;
    std::vector<double> pmf;
};

SphereSummary sphere_summary(int length, std::span<const int> amplitudes, long long e_max);

struct ComplexityReport {
    long long exact_storage_bits = 0;   // L(N+1)⌈N R_s⌉
    long long bounded_storage_bits = 0; // L(N+1)(n_m+n_p)
    long long exact_ops_per_dim = 0;    // (|A|-1)⌈N R_s⌉
    long long bounded_ops_per_dim = 0;  // (|A|-1)(n_m+n_p)

    double exact_storage_kB() const { return static_cast<double>(exact_storage_bits) / 8000.0; }
    double bounded_storage_kB() const { return static_cast<double>(bounded_storage_bits) / 8000.0; }
};

ComplexityReport complexity_report(long levels, long length, int mantissa_bits, int exponent_bits,
                                   int alphabet_size, double shaping_rate);

} // namespace pas
