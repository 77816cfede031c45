#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pas/bigint.hpp"
#include "pas/constellation.hpp"
#include "pas/distributions.hpp"
#include "pas/trellis.hpp"

namespace pas {

struct Precision {
    bool bounded = false;
    int mantissa_bits = 0;
    int exponent_bits = 0;

    static Precision exact() { return {}; }
    static Precision fixed(int n_m, int n_p) { return {true, n_m, n_p}; }
};

struct PessConfig {
    int m = 0;
    int s = 0; // shaped amplitude bit-levels
    int u = 0; // uniform amplitude bit-levels, s + u = m - 1
    int N = 0;
    long k = 0;
    long long e_max = 0;
    Precision precision;
};

enum class PmfBasis {
    all,  // every sequence in the sphere
    used, // the 2^k sequences a k-bit message can select
};

/// Bit-level u sequences appended below the shaped labels, one row per level.
using UniformLevels = std::vector<std::vector<std::uint8_t>>;

struct PessFrame {
    BigInt message;
    UniformLevels uniform;
};

/// Enumerative shaper on the 2^s reduced amplitudes whose s-bit BRGC labels
/// become the top amplitude bit-levels of 2^m-ASK; u data bit-levels fill
/// the bottom of each (m-1)-bit BRGC label.
class PartialShaper {
public:
    // Sphere fixed by e_max; k = ⌊log2 |S|⌋ of the shaping trellis.
    static PartialShaper with_emax(int m, int s, int N, long long e_max, Precision precision = {});
    // Smallest e_max on the energy grid that carries k bits.
    static PartialShaper with_bits(int m, int s, int N, long k, Precision precision = {});

    const PessConfig& config() const noexcept { return config_; }
    const AskAlphabet& alphabet() const noexcept { return full_; }
    const std::vector<int>& reduced_amplitudes() const noexcept { return reduced_; }
    const EssTrellis& exact_trellis() const noexcept { return exact_; }
    const Trellis& shaping_trellis() const noexcept;

    std::vector<int> shape(const BigInt& message, const UniformLevels& uniform) const;
    PessFrame deshape(std::span<const int> amplitudes) const;

    // Amplitude of the full alphabet for a reduced symbol index and its u uniform bits (U_1 first).
    int splice(int reduced_index, std::uint32_t uniform_bits) const;
    // Inverse of splice: (reduced index, uniform bits).
    std::pair<int, std::uint32_t> split(int amplitude) const;

    AmplitudePmf induced_pmf(PmfBasis basis = PmfBasis::used) const;
    // Shaper-output (reduced alphabet) marginal.
    std::vector<double> shaper_pmf(PmfBasis basis = PmfBasis::used) const;

private:
    PartialShaper(PessConfig config, EssTrellis exact, std::optional<BoundedTrellis> bounded);

    PessConfig config_;
    AskAlphabet full_;
    std::vector<int> reduced_;
    AmplitudeLabeling shaped_labels_;
    AmplitudeLabeling full_labels_;
    EssTrellis exact_;
    std::optional<BoundedTrellis> bounded_;
};

} // namespace pas
