#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pas {

/// 2^m-ASK split into signs {-1,+1} and amplitudes {1,3,...,2^m-1}.
struct AskAlphabet {
    int m = 0;
    std::vector<int> amplitudes;

    int order() const noexcept { return 1 << m; }
    int amplitude_bits() const noexcept { return m - 1; }
    // Index of an amplitude in `amplitudes`, -1 when it is not in the alphabet.
    int index_of(int amplitude) const noexcept;
    // All 2^m points in increasing order.
    std::vector<int> points() const;
};

AskAlphabet build_alphabet(int m);

// Sign bit B_1: 0 -> +1, 1 -> -1.
constexpr int sign_of_bit(std::uint8_t bit) noexcept { return (bit & 1u) ? -1 : 1; }
constexpr std::uint8_t bit_of_sign(int sign) noexcept { return sign < 0 ? 1 : 0; }

/// Table between amplitude indices (0 for amplitude 1, 1 for amplitude 3, ...)
/// and `num_bits`-bit labels. Bit 0 of the label word is the least significant
/// amplitude bit-level; `bit(index, 0)` is the most significant one (B_2).
class AmplitudeLabeling {
public:
    AmplitudeLabeling() = default;
    AmplitudeLabeling(int num_bits, std::vector<std::uint32_t> label_of_index);

    int num_bits() const noexcept { return num_bits_; }
    int size() const noexcept { return static_cast<int>(label_of_index_.size()); }

    std::uint32_t label(int amplitude_index) const { return label_of_index_.at(amplitude_index); }
    int index(std::uint32_t label) const { return index_of_label_.at(label); }
    // Bit-level `level` (0 = most significant) of the label of `amplitude_index`.
    std::uint8_t bit(int amplitude_index, int level) const
    {
        return static_cast<std::uint8_t>((label(amplitude_index) >> (num_bits_ - 1 - level)) & 1u);
    }

    // Convenience for odd amplitudes 2i+1.
    std::uint32_t label_of_amplitude(int amplitude) const { return label((amplitude - 1) / 2); }
    int amplitude_of_label(std::uint32_t label) const { return 2 * index(label) + 1; }

private:
    int num_bits_ = 0;
    std::vector<std::uint32_t> label_of_index_;
    std::vector<int> index_of_label_;
};

AmplitudeLabeling brgc_labels(int num_bits);

struct EnergySet {
    std::vector<long long> energies;
};

// {1, 9, 25, ...}: energies of the first `count` odd amplitudes.
EnergySet ask_energy_set(int count);

// level 0 -> base; level 1 -> averaged energies of consecutive amplitude pairs
// of the alphabet twice as large, i.e. 4e+1 for every e in base.
EnergySet pair_energy_set(const EnergySet& base, int level);

} // namespace pas
