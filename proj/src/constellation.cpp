#include "pas/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pas/error.hpp"

namespace pas {

int AskAlphabet::index_of(int amplitude) const noexcept
{
    if (amplitude < 1 || (amplitude & 1) == 0)
        return -1;
    const int i = (amplitude - 1) / 2;
    return i < static_cast<int>(amplitudes.size()) ? i : -1;
}

std::vector<int> AskAlphabet::points() const
{
    std::vector<int> out;
    out.reserve(amplitudes.size() * 2);
    for (auto it = amplitudes.rbegin(); it != amplitudes.rend(); ++it)
        out.push_back(-*it);
    out.insert(out.end(), amplitudes.begin(), amplitudes.end());
    return out;
}

AskAlphabet build_alphabet(int m)
{
    if (m < 2 || m > 16)
        fail(ErrorKind::invalid_parameter, "build_alphabet: m must lie in [2, 16], got " + std::to_string(m));
    AskAlphabet alphabet;
    alphabet.m = m;
    const int count = 1 << (m - 1);
    alphabet.amplitudes.reserve(count);
    for (int i = 0; i < count; ++i)
        alphabet.amplitudes.push_back(2 * i + 1);
    return alphabet;
}

AmplitudeLabeling::AmplitudeLabeling(int num_bits, std::vector<std::uint32_t> label_of_index)
    : num_bits_(num_bits), label_of_index_(std::move(label_of_index))
{
    const std::size_t size = std::size_t{1} << num_bits;
    if (num_bits < 0 || num_bits > 20 || label_of_index_.size() != size)
        fail(ErrorKind::invalid_parameter, "AmplitudeLabeling: table must have 2^num_bits entries");
    index_of_label_.assign(size, -1);
    for (std::size_t i = 0; i < size; ++i) {
        const auto l = label_of_index_[i];
        if (l >= size || index_of_label_[l] != -1)
            fail(ErrorKind::invalid_parameter, "AmplitudeLabeling: table is not a bijection");
        index_of_label_[l] = static_cast<int>(i);
    }
}

AmplitudeLabeling brgc_labels(int num_bits)
{
    if (num_bits < 0 || num_bits > 20)
        fail(ErrorKind::invalid_parameter, "brgc_labels: num_bits out of range");
    const std::uint32_t size = 1u << num_bits;
    std::vector<std::uint32_t> table(size);
    for (std::uint32_t i = 0; i < size; ++i)
        table[i] = i ^ (i >> 1);
    return AmplitudeLabeling(num_bits, std::move(table));
}

EnergySet ask_energy_set(int count)
{
    EnergySet set;
    for (long long i = 1; i <= count; ++i)
        set.energies.push_back((2 * i - 1) * (2 * i - 1));
    return set;
}

EnergySet pair_energy_set(const EnergySet& base, int level)
{
    if (level == 0)
        return base;
    if (level != 1)
        fail(ErrorKind::invalid_parameter, "pair_energy_set: only levels 0 and 1 are supported");
    EnergySet out;
    out.energies.reserve(base.energies.size());
    for (const auto e : base.energies) {
        // Amplitude a of the smaller alphabet covers the pair {2a-1, 2a+1}.
        const auto a = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(e))));
        if (a * a != e || (a & 1) == 0)
            fail(ErrorKind::invalid_parameter, "pair_energy_set: base is not a plain ASK energy set");
        const long long lo = 2 * a - 1;
        const long long hi = 2 * a + 1;
        out.energies.push_back((lo * lo + hi * hi) / 2);
    }
    if (!std::is_sorted(out.energies.begin(), out.energies.end()))
        fail(ErrorKind::invalid_parameter, "pair_energy_set: base must be increasing");
    return out;
}

} // namespace pas
