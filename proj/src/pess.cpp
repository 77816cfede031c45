#include "pas/pess.hpp"

#include <string>

#include "pas/error.hpp"

namespace pas {

namespace {

void check_shape(int m, int s, int N)
{
    if (m < 2 || m > 16)
        fail(ErrorKind::invalid_parameter, "P-ESS: m must lie in [2, 16]");
    if (s < 0 || s > m - 1)
        fail(ErrorKind::invalid_parameter, "P-ESS: shaped bits s must lie in [0, m-1]");
    if (N < 1)
        fail(ErrorKind::invalid_parameter, "P-ESS: block length must be positive");
}

std::vector<int> reduced_alphabet(int s)
{
    std::vector<int> amps;
    for (int i = 0; i < (1 << s); ++i)
        amps.push_back(2 * i + 1);
    return amps;
}

std::optional<BoundedTrellis> maybe_bounded(const EssTrellis& exact, const Precision& precision)
{
    if (!precision.bounded)
        return std::nullopt;
    return BoundedTrellis::build(exact.geometry(), precision.mantissa_bits, precision.exponent_bits);
}

} // namespace

PartialShaper::PartialShaper(PessConfig config, EssTrellis exact, std::optional<BoundedTrellis> bounded)
    : config_(std::move(config)),
      full_(build_alphabet(config_.m)),
      reduced_(reduced_alphabet(config_.s)),
      shaped_labels_(brgc_labels(config_.s)),
      full_labels_(brgc_labels(config_.m - 1)),
      exact_(std::move(exact)),
      bounded_(std::move(bounded))
{
}

PartialShaper PartialShaper::with_emax(int m, int s, int N, long long e_max, Precision precision)
{
    check_shape(m, s, N);
    const auto reduced = reduced_alphabet(s);
    auto exact = build_trellis(N, reduced, e_max);
    auto bounded = maybe_bounded(exact, precision);
    PessConfig cfg{m, s, m - 1 - s, N, 0, e_max, precision};
    cfg.k = bounded ? bounded->input_bits() : exact.input_bits();
    return PartialShaper(cfg, std::move(exact), std::move(bounded));
}

PartialShaper PartialShaper::with_bits(int m, int s, int N, long k, Precision precision)
{
    check_shape(m, s, N);
    const auto reduced = reduced_alphabet(s);
    long long e_max = find_emax(N, reduced, k);
    auto exact = build_trellis(N, reduced, e_max);
    auto bounded = maybe_bounded(exact, precision);
    // Rounded-down counts can lose the last bit; widen the sphere one grid step at a time.
    for (int tries = 0; bounded && bounded->input_bits() < k; ++tries) {
        if (tries > 64)
            fail(ErrorKind::precision_too_small, "bounded trellis cannot carry " + std::to_string(k) + " bits");
        e_max += exact.geometry().step;
        exact = build_trellis(N, reduced, e_max);
        bounded = maybe_bounded(exact, precision);
    }
    PessConfig cfg{m, s, m - 1 - s, N, k, e_max, precision};
    return PartialShaper(cfg, std::move(exact), std::move(bounded));
}

const Trellis& PartialShaper::shaping_trellis() const noexcept
{
    if (bounded_)
        return *bounded_;
    return exact_;
}

int PartialShaper::splice(int reduced_index, std::uint32_t uniform_bits) const
{
    const std::uint32_t label = (shaped_labels_.label(reduced_index) << config_.u) | uniform_bits;
    return full_labels_.amplitude_of_label(label);
}

std::pair<int, std::uint32_t> PartialShaper::split(int amplitude) const
{
    if (full_.index_of(amplitude) < 0)
        fail(ErrorKind::invalid_sequence, "amplitude " + std::to_string(amplitude) + " is not in the alphabet");
    const std::uint32_t label = full_labels_.label_of_amplitude(amplitude);
    const std::uint32_t mask = (1u << config_.u) - 1u;
    return {shaped_labels_.index(label >> config_.u), label & mask};
}

std::vector<int> PartialShaper::shape(const BigInt& message, const UniformLevels& uniform) const
{
    if (message < 0 || floor_log2(message) >= config_.k)
        fail(ErrorKind::invalid_index, "message does not fit in k=" + std::to_string(config_.k) + " bits");
    if (uniform.size() != static_cast<std::size_t>(config_.u))
        fail(ErrorKind::invalid_parameter, "expected " + std::to_string(config_.u) + " uniform bit-levels");
    for (const auto& level : uniform)
        if (level.size() != static_cast<std::size_t>(config_.N))
            fail(ErrorKind::invalid_parameter, "uniform bit-level length differs from N");
    const auto symbols = shape_symbols(message, shaping_trellis());
    std::vector<int> out(symbols.size());
    for (std::size_t n = 0; n < symbols.size(); ++n) {
        std::uint32_t bits = 0;
        for (int level = 0; level < config_.u; ++level)
            bits = (bits << 1) | (uniform[static_cast<std::size_t>(level)][n] & 1u);
        out[n] = splice(symbols[n], bits);
    }
    return out;
}

PessFrame PartialShaper::deshape(std::span<const int> amplitudes) const
{
    if (amplitudes.size() != static_cast<std::size_t>(config_.N))
        fail(ErrorKind::invalid_sequence, "sequence length differs from N");
    PessFrame frame;
    frame.uniform.assign(static_cast<std::size_t>(config_.u), std::vector<std::uint8_t>(amplitudes.size()));
    std::vector<int> symbols(amplitudes.size());
    for (std::size_t n = 0; n < amplitudes.size(); ++n) {
        const auto [index, bits] = split(amplitudes[n]);
        symbols[n] = index;
        for (int level = 0; level < config_.u; ++level)
            frame.uniform[static_cast<std::size_t>(level)][n] =
                static_cast<std::uint8_t>((bits >> (config_.u - 1 - level)) & 1u);
    }
    frame.message = deshape_symbols(symbols, shaping_trellis());
    if (floor_log2(frame.message) >= config_.k)
        fail(ErrorKind::invalid_sequence, "sequence index exceeds the 2^k message range");
    return frame;
}

std::vector<double> PartialShaper::shaper_pmf(PmfBasis basis) const
{
    if (basis == PmfBasis::all)
        return induced_stats(exact_).pmf;
    return used_stats(exact_, BigInt(1) << config_.k).pmf;
}

AmplitudePmf PartialShaper::induced_pmf(PmfBasis basis) const
{
    const auto reduced = shaper_pmf(basis);
    AmplitudePmf pmf;
    pmf.amplitudes = full_.amplitudes;
    pmf.probs.assign(full_.amplitudes.size(), 0.0);
    pmf.group_size = 1 << config_.u;
    const double spread = 1.0 / static_cast<double>(pmf.group_size);
    for (std::size_t i = 0; i < reduced.size(); ++i)
        for (std::uint32_t bits = 0; bits < static_cast<std::uint32_t>(pmf.group_size); ++bits)
            pmf.probs[static_cast<std::size_t>(full_.index_of(splice(static_cast<int>(i), bits)))] =
                reduced[i] * spread;
    return pmf;
}

} // namespace pas
