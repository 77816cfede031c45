#include "pas/trellis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pas/error.hpp"

namespace pas {

namespace {

constexpr std::size_t kMaxNodes = std::size_t{1} << 26;

const BigInt& zero()
{
    static const BigInt z = 0;
    return z;
}

struct EnergyGrid {
    long long e_min = 0;
    long long step = 1;
    std::vector<int> offsets;
};

EnergyGrid energy_grid(std::span<const long long> energies)
{
    if (energies.empty())
        fail(ErrorKind::invalid_parameter, "trellis alphabet is empty");
    for (std::size_t i = 0; i < energies.size(); ++i) {
        if (energies[i] < 0 || (i > 0 && energies[i] <= energies[i - 1]))
            fail(ErrorKind::invalid_parameter, "symbol energies must be nonnegative and strictly increasing");
    }
    EnergyGrid g;
    g.e_min = energies.front();
    long long step = 0;
    for (const auto e : energies)
        step = std::gcd(step, e - g.e_min);
    g.step = step == 0 ? 1 : step;
    for (const auto e : energies)
        g.offsets.push_back(static_cast<int>((e - g.e_min) / g.step));
    return g;
}

std::vector<long long> squares(std::span<const int> amplitudes)
{
    std::vector<long long> e;
    for (const int a : amplitudes) {
        if (a <= 0)
            fail(ErrorKind::invalid_parameter, "amplitudes must be positive");
        e.push_back(static_cast<long long>(a) * a);
    }
    return e;
}

std::size_t node_count(const TrellisGeometry& g)
{
    return static_cast<std::size_t>(g.length + 1) * static_cast<std::size_t>(g.levels);
}

} // namespace

TrellisGeometry make_geometry(int length, std::vector<long long> energies, std::vector<int> amplitudes,
                              long long e_max)
{
    if (length < 1)
        fail(ErrorKind::invalid_parameter, "trellis length must be positive");
    const auto grid = energy_grid(energies);
    if (!amplitudes.empty() && amplitudes.size() != energies.size())
        fail(ErrorKind::invalid_parameter, "amplitude and energy lists differ in size");
    const long long floor_energy = static_cast<long long>(length) * grid.e_min;
    if (e_max < floor_energy)
        fail(ErrorKind::infeasible, "e_max " + std::to_string(e_max) + " is below the minimum sequence energy " +
                                        std::to_string(floor_energy));
    TrellisGeometry g;
    g.length = length;
    g.energies = std::move(energies);
    g.amplitudes = std::move(amplitudes);
    g.e_max = e_max;
    g.e_min = grid.e_min;
    g.step = grid.step;
    g.offsets = grid.offsets;
    const long long levels = (e_max - floor_energy) / grid.step + 1;
    if (levels > static_cast<long long>(kMaxNodes) ||
        static_cast<std::size_t>(levels) * static_cast<std::size_t>(length + 1) > kMaxNodes)
        fail(ErrorKind::invalid_parameter, "trellis too large: " + std::to_string(levels) + " levels x " +
                                               std::to_string(length + 1) + " columns");
    g.levels = static_cast<int>(levels);
    return g;
}

Trellis::Trellis(TrellisGeometry geom, std::vector<BigInt> counts)
    : geom_(std::move(geom)), counts_(std::move(counts))
{
    if (counts_.size() != node_count(geom_))
        fail(ErrorKind::invalid_parameter, "trellis payload size does not match its geometry");
}

const BigInt& Trellis::child(int column, int level, int symbol) const
{
    const int next = level + geom_.offsets[static_cast<std::size_t>(symbol)];
    if (column >= geom_.length || next >= geom_.levels)
        return zero();
    return count(column + 1, next);
}

std::vector<long long> Trellis::final_energies() const
{
    std::vector<long long> out;
    out.reserve(static_cast<std::size_t>(geom_.levels));
    for (int j = 0; j < geom_.levels; ++j)
        out.push_back(geom_.level_energy(geom_.length, j));
    return out;
}

EssTrellis EssTrellis::build(TrellisGeometry geom)
{
    const int N = geom.length;
    const int L = geom.levels;
    std::vector<BigInt> counts(node_count(geom));
    for (int j = 0; j < L; ++j)
        counts[static_cast<std::size_t>(N) * L + j] = 1;
    for (int n = N - 1; n >= 0; --n) {
        const std::size_t row = static_cast<std::size_t>(n) * L;
        const std::size_t next = row + static_cast<std::size_t>(L);
        for (int j = 0; j < L; ++j) {
            BigInt& t = counts[row + j];
            for (const int d : geom.offsets) {
                if (j + d >= L)
                    break;
                t += counts[next + j + d];
            }
        }
    }
    return EssTrellis(std::move(geom), std::move(counts));
}

EssTrellis EssTrellis::from_counts(TrellisGeometry geom, std::vector<BigInt> counts)
{
    EssTrellis t(std::move(geom), std::move(counts));
    for (int j = 0; j < t.num_levels(); ++j)
        if (t.count(t.length(), j) != 1)
            fail(ErrorKind::invalid_parameter, "trellis import: last column must be all ones");
    return t;
}

EssTrellis build_trellis(int length, std::span<const int> amplitudes, long long e_max)
{
    return EssTrellis::build(
        make_geometry(length, squares(amplitudes), std::vector<int>(amplitudes.begin(), amplitudes.end()), e_max));
}

EssTrellis build_trellis_from_energies(int length, std::span<const long long> energies, long long e_max)
{
    return EssTrellis::build(
        make_geometry(length, std::vector<long long>(energies.begin(), energies.end()), {}, e_max));
}

BoundedTrellis BoundedTrellis::build(TrellisGeometry geom, int mantissa_bits, int exponent_bits)
{
    if (mantissa_bits < 2 || mantissa_bits > 63)
        fail(ErrorKind::invalid_parameter, "mantissa bits must lie in [2, 63]");
    if (exponent_bits < 1 || exponent_bits > 31)
        fail(ErrorKind::invalid_parameter, "exponent bits must lie in [1, 31]");
    const int N = geom.length;
    const int L = geom.levels;
    const long max_exponent = (1L << exponent_bits) - 1;

    BoundedTrellis t;
    t.mantissa_bits_ = mantissa_bits;
    t.exponent_bits_ = exponent_bits;
    t.counts_.resize(node_count(geom));
    t.mantissas_.resize(node_count(geom));
    t.exponents_.resize(node_count(geom));
    for (int j = 0; j < L; ++j) {
        const std::size_t at = static_cast<std::size_t>(N) * L + j;
        t.counts_[at] = 1;
        t.mantissas_[at] = 1;
    }
    BigInt sum;
    for (int n = N - 1; n >= 0; --n) {
        const std::size_t row = static_cast<std::size_t>(n) * L;
        const std::size_t next = row + static_cast<std::size_t>(L);
        for (int j = 0; j < L; ++j) {
            sum = 0;
            for (const int d : geom.offsets) {
                if (j + d >= L)
                    break;
                sum += t.counts_[next + j + d];
            }
            const long bits = floor_log2(sum) + 1;
            const long exponent = bits > mantissa_bits ? bits - mantissa_bits : 0;
            if (exponent > max_exponent)
                fail(ErrorKind::precision_too_small,
                     "exponent " + std::to_string(exponent) + " does not fit in " + std::to_string(exponent_bits) +
                         " bits");
            const BigInt mantissa = sum >> exponent;
            t.mantissas_[row + j] = mantissa.convert_to<std::uint64_t>();
            t.exponents_[row + j] = static_cast<std::uint32_t>(exponent);
            t.counts_[row + j] = mantissa << exponent;
        }
    }
    t.geom_ = std::move(geom);
    return t;
}

BoundedTrellis BoundedTrellis::from_parts(TrellisGeometry geom, int mantissa_bits, int exponent_bits,
                                          std::vector<std::uint64_t> mantissas, std::vector<std::uint32_t> exponents)
{
    const std::size_t nodes = node_count(geom);
    if (mantissas.size() != nodes || exponents.size() != nodes)
        fail(ErrorKind::invalid_parameter, "bounded trellis payload size does not match its geometry");
    if (mantissa_bits < 2 || mantissa_bits > 63 || exponent_bits < 1 || exponent_bits > 31)
        fail(ErrorKind::invalid_parameter, "bounded trellis precision out of range");
    BoundedTrellis t;
    t.mantissa_bits_ = mantissa_bits;
    t.exponent_bits_ = exponent_bits;
    t.counts_.resize(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        if ((mantissas[i] >> mantissa_bits) != 0 || (exponents[i] >> exponent_bits) != 0)
            fail(ErrorKind::invalid_parameter, "bounded trellis import: field exceeds its bit width");
        t.counts_[i] = BigInt(mantissas[i]) << exponents[i];
    }
    t.mantissas_ = std::move(mantissas);
    t.exponents_ = std::move(exponents);
    t.geom_ = std::move(geom);
    return t;
}

BoundedTrellis build_bounded_trellis(int length, std::span<const int> amplitudes, long long e_max,
                                     int mantissa_bits, int exponent_bits)
{
    return BoundedTrellis::build(
        make_geometry(length, squares(amplitudes), std::vector<int>(amplitudes.begin(), amplitudes.end()), e_max),
        mantissa_bits, exponent_bits);
}

std::vector<int> shape_symbols(const BigInt& index, const Trellis& trellis)
{
    if (index < 0 || index >= trellis.sphere_size())
        fail(ErrorKind::invalid_index, "index 0x" + to_hex(index) + " is outside the sphere of size 0x" +
                                           to_hex(trellis.sphere_size()));
    const auto& g = trellis.geometry();
    std::vector<int> out(static_cast<std::size_t>(g.length));
    BigInt rest = index;
    int level = 0;
    for (int n = 0; n < g.length; ++n) {
        int chosen = -1;
        for (int a = 0; a < g.symbols(); ++a) {
            const BigInt& c = trellis.child(n, level, a);
            if (rest < c) {
                chosen = a;
                break;
            }
            rest -= c;
        }
        if (chosen < 0)
            fail(ErrorKind::numerical_error, "trellis counts are inconsistent at column " + std::to_string(n));
        out[static_cast<std::size_t>(n)] = chosen;
        level += g.offsets[static_cast<std::size_t>(chosen)];
    }
    return out;
}

BigInt deshape_symbols(std::span<const int> symbols, const Trellis& trellis)
{
    const auto& g = trellis.geometry();
    if (symbols.size() != static_cast<std::size_t>(g.length))
        fail(ErrorKind::invalid_sequence, "sequence length " + std::to_string(symbols.size()) + " differs from N=" +
                                              std::to_string(g.length));
    std::vector<int> path(static_cast<std::size_t>(g.length) + 1, 0);
    for (int n = 0; n < g.length; ++n) {
        const int a = symbols[static_cast<std::size_t>(n)];
        if (a < 0 || a >= g.symbols())
            fail(ErrorKind::invalid_sequence, "symbol outside the alphabet at position " + std::to_string(n));
        path[n + 1] = path[n] + g.offsets[static_cast<std::size_t>(a)];
        if (path[n + 1] >= g.levels)
            fail(ErrorKind::invalid_sequence, "sequence energy exceeds e_max=" + std::to_string(g.e_max));
    }
    // Walk backwards so the offset inside every visited node can be checked;
    // with rounded-down counts some in-sphere sequences have no index.
    BigInt offset = 0;
    for (int n = g.length - 1; n >= 0; --n) {
        for (int a = 0; a < symbols[static_cast<std::size_t>(n)]; ++a)
            offset += trellis.child(n, path[n], a);
        if (offset >= trellis.count(n, path[n]))
            fail(ErrorKind::invalid_sequence, "sequence is not indexable by this trellis");
    }
    return offset;
}

std::vector<int> shape(const BigInt& index, const Trellis& trellis)
{
    const auto& amps = trellis.amplitudes();
    if (amps.empty())
        fail(ErrorKind::invalid_parameter, "trellis carries no amplitude alphabet");
    auto seq = shape_symbols(index, trellis);
    for (auto& s : seq)
        s = amps[static_cast<std::size_t>(s)];
    return seq;
}

BigInt deshape(std::span<const int> amplitudes, const Trellis& trellis)
{
    const auto& amps = trellis.amplitudes();
    if (amps.empty())
        fail(ErrorKind::invalid_parameter, "trellis carries no amplitude alphabet");
    std::vector<int> symbols;
    symbols.reserve(amplitudes.size());
    for (const int a : amplitudes) {
        const auto it = std::find(amps.begin(), amps.end(), a);
        if (it == amps.end())
            fail(ErrorKind::invalid_sequence, "amplitude " + std::to_string(a) + " is not in the alphabet");
        symbols.push_back(static_cast<int>(it - amps.begin()));
    }
    return deshape_symbols(symbols, trellis);
}

EnergyHistogram energy_histogram(int length, std::span<const long long> energies, long long max_energy)
{
    if (length < 0)
        fail(ErrorKind::invalid_parameter, "energy_histogram: negative length");
    const auto grid = energy_grid(energies);
    EnergyHistogram h;
    h.base = static_cast<long long>(length) * grid.e_min;
    h.step = grid.step;
    if (max_energy < h.base)
        return h;
    const long long top = (max_energy - h.base) / grid.step;
    if (top >= static_cast<long long>(kMaxNodes))
        fail(ErrorKind::invalid_parameter, "energy_histogram: energy range too large");
    const auto J = static_cast<std::size_t>(top) + 1;
    std::vector<BigInt> cur(J), nxt(J);
    cur[0] = 1;
    for (int n = 0; n < length; ++n) {
        for (auto& x : nxt)
            x = 0;
        for (std::size_t j = 0; j < J; ++j) {
            if (cur[j] == 0)
                continue;
            for (const int d : grid.offsets) {
                if (j + static_cast<std::size_t>(d) >= J)
                    break;
                nxt[j + static_cast<std::size_t>(d)] += cur[j];
            }
        }
        std::swap(cur, nxt);
    }
    h.counts = std::move(cur);
    return h;
}

long long find_emax(int length, std::span<const int> amplitudes, long input_bits)
{
    if (length < 1 || input_bits < 0)
        fail(ErrorKind::invalid_parameter, "find_emax: need N >= 1 and k >= 0");
    const auto energies = squares(amplitudes);
    const auto grid = energy_grid(energies);
    BigInt all = 1;
    for (int n = 0; n < length; ++n)
        all *= static_cast<unsigned>(energies.size());
    if (floor_log2(all) < input_bits)
        fail(ErrorKind::infeasible, "find_emax: " + std::to_string(input_bits) + " bits exceed N log2|A| for N=" +
                                        std::to_string(length));
    const long long base = static_cast<long long>(length) * grid.e_min;
    const long long top = static_cast<long long>(length) * grid.offsets.back();
    long long span = std::max<long long>(64, length);
    for (;;) {
        span = std::min(span, top);
        const auto h = energy_histogram(length, energies, base + span * grid.step);
        BigInt cumulative = 0;
        for (std::size_t j = 0; j < h.counts.size(); ++j) {
            cumulative += h.counts[j];
            if (floor_log2(cumulative) >= input_bits)
                return base + static_cast<long long>(j) * grid.step;
        }
        if (span == top)
            fail(ErrorKind::numerical_error, "find_emax: cumulative count never reached the target");
        span *= 2;
    }
}

InducedStats induced_stats(const EssTrellis& trellis)
{
    const auto& g = trellis.geometry();
    const int N = g.length;
    const int L = g.levels;
    const int A = g.symbols();
    std::vector<BigInt> fwd(static_cast<std::size_t>(L)), nxt(static_cast<std::size_t>(L));
    fwd[0] = 1;
    std::vector<BigInt> occurrences(static_cast<std::size_t>(A));
    for (int n = 0; n < N; ++n) {
        for (auto& x : nxt)
            x = 0;
        for (int j = 0; j < L; ++j) {
            if (fwd[j] == 0)
                continue;
            for (int a = 0; a < A; ++a) {
                const int to = j + g.offsets[a];
                if (to >= L)
                    break;
                occurrences[a] += fwd[j] * trellis.count(n + 1, to);
                nxt[to] += fwd[j];
            }
        }
        std::swap(fwd, nxt);
    }
    InducedStats s;
    s.sequences = trellis.sphere_size();
    BigInt total = 0;
    BigInt energy_sum = 0;
    for (int j = 0; j < L; ++j) {
        if (fwd[j] == 0)
            continue;
        const long long e = g.level_energy(N, j);
        s.histogram.emplace(e, fwd[j]);
        total += fwd[j];
        energy_sum += fwd[j] * e;
    }
    if (total != s.sequences)
        fail(ErrorKind::numerical_error, "induced_stats: forward and backward counts disagree");
    const BigInt denom = s.sequences * N;
    s.avg_energy = ratio(energy_sum, denom);
    for (int a = 0; a < A; ++a)
        s.pmf.push_back(ratio(occurrences[a], denom));
    return s;
}

InducedStats used_stats(const EssTrellis& trellis, const BigInt& count)
{
    if (count <= 0 || count > trellis.sphere_size())
        fail(ErrorKind::invalid_parameter, "used_stats: count must lie in [1, |S|]");
    const auto& g = trellis.geometry();
    const int N = g.length;
    const int A = g.symbols();
    std::vector<BigInt> occ(static_cast<std::size_t>(A));
    std::vector<long> prefix(static_cast<std::size_t>(A), 0);

    // Total occurrences of every symbol in all completions of node (n, level):
    // the completion set is permutation invariant, so each of the N-n positions
    // contributes the count of completions starting with that symbol.
    const auto add_subtree = [&](int n, int level, const BigInt& weight) {
        for (int b = 0; b < A; ++b) {
            occ[b] += weight * prefix[b];
            if (n < N)
                occ[b] += trellis.child(n, level, b) * (N - n);
        }
    };

    BigInt remaining = count;
    int level = 0;
    for (int n = 0; n <= N && remaining > 0; ++n) {
        const BigInt& here = trellis.count(n, level);
        if (remaining == here) {
            add_subtree(n, level, here);
            break;
        }
        int next = -1;
        for (int a = 0; a < A; ++a) {
            const BigInt& c = trellis.child(n, level, a);
            if (remaining >= c) {
                if (c == 0)
                    continue;
                ++prefix[a];
                add_subtree(n + 1, level + g.offsets[a], c);
                --prefix[a];
                remaining -= c;
            } else {
                next = a;
                break;
            }
        }
        if (next < 0)
            break;
        ++prefix[next];
        level += g.offsets[next];
    }

    InducedStats s;
    s.sequences = count;
    const BigInt denom = count * N;
    for (int a = 0; a < A; ++a) {
        s.pmf.push_back(ratio(occ[a], denom));
        s.avg_energy += s.pmf.back() * static_cast<double>(g.energies[a]);
    }
    return s;
}

SphereSummary sphere_summary(int length, std::span<const int> amplitudes, long long e_max)
{
    const auto energies = squares(amplitudes);
    const auto geom = make_geometry(length, energies, {}, e_max);
    const auto h = energy_histogram(length - 1, energies, e_max - geom.e_min);
    // Position-wise marginals are identical; count sequences by their last symbol.
    std::vector<BigInt> prefix_sum(h.counts.size() + 1);
    for (std::size_t j = 0; j < h.counts.size(); ++j)
        prefix_sum[j + 1] = prefix_sum[j] + h.counts[j];
    SphereSummary s;
    std::vector<BigInt> by_symbol;
    for (const int d : geom.offsets) {
        const long long last = static_cast<long long>(geom.levels) - 1 - d;
        const auto upto = last < 0 ? 0 : std::min<std::size_t>(static_cast<std::size_t>(last) + 1, h.counts.size());
        by_symbol.push_back(prefix_sum[upto]);
        s.size += by_symbol.back();
    }
    for (std::size_t a = 0; a < by_symbol.size(); ++a) {
        s.pmf.push_back(ratio(by_symbol[a], s.size));
        s.avg_energy += s.pmf.back() * static_cast<double>(energies[a]);
    }
    return s;
}

ComplexityReport complexity_report(long levels, long length, int mantissa_bits, int exponent_bits,
                                   int alphabet_size, double shaping_rate)
{
    if (levels <= 0 || length <= 0 || mantissa_bits <= 0 || exponent_bits <= 0 || alphabet_size <= 0 ||
        !(shaping_rate > 0.0))
        fail(ErrorKind::invalid_parameter, "complexity_report: parameters must be positive");
    const auto index_bits = static_cast<long long>(std::ceil(static_cast<double>(length) * shaping_rate - 1e-9));
    const long long nodes = static_cast<long long>(levels) * (length + 1);
    const long long word = mantissa_bits + exponent_bits;
    ComplexityReport r;
    r.exact_storage_bits = nodes * index_bits;
    r.bounded_storage_bits = nodes * word;
    r.exact_ops_per_dim = static_cast<long long>(alphabet_size - 1) * index_bits;
    r.bounded_ops_per_dim = static_cast<long long>(alphabet_size - 1) * word;
    return r;
}

} // namespace pas
