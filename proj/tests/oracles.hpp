#pragma once

// Independent reference computations used by the test suites. None of these
// call into the library's counting, ranking or integration code.

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace oracle {

// All sequences over `amps` (in the given order) of length n with
// Σ a² ≤ e_max, in lexicographic order of symbol indices.
inline std::vector<std::vector<int>> sphere(int n, const std::vector<int>& amps, long long e_max)
{
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(n), 0);
    // Odometer over indices; the last position varies fastest.
    const auto energy = [&] {
        long long e = 0;
        for (const int i : cur)
            e += static_cast<long long>(amps[static_cast<std::size_t>(i)]) * amps[static_cast<std::size_t>(i)];
        return e;
    };
    for (;;) {
        if (energy() <= e_max) {
            std::vector<int> seq;
            for (const int i : cur)
                seq.push_back(amps[static_cast<std::size_t>(i)]);
            out.push_back(seq);
        }
        int pos = n - 1;
        while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == static_cast<int>(amps.size()) - 1)
            cur[static_cast<std::size_t>(pos--)] = 0;
        if (pos < 0)
            break;
        ++cur[static_cast<std::size_t>(pos)];
    }
    return out;
}

inline long long energy_of(const std::vector<int>& seq)
{
    long long e = 0;
    for (const int a : seq)
        e += static_cast<long long>(a) * a;
    return e;
}

inline std::vector<std::vector<int>> all_sequences(int n, const std::vector<int>& amps)
{
    return sphere(n, amps, std::numeric_limits<long long>::max() / 4);
}

// Per-position-averaged amplitude frequencies over a list of sequences.
inline std::map<int, double> marginal(const std::vector<std::vector<int>>& seqs, std::size_t count)
{
    std::map<int, double> f;
    double total = 0;
    for (std::size_t i = 0; i < count; ++i)
        for (const int a : seqs[i]) {
            f[a] += 1;
            total += 1;
        }
    for (auto& [a, v] : f)
        v /= total;
    return f;
}

inline double entropy(const std::vector<double>& p)
{
    double h = 0;
    for (const double x : p)
        if (x > 0)
            h -= x * std::log2(x);
    return h;
}

// Direct evaluation of P(a) ∝ exp(-λ a²).
inline std::vector<double> mb(double lambda, const std::vector<int>& amps)
{
    std::vector<double> p;
    double z = 0;
    for (const int a : amps) {
        p.push_back(std::exp(-lambda * a * a));
        z += p.back();
    }
    for (auto& x : p)
        x /= z;
    return p;
}

inline std::uint32_t gray(std::uint32_t i) { return i ^ (i >> 1); }

// Monte Carlo estimate of H(X) - Σ_i H(B_i|Y) for signed 2^m-ASK with
// P_X(±a) = p(a)/2, BRGC amplitude labels and the sign as first bit.
inline double bmd_monte_carlo(const std::vector<double>& amp_pmf, double snr_db, long samples, std::uint64_t seed)
{
    const int M = static_cast<int>(amp_pmf.size());
    int amp_bits = 0;
    while ((1 << amp_bits) < M)
        ++amp_bits;
    std::vector<double> x, p;
    std::vector<std::uint32_t> label;
    double power = 0;
    for (int i = 0; i < M; ++i) {
        const double a = 2.0 * i + 1.0;
        power += amp_pmf[static_cast<std::size_t>(i)] * a * a;
        for (int s = 0; s < 2; ++s) {
            x.push_back(s ? -a : a);
            p.push_back(amp_pmf[static_cast<std::size_t>(i)] / 2);
            label.push_back((static_cast<std::uint32_t>(s) << amp_bits) | gray(static_cast<std::uint32_t>(i)));
        }
    }
    const double sigma2 = power / std::pow(10.0, snr_db / 10.0);
    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> pick(p.begin(), p.end());
    std::normal_distribution<double> noise(0.0, std::sqrt(sigma2));
    const int bits = amp_bits + 1;
    double hx = entropy(p);
    double loss = 0;
    std::vector<double> q(x.size());
    for (long t = 0; t < samples; ++t) {
        const int k = pick(rng);
        const double y = x[static_cast<std::size_t>(k)] + noise(rng);
        double total = 0;
        double dmin = 1e300;
        for (std::size_t j = 0; j < x.size(); ++j)
            dmin = std::min(dmin, (y - x[j]) * (y - x[j]));
        for (std::size_t j = 0; j < x.size(); ++j) {
            q[j] = p[j] * std::exp(-((y - x[j]) * (y - x[j]) - dmin) / (2 * sigma2));
            total += q[j];
        }
        for (int b = 0; b < bits; ++b) {
            double same = 0;
            for (std::size_t j = 0; j < x.size(); ++j)
                if (((label[j] >> b) & 1u) == ((label[static_cast<std::size_t>(k)] >> b) & 1u))
                    same += q[j];
            loss -= std::log2(same / total);
        }
    }
    return hx - loss / static_cast<double>(samples);
}

} // namespace oracle
