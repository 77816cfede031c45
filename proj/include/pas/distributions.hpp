#pragma once

#include <limits>
#include <span>
#include <vector>

#include "pas/bigint.hpp"

namespace pas {

/// Probability vector over an amplitude alphabet. `lambda` and `group_size`
/// record how a Maxwell-Boltzmann fit produced it (NaN / 1 otherwise).
struct AmplitudePmf {
    std::vector<int> amplitudes;
    std::vector<double> probs;
    double lambda = std::numeric_limits<double>::quiet_NaN();
    int group_size = 1;

    // Throws invalid-parameter unless probs is a PMF (sum within 1e-12) over amplitudes.
    void validate() const;
    double prob_of(int amplitude) const;
};

AmplitudePmf uniform_pmf(std::span<const int> amplitudes);

// P(e_i) ∝ exp(-λ e_i) over arbitrary energies. λ = +inf puts all mass
// (uniformly) on the minimum-energy entries.
std::vector<double> boltzmann_weights(double lambda, std::span<const double> energies);

AmplitudePmf mb_pmf(double lambda, std::span<const int> amplitudes);

// MB over consecutive groups of `group_size` amplitudes, each group carrying
// its mean energy; amplitudes inside a group are equiprobable.
AmplitudePmf partial_mb_pmf(double lambda, std::span<const int> amplitudes, int group_size);

// Bisection on λ. Both throw infeasible when the target lies outside the
// range spanned by λ ∈ [0, ∞).
double fit_entropy(double target_bits, std::span<const int> amplitudes, int group_size = 1);
double fit_energy(double target_energy, std::span<const int> amplitudes, int group_size = 1);

// Same searches over a raw energy list (ungrouped).
double fit_entropy_energies(double target_bits, std::span<const double> energies);

struct PmfStats {
    double entropy = 0.0;    // bits
    double avg_energy = 0.0; // E[A^2]
};

PmfStats pmf_stats(const AmplitudePmf& pmf);
double entropy_bits(std::span<const double> probs);

// Energy advantage in dB over uniform signaling at the same rate:
// 10 log10((2^(2(rate+1)) - 1) / (3 avg_energy)).
double shaping_gain_db(double rate, double avg_energy);

// H(A_MB) - shaping_rate where A_MB is the MB distribution on `amplitudes`
// with E[A^2] = induced_energy.
double rate_loss(double shaping_rate, double induced_energy, std::span<const int> amplitudes);

struct Composition {
    std::vector<long> counts;
    long N = 0;
};

struct CcdmAnalytics {
    long input_bits = 0;    // ⌊log2 (N! / Π #(a)!)⌋
    double rate = 0.0;      // input_bits / N
    double log2_size = 0.0; // log2 of the multinomial, unfloored
    double avg_energy = 0.0;
};

CcdmAnalytics ccdm_analytics(const Composition& comp, std::span<const int> amplitudes);
BigInt multinomial(const Composition& comp);

// Largest-remainder rounding of N·p, ties to the lower-energy amplitude.
Composition mb_composition(const AmplitudePmf& pmf, long N);

// Lowest-energy MB-quantized composition whose constant-composition code
// carries at least `input_bits` bits: the largest λ for which
// mb_composition(mb_pmf(λ), N) still reaches the bit budget.
Composition ccdm_composition(long N, long input_bits, std::span<const int> amplitudes);

} // namespace pas
