#pragma once

#include <span>
#include <vector>

#include "pas/constellation.hpp"
#include "pas/distributions.hpp"

namespace pas {

// ½ log2(1 + SNR) in bits per real dimension.
double awgn_capacity(double snr_db);

// 10 log10(2^(2 rate) - 1): the SNR at which capacity equals `rate`.
double capacity_snr_db(double rate);

struct ChannelSpec {
    double snr_db = 0.0;
    double noise_variance = 1.0;
};

// SNR = E[X^2] / σ².
ChannelSpec channel_for_snr(double snr_db, double input_power);

/// Signed 2^m-ASK input with P_X(±a) = P_A(a)/2. The sign is bit-level B_1,
/// the amplitude label supplies B_2..B_m.
struct InputSpec {
    AmplitudePmf pmf;
    AmplitudeLabeling labeling;

    int m() const noexcept { return labeling.num_bits() + 1; }
    double power() const;
    double entropy() const; // H(X) = H(A) + 1
};

// Checks the PMF covers 1, 3, ..., 2^m - 1 and attaches the BRGC labeling.
InputSpec make_input(AmplitudePmf pmf);

struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights; // for the weight function e^(-t^2)
};

const GaussHermite& gauss_hermite(int order = 128);

// [H(X) - Σ_i H(B_i | Y)]^+ by Gauss-Hermite quadrature over each Y | X = x.
double bmd_rate(const InputSpec& input, double snr_db);

// Bisection on SNR for bmd_rate = target within 1e-6 bit. Throws infeasible
// when the target is not below H(X).
double snr_for_rate(const InputSpec& input, double target_rate);

struct GapPoint {
    double entropy = 0.0;   // H(X)
    double lambda = 0.0;
    double snr_db = 0.0;    // +inf when R_t is unreachable
    double delta_snr_db = 0.0;
};

// ΔSNR of partial MB inputs with s shaped amplitude bit-levels (group size
// 2^(m-1-s)) at BMD rate R_t, for every H(X) in `entropies`.
std::vector<GapPoint> gap_sweep(int m, int shaped_bits, double target_rate, std::span<const double> entropies);

// from, from+step, ..., to (inclusive, up to rounding).
std::vector<double> entropy_grid(double from, double to, double step);

} // namespace pas
