#pragma once

#include <vector>

namespace pas {

/// One point of a finite-length rate-loss curve. `rate` is the exact
/// log2(code size)/N plus the u uniform levels, `energy` the per-symbol
/// E[A^2] on the full 2^m-ASK alphabet.
struct RateLossPoint {
    int N = 0;
    long input_bits = 0; // k fed to the shaper
    double rate = 0.0;
    double energy = 0.0;
    double loss = 0.0;
};

// Sphere shaper with s shaped bit-levels at overall amplitude rate
// `target_rate` (u = m-1-s levels stay uniform, the shaper carries
// ⌈(target_rate - u) N⌉ bits).
RateLossPoint sphere_rate_loss(int m, int s, int N, double target_rate);

// Constant-composition matcher on the full amplitude alphabet with the
// composition chosen by ccdm_composition.
RateLossPoint ccdm_rate_loss(int m, int N, double target_rate);

// N -> infinity limit: the partial-MB distribution at `target_rate` entropy
// against the MB distribution of equal energy.
double asymptotic_rate_loss(int m, int s, double target_rate);

} // namespace pas
