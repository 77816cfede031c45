#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pas/link.hpp"

namespace pas {

struct StopRule {
    long min_errors = 100;
    long max_frames = 1'000'000;
};

struct FerResult {
    double snr_db = 0.0;
    long frames = 0;
    long frame_errors = 0;
    long bit_errors = 0;
    long deshape_failures = 0;
    double fer = 0.0;
    double ci_low = 0.0;  // 95% normal approximation, clamped to [0, 1]
    double ci_high = 0.0;
};

struct SimulationOptions {
    std::uint64_t seed = 1;
    int threads = 0; // 0: hardware concurrency
    int max_iterations = 50;
    long batch = 256;
};

// Generator for frame `index`: the data bits and the noise of a frame depend
// only on (seed, index), so results do not depend on the thread count and
// the same frames are reused at every SNR.
std::mt19937_64 frame_rng(std::uint64_t seed, std::uint64_t index);

std::vector<std::uint8_t> random_bits(std::size_t count, std::mt19937_64& rng);

// Frames are evaluated in index order until the one producing the
// min_errors-th error, or until max_frames.
FerResult simulate_point(const PasLink& link, double snr_db, const StopRule& stop, const SimulationOptions& options);
std::vector<FerResult> simulate(const PasLink& link, std::span<const double> snrs, const StopRule& stop,
                                const SimulationOptions& options);

void finalize_interval(FerResult& result);

void write_fer_csv(std::ostream& out, std::span<const FerResult> results, const std::string& config_id,
                   bool header = true);

} // namespace pas
