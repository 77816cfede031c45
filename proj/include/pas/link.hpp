#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "pas/ldpc.hpp"
#include "pas/pess.hpp"

namespace pas {

struct LinkSpec {
    int m = 4;
    int s = 3;
    CodeRate rate{5, 6};
    long k = -1;          // shaper input bits; when < 0, e_max is used
    long long e_max = -1;
    Precision precision;
};

struct ReceiveResult {
    std::vector<std::uint8_t> data;
    bool decoder_converged = false;
    bool deshape_ok = false;
    int iterations = 0;
};

/// Shaper + systematic QC-LDPC + sign assignment over 2^m-ASK.
///
/// Data frame: [k message bits, MSB first][u·N uniform bits, level-major][γN extra bits].
/// Encoder input: amplitude labels B_2..B_m symbol by symbol, then the γN
/// extra bits. Symbol j takes its sign from codeword bit (m-1)N + j, i.e. the
/// extra bits first and then the parity bits.
class PasLink {
public:
    PasLink(PartialShaper shaper, QcLdpcCode code);
    static PasLink make(const LinkSpec& spec);

    const PartialShaper& shaper() const noexcept { return shaper_; }
    const QcLdpcCode& code() const noexcept { return code_; }
    int m() const noexcept { return shaper_.config().m; }
    int N() const noexcept { return shaper_.config().N; }
    long message_bits() const noexcept { return shaper_.config().k; }
    int uniform_bits() const noexcept { return shaper_.config().u * N(); }
    int extra_bits() const noexcept { return extra_; }
    long data_bits() const noexcept { return message_bits() + uniform_bits() + extra_bits(); }
    // Data bits per real dimension.
    double rate() const noexcept { return static_cast<double>(data_bits()) / N(); }

    const AmplitudePmf& priors() const noexcept { return priors_; }
    double power() const noexcept { return power_; }
    double sigma_for_snr(double snr_db) const;

    std::vector<int> transmit(std::span<const std::uint8_t> data) const;
    std::vector<std::uint8_t> codeword_of(std::span<const std::uint8_t> data) const;
    std::vector<double> demap(std::span<const double> y, double sigma) const;
    ReceiveResult receive(std::span<const double> y, double sigma, int max_iterations = 50) const;
    // Rebuilds the data frame from a decoded codeword; deshape_ok = false if
    // the amplitude sequence is not a shaper output.
    ReceiveResult unpack(std::span<const std::uint8_t> codeword) const;

private:
    PartialShaper shaper_;
    QcLdpcCode code_;
    AmplitudeLabeling labels_;
    int extra_ = 0;
    AmplitudePmf priors_;
    double power_ = 0.0;
    std::vector<double> log_prior_; // per signed point, points in increasing order
};

std::vector<double> awgn(std::span<const int> x, double sigma, std::mt19937_64& rng);

} // namespace pas
