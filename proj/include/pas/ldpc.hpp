#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pas {

struct CodeRate {
    int num = 0;
    int den = 1;

    double value() const noexcept { return static_cast<double>(num) / den; }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
    friend bool operator==(const CodeRate&, const CodeRate&) = default;
};

// Accepts "3/4", "0.75", etc. for the supported 802.11n rates.
CodeRate parse_code_rate(std::string_view text);

struct DecodeResult {
    std::vector<std::uint8_t> bits;
    bool converged = false;
    int iterations = 0;
};

/// Quasi-cyclic LDPC code given by a base matrix of circulant shifts (-1 for
/// an all-zero block). Circulant P^s has its row r one at column (r+s) mod Z.
/// The parity part must have the dual-diagonal 802.11n structure so that
/// encoding is back-substitution.
class QcLdpcCode {
public:
    QcLdpcCode(int lifting, int block_rows, int block_cols, std::vector<int> shifts);

    int lifting() const noexcept { return z_; }
    int block_rows() const noexcept { return mb_; }
    int block_cols() const noexcept { return nb_; }
    int shift(int row, int col) const { return shifts_[static_cast<std::size_t>(row) * nb_ + col]; }
    int n() const noexcept { return nb_ * z_; }
    int k() const noexcept { return (nb_ - mb_) * z_; }
    CodeRate rate() const;

    std::vector<std::uint8_t> encode(std::span<const std::uint8_t> info) const;
    std::vector<std::uint8_t> syndrome(std::span<const std::uint8_t> codeword) const;
    bool is_codeword(std::span<const std::uint8_t> codeword) const;

    // Sum-product decoding; positive LLR favours bit 0. Checks the channel
    // hard decisions first, so a valid input returns with 0 iterations.
    DecodeResult decode(std::span<const double> llrs, int max_iterations = 50) const;

    static constexpr double kLlrClip = 30.0;

private:
    int z_;
    int mb_;
    int nb_;
    std::vector<int> shifts_;
    int parity_pivot_row_ = 0;
    int parity_pivot_shift_ = 0;
    // Expanded Tanner graph: edges are numbered check-major.
    std::vector<int> check_start_;
    std::vector<int> edge_var_;
    std::vector<int> var_start_;
    std::vector<int> var_edges_;
};

// Parses the base-matrix text format (see docs/formats.md), verifying the
// optional checksum line.
QcLdpcCode parse_base_matrix(std::string_view text);
QcLdpcCode load_code_file(const std::filesystem::path& path);

// IEEE 802.11n n = 648 codes (Z = 27) embedded from data/ldpc.
QcLdpcCode load_code(CodeRate rate);

std::uint64_t fnv1a64(std::string_view data);

} // namespace pas
