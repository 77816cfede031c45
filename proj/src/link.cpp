#include "pas/link.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pas/error.hpp"

namespace pas {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double max_star(double a, double b)
{
    if (a == kNegInf)
        return b;
    if (b == kNegInf)
        return a;
    return std::max(a, b) + std::log1p(std::exp(-std::abs(a - b)));
}

} // namespace

PasLink::PasLink(PartialShaper shaper, QcLdpcCode code)
    : shaper_(std::move(shaper)), code_(std::move(code)), labels_(brgc_labels(shaper_.config().m - 1))
{
    const int m = shaper_.config().m;
    const int N = shaper_.config().N;
    if (code_.n() != m * N)
        fail(ErrorKind::invalid_parameter, "codeword length " + std::to_string(code_.n()) + " differs from m*N = " +
                                               std::to_string(m * N));
    extra_ = code_.k() - (m - 1) * N;
    if (extra_ < 0)
        fail(ErrorKind::invalid_parameter, "code rate below (m-1)/m leaves no room for the amplitude bits");
    priors_ = shaper_.induced_pmf(PmfBasis::used);
    power_ = pmf_stats(priors_).avg_energy;
    const auto alphabet = shaper_.alphabet();
    for (const int x : alphabet.points()) {
        const double p = priors_.prob_of(std::abs(x)) / 2.0;
        log_prior_.push_back(p > 0.0 ? std::log(p) : kNegInf);
    }
}

PasLink PasLink::make(const LinkSpec& spec)
{
    auto code = load_code(spec.rate);
    if (code.n() % spec.m != 0)
        fail(ErrorKind::invalid_parameter, "codeword length is not a multiple of m");
    const int N = code.n() / spec.m;
    if (spec.k >= 0)
        return PasLink(PartialShaper::with_bits(spec.m, spec.s, N, spec.k, spec.precision), std::move(code));
    if (spec.e_max >= 0)
        return PasLink(PartialShaper::with_emax(spec.m, spec.s, N, spec.e_max, spec.precision), std::move(code));
    fail(ErrorKind::invalid_parameter, "link needs either k or e_max");
}

double PasLink::sigma_for_snr(double snr_db) const
{
    if (!std::isfinite(snr_db))
        fail(ErrorKind::invalid_parameter, "SNR must be finite");
    return std::sqrt(power_ / std::pow(10.0, snr_db / 10.0));
}

std::vector<std::uint8_t> PasLink::codeword_of(std::span<const std::uint8_t> data) const
{
    if (data.size() != static_cast<std::size_t>(data_bits()))
        fail(ErrorKind::invalid_parameter, "data frame must hold " + std::to_string(data_bits()) + " bits");
    const auto k = static_cast<std::size_t>(message_bits());
    const int u = shaper_.config().u;
    const auto n_sym = static_cast<std::size_t>(N());
    const BigInt message = from_bits(data.subspan(0, k));
    UniformLevels uniform(static_cast<std::size_t>(u));
    for (int level = 0; level < u; ++level) {
        const auto at = data.subspan(k + static_cast<std::size_t>(level) * n_sym, n_sym);
        uniform[static_cast<std::size_t>(level)].assign(at.begin(), at.end());
    }
    const auto amplitudes = shaper_.shape(message, uniform);

    const int amp_bits = m() - 1;
    std::vector<std::uint8_t> info;
    info.reserve(static_cast<std::size_t>(code_.k()));
    for (const int a : amplitudes) {
        const int idx = (a - 1) / 2;
        for (int level = 0; level < amp_bits; ++level)
            info.push_back(labels_.bit(idx, level));
    }
    const auto extra = data.subspan(k + static_cast<std::size_t>(uniform_bits()));
    info.insert(info.end(), extra.begin(), extra.end());
    return code_.encode(info);
}

std::vector<int> PasLink::transmit(std::span<const std::uint8_t> data) const
{
    const auto cw = codeword_of(data);
    const int amp_bits = m() - 1;
    const auto n_sym = static_cast<std::size_t>(N());
    std::vector<int> x(n_sym);
    for (std::size_t j = 0; j < n_sym; ++j) {
        std::uint32_t label = 0;
        for (int level = 0; level < amp_bits; ++level)
            label = (label << 1) | cw[j * static_cast<std::size_t>(amp_bits) + static_cast<std::size_t>(level)];
        x[j] = sign_of_bit(cw[static_cast<std::size_t>(amp_bits) * n_sym + j]) * labels_.amplitude_of_label(label);
    }
    return x;
}

std::vector<double> PasLink::demap(std::span<const double> y, double sigma) const
{
    if (!(sigma > 0.0))
        fail(ErrorKind::invalid_parameter, "demap: sigma must be positive");
    if (y.size() != static_cast<std::size_t>(N()))
        fail(ErrorKind::invalid_parameter, "demap: expected N channel outputs");
    const int amp_bits = m() - 1;
    const auto points = shaper_.alphabet().points();
    const auto n_sym = static_cast<std::size_t>(N());
    const double inv = 1.0 / (2.0 * sigma * sigma);
    std::vector<double> llr(static_cast<std::size_t>(code_.n()));
    std::vector<double> metric(points.size());
    for (std::size_t j = 0; j < n_sym; ++j) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double d = y[j] - points[i];
            metric[i] = log_prior_[i] - d * d * inv;
        }
        for (int level = 0; level < amp_bits; ++level) {
            double zero = kNegInf, one = kNegInf;
            for (std::size_t i = 0; i < points.size(); ++i) {
                const int idx = (std::abs(points[i]) - 1) / 2;
                double& acc = labels_.bit(idx, level) ? one : zero;
                acc = max_star(acc, metric[i]);
            }
            llr[j * static_cast<std::size_t>(amp_bits) + static_cast<std::size_t>(level)] = zero - one;
        }
        double plus = kNegInf, minus = kNegInf;
        for (std::size_t i = 0; i < points.size(); ++i) {
            double& acc = points[i] > 0 ? plus : minus;
            acc = max_star(acc, metric[i]);
        }
        llr[static_cast<std::size_t>(amp_bits) * n_sym + j] = plus - minus;
    }
    for (auto& l : llr)
        if (std::isnan(l))
            l = 0.0;
    return llr;
}

ReceiveResult PasLink::unpack(std::span<const std::uint8_t> codeword) const
{
    const int amp_bits = m() - 1;
    const auto n_sym = static_cast<std::size_t>(N());
    ReceiveResult res;
    res.data.assign(static_cast<std::size_t>(data_bits()), 0);
    std::vector<int> amplitudes(n_sym);
    for (std::size_t j = 0; j < n_sym; ++j) {
        std::uint32_t label = 0;
        for (int level = 0; level < amp_bits; ++level)
            label = (label << 1) | codeword[j * static_cast<std::size_t>(amp_bits) + static_cast<std::size_t>(level)];
        amplitudes[j] = labels_.amplitude_of_label(label);
    }
    const auto k = static_cast<std::size_t>(message_bits());
    const int u = shaper_.config().u;
    // The uniform levels and extra bits are readable even when deshaping fails.
    for (std::size_t j = 0; j < n_sym; ++j) {
        const auto bits = shaper_.split(amplitudes[j]).second;
        for (int level = 0; level < u; ++level)
            res.data[k + static_cast<std::size_t>(level) * n_sym + j] =
                static_cast<std::uint8_t>((bits >> (u - 1 - level)) & 1u);
    }
    const auto extra_at = static_cast<std::size_t>(amp_bits) * n_sym;
    std::copy_n(codeword.begin() + static_cast<std::ptrdiff_t>(extra_at), extra_,
                res.data.begin() + static_cast<std::ptrdiff_t>(k + static_cast<std::size_t>(uniform_bits())));
    try {
        const auto frame = shaper_.deshape(amplitudes);
        const auto msg = to_bits(frame.message, k);
        std::copy(msg.begin(), msg.end(), res.data.begin());
        res.deshape_ok = true;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::invalid_sequence)
            throw;
        res.deshape_ok = false;
    }
    return res;
}

ReceiveResult PasLink::receive(std::span<const double> y, double sigma, int max_iterations) const
{
    const auto decoded = code_.decode(demap(y, sigma), max_iterations);
    auto res = unpack(decoded.bits);
    res.decoder_converged = decoded.converged;
    res.iterations = decoded.iterations;
    return res;
}

std::vector<double> awgn(std::span<const int> x, double sigma, std::mt19937_64& rng)
{
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] = x[i] + (sigma > 0.0 ? noise(rng) : 0.0);
    return y;
}

} // namespace pas
