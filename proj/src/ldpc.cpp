#include "pas/ldpc.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "pas/error.hpp"

namespace pas {

namespace detail {
extern const std::string_view kLdpc648R1_2;
extern const std::string_view kLdpc648R2_3;
extern const std::string_view kLdpc648R3_4;
extern const std::string_view kLdpc648R5_6;
} // namespace detail

namespace {

using Block = std::vector<std::uint8_t>;

// y += P^s x, where (P^s x)[r] = x[(r + s) mod Z].
void add_shifted(Block& y, const std::uint8_t* x, int s, int z)
{
    for (int r = 0; r < z; ++r)
        y[static_cast<std::size_t>(r)] ^= x[(r + s) % z];
}

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
            ++j;
        if (j > i)
            out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

long parse_long(std::string_view token, const char* what)
{
    long v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
        fail(ErrorKind::invalid_parameter, std::string("base matrix: bad ") + what + " '" + std::string(token) + "'");
    return v;
}

} // namespace

std::uint64_t fnv1a64(std::string_view data)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

CodeRate parse_code_rate(std::string_view text)
{
    static constexpr CodeRate kSupported[] = {{1, 2}, {2, 3}, {3, 4}, {5, 6}};
    CodeRate r;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        r.num = static_cast<int>(parse_long(text.substr(0, slash), "rate"));
        r.den = static_cast<int>(parse_long(text.substr(slash + 1), "rate"));
    } else {
        double v = 0.0;
        try {
            v = std::stod(std::string(text));
        } catch (const std::exception&) {
            fail(ErrorKind::invalid_parameter, "unparseable code rate '" + std::string(text) + "'");
        }
        for (const auto& c : kSupported)
            if (std::abs(c.value() - v) < 1e-3)
                return c;
        fail(ErrorKind::invalid_parameter, "unsupported code rate '" + std::string(text) + "'");
    }
    for (const auto& c : kSupported)
        if (c.num * r.den == r.num * c.den && r.den != 0)
            return c;
    fail(ErrorKind::invalid_parameter, "unsupported code rate '" + std::string(text) + "'");
}

QcLdpcCode::QcLdpcCode(int lifting, int block_rows, int block_cols, std::vector<int> shifts)
    : z_(lifting), mb_(block_rows), nb_(block_cols), shifts_(std::move(shifts))
{
    if (z_ < 1 || mb_ < 2 || nb_ <= mb_ || shifts_.size() != static_cast<std::size_t>(mb_) * nb_)
        fail(ErrorKind::invalid_parameter, "QC-LDPC: inconsistent base matrix dimensions");
    for (const int s : shifts_)
        if (s < -1 || s >= z_)
            fail(ErrorKind::invalid_parameter, "QC-LDPC: shift outside [-1, Z)");

    const int kb = nb_ - mb_;
    // First parity column: equal shifts at the first and last row plus one pivot in between.
    std::vector<int> used;
    for (int r = 0; r < mb_; ++r)
        if (shift(r, kb) >= 0)
            used.push_back(r);
    if (used.size() != 3 || used.front() != 0 || used.back() != mb_ - 1 || shift(0, kb) != shift(mb_ - 1, kb))
        fail(ErrorKind::invalid_parameter, "QC-LDPC: first parity column is not of dual-diagonal type");
    parity_pivot_row_ = used[1];
    parity_pivot_shift_ = shift(used[1], kb);
    for (int i = 0; i + 1 < mb_; ++i)
        for (int r = 0; r < mb_; ++r) {
            const int want = (r == i || r == i + 1) ? 0 : -1;
            if (shift(r, kb + 1 + i) != want)
                fail(ErrorKind::invalid_parameter, "QC-LDPC: parity part is not dual-diagonal");
        }

    check_start_.assign(static_cast<std::size_t>(mb_ * z_) + 1, 0);
    std::vector<int> var_degree(static_cast<std::size_t>(n()), 0);
    for (int br = 0; br < mb_; ++br) {
        for (int r = 0; r < z_; ++r) {
            const int check = br * z_ + r;
            for (int bc = 0; bc < nb_; ++bc) {
                const int s = shift(br, bc);
                if (s < 0)
                    continue;
                const int var = bc * z_ + (r + s) % z_;
                edge_var_.push_back(var);
                ++var_degree[static_cast<std::size_t>(var)];
            }
            check_start_[static_cast<std::size_t>(check) + 1] = static_cast<int>(edge_var_.size());
        }
    }
    var_start_.assign(static_cast<std::size_t>(n()) + 1, 0);
    std::partial_sum(var_degree.begin(), var_degree.end(), var_start_.begin() + 1);
    var_edges_.resize(edge_var_.size());
    std::vector<int> fill(var_start_.begin(), var_start_.end() - 1);
    for (std::size_t e = 0; e < edge_var_.size(); ++e)
        var_edges_[static_cast<std::size_t>(fill[static_cast<std::size_t>(edge_var_[e])]++)] = static_cast<int>(e);
}

CodeRate QcLdpcCode::rate() const
{
    const int g = std::gcd(k(), n());
    return {k() / g, n() / g};
}

std::vector<std::uint8_t> QcLdpcCode::encode(std::span<const std::uint8_t> info) const
{
    if (info.size() != static_cast<std::size_t>(k()))
        fail(ErrorKind::invalid_parameter, "encode: expected " + std::to_string(k()) + " info bits, got " +
                                               std::to_string(info.size()));
    const int kb = nb_ - mb_;
    const auto Z = static_cast<std::size_t>(z_);
    std::vector<Block> lambda(static_cast<std::size_t>(mb_), Block(Z, 0));
    for (int r = 0; r < mb_; ++r)
        for (int c = 0; c < kb; ++c)
            if (const int s = shift(r, c); s >= 0)
                add_shifted(lambda[static_cast<std::size_t>(r)], info.data() + c * Z, s, z_);

    Block total(Z, 0);
    for (const auto& l : lambda)
        for (std::size_t i = 0; i < Z; ++i)
            total[i] ^= l[i];
    // P^x p0 = Σ λ_i  =>  p0[(r + x) mod Z] = total[r].
    std::vector<Block> parity(static_cast<std::size_t>(mb_), Block(Z, 0));
    for (int r = 0; r < z_; ++r)
        parity[0][static_cast<std::size_t>((r + parity_pivot_shift_) % z_)] = total[static_cast<std::size_t>(r)];
    for (int i = 0; i + 1 < mb_; ++i) {
        Block next = lambda[static_cast<std::size_t>(i)];
        if (const int s = shift(i, kb); s >= 0)
            add_shifted(next, parity[0].data(), s, z_);
        if (i > 0)
            for (std::size_t t = 0; t < Z; ++t)
                next[t] ^= parity[static_cast<std::size_t>(i)][t];
        parity[static_cast<std::size_t>(i) + 1] = std::move(next);
    }

    std::vector<std::uint8_t> cw(info.begin(), info.end());
    cw.reserve(static_cast<std::size_t>(n()));
    for (const auto& p : parity)
        cw.insert(cw.end(), p.begin(), p.end());
    return cw;
}

std::vector<std::uint8_t> QcLdpcCode::syndrome(std::span<const std::uint8_t> codeword) const
{
    if (codeword.size() != static_cast<std::size_t>(n()))
        fail(ErrorKind::invalid_parameter, "syndrome: wrong codeword length");
    std::vector<std::uint8_t> syn(static_cast<std::size_t>(mb_ * z_), 0);
    for (std::size_t c = 0; c < syn.size(); ++c)
        for (int e = check_start_[c]; e < check_start_[c + 1]; ++e)
            syn[c] ^= codeword[static_cast<std::size_t>(edge_var_[static_cast<std::size_t>(e)])] & 1u;
    return syn;
}

bool QcLdpcCode::is_codeword(std::span<const std::uint8_t> codeword) const
{
    const auto syn = syndrome(codeword);
    return std::all_of(syn.begin(), syn.end(), [](std::uint8_t b) { return b == 0; });
}

DecodeResult QcLdpcCode::decode(std::span<const double> llrs, int max_iterations) const
{
    if (llrs.size() != static_cast<std::size_t>(n()))
        fail(ErrorKind::invalid_parameter, "decode: wrong LLR vector length");
    const auto N = static_cast<std::size_t>(n());
    const std::size_t edges = edge_var_.size();
    std::vector<double> channel(N);
    for (std::size_t v = 0; v < N; ++v) {
        if (!std::isfinite(llrs[v]))
            fail(ErrorKind::numerical_error, "decode: non-finite LLR");
        channel[v] = std::clamp(llrs[v], -kLlrClip, kLlrClip);
    }

    DecodeResult res;
    res.bits.resize(N);
    for (std::size_t v = 0; v < N; ++v)
        res.bits[v] = channel[v] < 0.0 ? 1 : 0;
    if (is_codeword(res.bits)) {
        res.converged = true;
        return res;
    }

    std::vector<double> v2c(edges), c2v(edges, 0.0), t(edges);
    for (std::size_t e = 0; e < edges; ++e)
        v2c[e] = channel[static_cast<std::size_t>(edge_var_[e])];
    std::vector<double> prefix;
    constexpr double kMaxTanh = 1.0 - 1e-15;

    for (int it = 1; it <= max_iterations; ++it) {
        for (std::size_t c = 0; c + 1 < check_start_.size(); ++c) {
            const auto b = static_cast<std::size_t>(check_start_[c]);
            const auto end = static_cast<std::size_t>(check_start_[c + 1]);
            const std::size_t deg = end - b;
            prefix.assign(deg + 1, 1.0);
            for (std::size_t i = 0; i < deg; ++i) {
                t[b + i] = std::tanh(0.5 * v2c[b + i]);
                prefix[i + 1] = prefix[i] * t[b + i];
            }
            double suffix = 1.0;
            for (std::size_t i = deg; i-- > 0;) {
                const double p = std::clamp(prefix[i] * suffix, -kMaxTanh, kMaxTanh);
                c2v[b + i] = std::clamp(2.0 * std::atanh(p), -kLlrClip, kLlrClip);
                suffix *= t[b + i];
            }
        }
        for (std::size_t v = 0; v < N; ++v) {
            double total = channel[v];
            for (int k = var_start_[v]; k < var_start_[v + 1]; ++k)
                total += c2v[static_cast<std::size_t>(var_edges_[static_cast<std::size_t>(k)])];
            res.bits[v] = total < 0.0 ? 1 : 0;
            for (int k = var_start_[v]; k < var_start_[v + 1]; ++k) {
                const auto e = static_cast<std::size_t>(var_edges_[static_cast<std::size_t>(k)]);
                v2c[e] = std::clamp(total - c2v[e], -kLlrClip, kLlrClip);
            }
        }
        res.iterations = it;
        if (is_codeword(res.bits)) {
            res.converged = true;
            return res;
        }
    }
    return res;
}

QcLdpcCode parse_base_matrix(std::string_view text)
{
    int lifting = 0;
    bool have_checksum = false;
    std::uint64_t checksum = 0;
    std::string normalized;
    std::vector<int> shifts;
    int cols = -1;
    int rows = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        const auto tokens = split_ws(line);
        if (tokens.empty())
            continue;
        if (tokens[0].front() == '#') {
            std::vector<std::string_view> rest = tokens;
            if (rest[0] == "#")
                rest.erase(rest.begin());
            else
                rest[0].remove_prefix(1);
            if (rest.size() == 2 && rest[0] == "lifting")
                lifting = static_cast<int>(parse_long(rest[1], "lifting factor"));
            else if (rest.size() == 3 && rest[0] == "checksum") {
                if (rest[1] != "fnv1a64")
                    fail(ErrorKind::invalid_parameter, "base matrix: unknown checksum algorithm");
                const auto digits = rest[2];
                const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), checksum, 16);
                if (ec != std::errc() || ptr != digits.data() + digits.size())
                    fail(ErrorKind::invalid_parameter, "base matrix: bad checksum value");
                have_checksum = true;
            }
            continue;
        }
        if (cols >= 0 && static_cast<int>(tokens.size()) != cols)
            fail(ErrorKind::invalid_parameter, "base matrix: ragged rows");
        cols = static_cast<int>(tokens.size());
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            shifts.push_back(static_cast<int>(parse_long(tokens[i], "shift")));
            normalized.append(tokens[i]);
            normalized.push_back(i + 1 == tokens.size() ? '\n' : ' ');
        }
        ++rows;
    }
    if (lifting <= 0)
        fail(ErrorKind::invalid_parameter, "base matrix: missing '# lifting Z' line");
    if (have_checksum && fnv1a64(normalized) != checksum)
        fail(ErrorKind::invalid_parameter, "base matrix: checksum mismatch");
    return QcLdpcCode(lifting, rows, cols, std::move(shifts));
}

QcLdpcCode load_code_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        fail(ErrorKind::io_error, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_base_matrix(ss.str());
}

QcLdpcCode load_code(CodeRate rate)
{
    rate = parse_code_rate(rate.str());
    if (rate == CodeRate{1, 2})
        return parse_base_matrix(detail::kLdpc648R1_2);
    if (rate == CodeRate{2, 3})
        return parse_base_matrix(detail::kLdpc648R2_3);
    if (rate == CodeRate{3, 4})
        return parse_base_matrix(detail::kLdpc648R3_4);
    return parse_base_matrix(detail::kLdpc648R5_6);
}

} // namespace pas
