#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pas/air.hpp"
#include "pas/distributions.hpp"
#include "pas/error.hpp"
#include "pas/ldpc.hpp"
#include "pas/link.hpp"
#include "pas/pess.hpp"
#include "pas/rate_loss.hpp"
#include "pas/simulate.hpp"
#include "pas/trellis.hpp"
#include "pas/trellis_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::string num6(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

json num_json(double v)
{
    if (std::isfinite(v))
        return v;
    return num6(v);
}

// "8/3" or "2.6667".
double parse_rational(const std::string& text)
{
    if (const auto slash = text.find('/'); slash != std::string::npos) {
        const double num = std::stod(text.substr(0, slash));
        const double den = std::stod(text.substr(slash + 1));
        if (den == 0.0)
            pas::fail(pas::ErrorKind::invalid_parameter, "zero denominator in '" + text + "'");
        return num / den;
    }
    try {
        return std::stod(text);
    } catch (const std::exception&) {
        pas::fail(pas::ErrorKind::invalid_parameter, "not a number: '" + text + "'");
    }
}

// Writes through a temporary file so an interrupted run never leaves a
// truncated artifact under the final name. Empty path or "-" means stdout.
void emit(const std::string& path, const std::string& content)
{
    if (path.empty() || path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            pas::fail(pas::ErrorKind::io_error, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out)
            pas::fail(pas::ErrorKind::io_error, "cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
}

void write_manifest(const std::string& out, const std::string& command, const json& config,
                    std::optional<std::uint64_t> seed)
{
    if (out.empty() || out == "-")
        return;
    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(pas::fnv1a64(config.dump())));
    json m;
    m["command"] = command;
    m["config"] = config;
    m["config_digest"] = std::string("fnv1a64:") + digest;
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["outputs"] = json::array({out});
    m["version"] = kVersion;
    emit(out + ".manifest.json", m.dump(2) + "\n");
}

std::vector<double> pmf_row(const pas::AmplitudePmf& pmf) { return pmf.probs; }

// ---------------------------------------------------------------- fit

struct FitArgs {
    int m = 4;
    std::string entropy = "8/3";
    std::optional<double> energy;
    std::vector<int> groups{1, 2, 4};
    std::string format = "csv";
    std::string out;
};

json fit_rows(const FitArgs& a)
{
    const auto amps = pas::build_alphabet(a.m).amplitudes;
    json rows = json::array();
    for (const int g : a.groups) {
        const double lambda = a.energy ? pas::fit_energy(*a.energy, amps, g)
                                       : pas::fit_entropy(parse_rational(a.entropy), amps, g);
        const auto pmf = pas::partial_mb_pmf(lambda, amps, g);
        const auto st = pas::pmf_stats(pmf);
        rows.push_back({{"group_size", g},
                        {"lambda", num_json(lambda)},
                        {"entropy", st.entropy},
                        {"avg_energy", st.avg_energy},
                        {"gain_db", pas::shaping_gain_db(st.entropy, st.avg_energy)},
                        {"amplitudes", amps},
                        {"probs", pmf_row(pmf)}});
    }
    return rows;
}

int run_fit(const FitArgs& a)
{
    const auto rows = fit_rows(a);
    std::ostringstream out;
    if (a.format == "json") {
        out << rows.dump(2) << "\n";
    } else {
        out << "group_size,lambda,entropy,avg_energy,gain_db";
        for (const int amp : rows.at(0)["amplitudes"])
            out << ",p_" << amp;
        out << "\n";
        for (const auto& r : rows) {
            const double lambda = r["lambda"].is_number() ? r["lambda"].get<double>() : INFINITY;
            out << r["group_size"].get<int>() << ',' << num6(lambda) << ',' << num6(r["entropy"]) << ','
                << num6(r["avg_energy"]) << ',' << num6(r["gain_db"]);
            for (const double p : r["probs"])
                out << ',' << num6(p);
            out << "\n";
        }
    }
    emit(a.out, out.str());
    json cfg{{"m", a.m}, {"groups", a.groups}, {"format", a.format}};
    if (a.energy)
        cfg["energy"] = *a.energy;
    else
        cfg["entropy"] = a.entropy;
    write_manifest(a.out, "fit", cfg, std::nullopt);
    return 0;
}

// ---------------------------------------------------------------- gap-sweep

struct GapArgs {
    int m = 4;
    double rate = 3.0;
    int shaped = 3;
    double step = 0.01;
    std::optional<double> from;
    std::optional<double> to;
    std::string out;
};

int run_gap(const GapArgs& a)
{
    const auto grid = pas::entropy_grid(a.from.value_or(a.rate), a.to.value_or(a.m), a.step);
    const auto pts = pas::gap_sweep(a.m, a.shaped, a.rate, grid);
    std::ostringstream out;
    out << "H_X,delta_snr_db\n";
    const pas::GapPoint* best = nullptr;
    for (const auto& p : pts) {
        out << num6(p.entropy) << ',' << num6(p.delta_snr_db) << "\n";
        if (!best || p.delta_snr_db < best->delta_snr_db)
            best = &p;
    }
    emit(a.out, out.str());
    if (best) {
        const double uniform = pas::gap_sweep(a.m, a.shaped, a.rate, std::vector<double>{double(a.m)})[0].delta_snr_db;
        std::cerr << "optimum H_X=" << num6(best->entropy) << " delta_snr_db=" << num6(best->delta_snr_db)
                  << " gain_over_uniform_db=" << num6(uniform - best->delta_snr_db) << "\n";
    }
    write_manifest(a.out, "gap-sweep",
                   {{"m", a.m}, {"rate", a.rate}, {"shaped_bits", a.shaped}, {"step", a.step},
                    {"from", a.from.value_or(a.rate)}, {"to", a.to.value_or(a.m)}},
                   std::nullopt);
    return 0;
}

// ---------------------------------------------------------------- rate-loss

struct RateLossArgs {
    int m = 4;
    std::string rate = "8/3";
    std::vector<int> lengths;
    std::vector<std::string> schemes{"s3", "s2", "s1", "ccdm"};
    std::string out;
};

int run_rate_loss(const RateLossArgs& a)
{
    const double rate = parse_rational(a.rate);
    std::vector<int> lengths = a.lengths;
    if (lengths.empty())
        for (int n = 100; n <= 600; n += 20)
            lengths.push_back(n);
    std::ostringstream out;
    out << "N,scheme,input_bits,rate,energy,rate_loss\n";
    for (const auto& scheme : a.schemes) {
        const bool ccdm = scheme == "ccdm";
        int s = 0;
        if (!ccdm) {
            if (scheme.size() < 2 || scheme[0] != 's')
                pas::fail(pas::ErrorKind::invalid_parameter, "unknown scheme '" + scheme + "' (use sK or ccdm)");
            s = std::stoi(scheme.substr(1));
        }
        for (const int n : lengths) {
            const auto p = ccdm ? pas::ccdm_rate_loss(a.m, n, rate) : pas::sphere_rate_loss(a.m, s, n, rate);
            out << p.N << ',' << scheme << ',' << p.input_bits << ',' << num6(p.rate) << ',' << num6(p.energy)
                << ',' << num6(p.loss) << "\n";
        }
        if (!ccdm)
            out << "inf," << scheme << ",," << num6(rate) << ",," << num6(pas::asymptotic_rate_loss(a.m, s, rate))
                << "\n";
    }
    emit(a.out, out.str());
    write_manifest(a.out, "rate-loss", {{"m", a.m}, {"rate", a.rate}, {"lengths", lengths}, {"schemes", a.schemes}},
                   std::nullopt);
    return 0;
}

// ---------------------------------------------------------------- trellis

struct TrellisArgs {
    std::string file;
    int n = 0;
    std::vector<int> amplitudes;
    std::optional<long long> emax;
    std::optional<long> bits;
    std::optional<int> mantissa;
    std::optional<int> exponent;
    std::string out;
};

json trellis_config(const TrellisArgs& a)
{
    json c;
    if (!a.file.empty())
        c["trellis"] = a.file;
    c["N"] = a.n;
    c["amplitudes"] = a.amplitudes;
    if (a.emax)
        c["e_max"] = *a.emax;
    if (a.bits)
        c["bits"] = *a.bits;
    if (a.mantissa)
        c["mantissa_bits"] = *a.mantissa;
    if (a.exponent)
        c["exponent_bits"] = *a.exponent;
    return c;
}

pas::AnyTrellis make_trellis(const TrellisArgs& a)
{
    if (!a.file.empty())
        return pas::load_trellis(a.file);
    if (a.n < 1 || a.amplitudes.empty())
        pas::fail(pas::ErrorKind::invalid_parameter, "need --trellis FILE or --n and --amplitudes");
    if (a.mantissa.has_value() != a.exponent.has_value())
        pas::fail(pas::ErrorKind::invalid_parameter, "--mantissa-bits and --exponent-bits go together");
    long long e_max = 0;
    if (a.emax)
        e_max = *a.emax;
    else if (a.bits)
        e_max = pas::find_emax(a.n, a.amplitudes, *a.bits);
    else
        pas::fail(pas::ErrorKind::invalid_parameter, "need --emax or --bits");
    if (a.mantissa)
        return pas::build_bounded_trellis(a.n, a.amplitudes, e_max, *a.mantissa, *a.exponent);
    return pas::build_trellis(a.n, a.amplitudes, e_max);
}

json trellis_info(const pas::AnyTrellis& any)
{
    const auto& t = pas::as_trellis(any);
    json j;
    j["mode"] = std::holds_alternative<pas::BoundedTrellis>(any) ? "bounded" : "exact";
    j["N"] = t.length();
    j["amplitudes"] = t.amplitudes();
    j["e_max"] = t.e_max();
    j["levels"] = t.num_levels();
    j["sequences"] = t.sphere_size().str();
    j["sequences_hex"] = pas::to_hex(t.sphere_size());
    j["input_bits"] = t.input_bits();
    const double shaping_rate = static_cast<double>(t.input_bits()) / t.length();
    if (const auto* b = std::get_if<pas::BoundedTrellis>(&any); b && t.input_bits() > 0) {
        const auto r = pas::complexity_report(t.num_levels(), t.length(), b->mantissa_bits(), b->exponent_bits(),
                                              static_cast<int>(t.energies().size()), shaping_rate);
        j["mantissa_bits"] = b->mantissa_bits();
        j["exponent_bits"] = b->exponent_bits();
        j["storage_kB"] = r.bounded_storage_kB();
        j["ops_per_dim"] = r.bounded_ops_per_dim;
    } else if (t.input_bits() > 0) {
        const auto r = pas::complexity_report(t.num_levels(), t.length(), 1, 1,
                                              static_cast<int>(t.energies().size()), shaping_rate);
        j["storage_kB"] = r.exact_storage_kB();
        j["ops_per_dim"] = r.exact_ops_per_dim;
    }
    return j;
}

int run_trellis_build(const TrellisArgs& a)
{
    if (a.out.empty())
        pas::fail(pas::ErrorKind::invalid_parameter, "trellis build needs --out FILE");
    const auto any = make_trellis(a);
    std::ostringstream bin;
    std::visit([&](const auto& t) { pas::write_trellis(bin, t); }, any);
    emit(a.out, bin.str());
    std::cout << trellis_info(any).dump(2) << "\n";
    write_manifest(a.out, "trellis build", trellis_config(a), std::nullopt);
    return 0;
}

int run_trellis_info(const TrellisArgs& a)
{
    const auto any = make_trellis(a);
    emit(a.out, trellis_info(any).dump(2) + "\n");
    write_manifest(a.out, "trellis info", trellis_config(a), std::nullopt);
    return 0;
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

int run_shape(const TrellisArgs& a, bool inverse)
{
    const auto any = make_trellis(a);
    const auto& t = pas::as_trellis(any);
    std::string line;
    long line_no = 0;
    while (std::getline(std::cin, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty())
            continue;
        try {
            if (!inverse) {
                const auto seq = pas::shape(pas::from_hex(line), t);
                for (std::size_t i = 0; i < seq.size(); ++i)
                    std::cout << (i ? "," : "") << seq[i];
                std::cout << "\n";
            } else {
                std::vector<int> seq;
                std::stringstream ss(line);
                std::string tok;
                while (std::getline(ss, tok, ','))
                    seq.push_back(std::stoi(trim(tok)));
                std::cout << pas::to_hex(pas::deshape(seq, t)) << "\n";
            }
        } catch (const std::invalid_argument&) {
            pas::fail(pas::ErrorKind::invalid_parameter, "line " + std::to_string(line_no) + ": not a number");
        } catch (const pas::Error& e) {
            throw pas::Error(e.kind(), "line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    std::cout.flush();
    return 0;
}

// ---------------------------------------------------------------- simulate

struct SimArgs {
    std::string config;
    std::vector<double> snr;
    std::optional<std::uint64_t> seed;
    std::optional<long> min_errors;
    std::optional<long> max_frames;
    std::optional<int> threads;
    std::optional<int> max_iterations;
    std::string config_id;
    std::string out;
};

template <typename T>
void override_key(json& j, const char* key, const std::optional<T>& v)
{
    if (v)
        j[key] = *v;
}

int run_simulate(const SimArgs& a)
{
    json cfg = json::object();
    if (!a.config.empty()) {
        std::ifstream in(a.config);
        if (!in)
            pas::fail(pas::ErrorKind::io_error, "cannot open config " + a.config);
        try {
            cfg = json::parse(in);
        } catch (const json::exception& e) {
            pas::fail(pas::ErrorKind::invalid_parameter, std::string("config is not valid JSON: ") + e.what());
        }
        if (!cfg.is_object())
            pas::fail(pas::ErrorKind::invalid_parameter, "config must be a JSON object");
    }
    if (!a.snr.empty())
        cfg["snr_db"] = a.snr;
    override_key(cfg, "seed", a.seed);
    override_key(cfg, "min_errors", a.min_errors);
    override_key(cfg, "max_frames", a.max_frames);
    override_key(cfg, "threads", a.threads);
    override_key(cfg, "max_iterations", a.max_iterations);
    if (!a.config_id.empty())
        cfg["config_id"] = a.config_id;

    static const std::vector<std::string> known{"m", "s", "u", "N", "code_rate", "k", "e_max", "precision",
                                                "seed", "snr_db", "min_errors", "max_frames", "threads",
                                                "max_iterations", "config_id"};
    for (const auto& [key, _] : cfg.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            pas::fail(pas::ErrorKind::invalid_parameter, "unknown config key '" + key + "'");

    pas::LinkSpec spec;
    pas::StopRule stop;
    pas::SimulationOptions opts;
    std::vector<double> snrs;
    std::string config_id;
    try {
        spec.m = cfg.value("m", 4);
        spec.s = cfg.value("s", spec.m - 1);
        if (cfg.contains("u") && cfg["u"].get<int>() != spec.m - 1 - spec.s)
            pas::fail(pas::ErrorKind::invalid_parameter, "config: u must equal m - 1 - s");
        spec.rate = pas::parse_code_rate(cfg.value("code_rate", std::string("5/6")));
        if (cfg.contains("k"))
            spec.k = cfg["k"].get<long>();
        if (cfg.contains("e_max"))
            spec.e_max = cfg["e_max"].get<long long>();
        if (spec.k < 0 && spec.e_max < 0)
            pas::fail(pas::ErrorKind::invalid_parameter, "config needs k or e_max");
        if (cfg.contains("precision")) {
            const auto& p = cfg["precision"];
            spec.precision = pas::Precision::fixed(p.at("mantissa_bits").get<int>(), p.at("exponent_bits").get<int>());
        }
        opts.seed = cfg.value("seed", std::uint64_t{1});
        opts.threads = cfg.value("threads", 0);
        opts.max_iterations = cfg.value("max_iterations", 50);
        stop.min_errors = cfg.value("min_errors", 100L);
        stop.max_frames = cfg.value("max_frames", 1'000'000L);
        snrs = cfg.value("snr_db", std::vector<double>{});
        config_id = cfg.value("config_id", std::string("m") + std::to_string(spec.m) + "s" + std::to_string(spec.s));
    } catch (const json::exception& e) {
        pas::fail(pas::ErrorKind::invalid_parameter, std::string("config: ") + e.what());
    }
    const auto link = pas::PasLink::make(spec);
    if (cfg.contains("N") && cfg["N"].get<int>() != link.N())
        pas::fail(pas::ErrorKind::invalid_parameter,
                  "config: N=" + std::to_string(cfg["N"].get<int>()) + " but the code gives N=" + std::to_string(link.N()));
    std::cerr << "config " << config_id << ": k=" << link.message_bits() << " e_max=" << link.shaper().config().e_max
              << " rate=" << num6(link.rate()) << " E[X^2]=" << num6(link.power()) << "\n";
    const auto results = pas::simulate(link, snrs, stop, opts);
    std::ostringstream out;
    pas::write_fer_csv(out, results, config_id);
    emit(a.out, out.str());
    write_manifest(a.out, "simulate", cfg, opts.seed);
    return 0;
}

// ---------------------------------------------------------------- tables

json build_tables()
{
    constexpr int m = 4;
    constexpr int N = 162;
    const double rate = 8.0 / 3.0;
    const auto amps = pas::build_alphabet(m).amplitudes;

    FitArgs fit;
    fit.m = m;
    json t2 = fit_rows(fit);

    struct Row {
        int s;
        int n_m;
        int n_p;
    };
    const Row rows[] = {{3, 17, 9}, {2, 10, 9}, {1, 8, 7}};
    json t3 = json::array();
    json t4 = json::array();
    for (const auto& r : rows) {
        const int u = m - 1 - r.s;
        const long k = static_cast<long>(std::ceil((rate - u) * N - 1e-9));
        const auto shaper = pas::PartialShaper::with_bits(m, r.s, N, k);
        const auto used = pas::pmf_stats(shaper.induced_pmf(pas::PmfBasis::used));
        const auto all = pas::pmf_stats(shaper.induced_pmf(pas::PmfBasis::all));
        const double total_rate = static_cast<double>(k) / N + u;
        t3.push_back({{"method", u == 0 ? "ESS" : "P-ESS"},
                      {"u", u},
                      {"e_max", shaper.config().e_max},
                      {"k", k},
                      {"k_over_N", static_cast<double>(k) / N},
                      {"avg_energy", used.avg_energy},
                      {"avg_energy_all_sequences", all.avg_energy},
                      {"gain_db", pas::shaping_gain_db(total_rate, used.avg_energy)}});
        const auto& trellis = shaper.exact_trellis();
        const auto rep = pas::complexity_report(trellis.num_levels(), N, r.n_m, r.n_p, 1 << r.s,
                                                static_cast<double>(k) / N);
        t4.push_back({{"shaped_bits", r.s},
                      {"levels", trellis.num_levels()},
                      {"mantissa_bits", r.n_m},
                      {"exponent_bits", r.n_p},
                      {"storage_kB", rep.bounded_storage_kB()},
                      {"ops_per_dim", rep.bounded_ops_per_dim},
                      {"exact_storage_kB", rep.exact_storage_kB()},
                      {"exact_ops_per_dim", rep.exact_ops_per_dim}});
    }
    const long k = static_cast<long>(std::ceil(rate * N - 1e-9));
    const auto comp = pas::ccdm_composition(N, k, amps);
    const auto cc = pas::ccdm_analytics(comp, amps);
    t3.push_back({{"method", "CCDM"},
                  {"u", 0},
                  {"composition", comp.counts},
                  {"k", cc.input_bits},
                  {"k_over_N", cc.rate},
                  {"avg_energy", cc.avg_energy},
                  {"gain_db", pas::shaping_gain_db(cc.rate, cc.avg_energy)}});
    return {{"table2", t2}, {"table3", t3}, {"table4", t4}, {"N", N}, {"m", m}};
}

int run_tables(const std::string& out)
{
    emit(out, build_tables().dump(2) + "\n");
    write_manifest(out, "tables", json::object(), std::nullopt);
    return 0;
}

void add_trellis_options(CLI::App* cmd, TrellisArgs& a, bool allow_file)
{
    if (allow_file)
        cmd->add_option("--trellis", a.file, "Trellis file written by 'trellis build'");
    cmd->add_option("--n", a.n, "Block length N");
    cmd->add_option("--amplitudes", a.amplitudes, "Amplitude alphabet, e.g. 1,3,5,7")->delimiter(',');
    cmd->add_option("--emax", a.emax, "Maximum sequence energy");
    cmd->add_option("--bits", a.bits, "Pick the smallest e_max carrying this many bits");
    cmd->add_option("--mantissa-bits", a.mantissa, "Bounded precision: mantissa bits n_m");
    cmd->add_option("--exponent-bits", a.exponent, "Bounded precision: exponent bits n_p");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Probabilistic amplitude shaping toolkit: sphere shaping, achievable rates, LDPC link simulation"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    std::function<int()> action;

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit (partial) Maxwell-Boltzmann PMFs to an entropy or energy");
    fit_cmd->add_option("--m", fit.m, "Bits per ASK symbol")->capture_default_str();
    fit_cmd->add_option("--entropy", fit.entropy, "Target H(A) in bits, e.g. 8/3")->capture_default_str();
    fit_cmd->add_option("--energy", fit.energy, "Target E[A^2] instead of an entropy");
    fit_cmd->add_option("--groups", fit.groups, "Group sizes")->delimiter(',')->capture_default_str();
    fit_cmd->add_option("--format", fit.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    fit_cmd->add_option("--out", fit.out, "Output file (default stdout)");
    fit_cmd->callback([&] { action = [&] { return run_fit(fit); }; });

    GapArgs gap;
    auto* gap_cmd = app.add_subcommand("gap-sweep", "Gap to capacity versus H(X) for partial MB inputs");
    gap_cmd->add_option("--m", gap.m, "Bits per ASK symbol")->capture_default_str();
    gap_cmd->add_option("--rate", gap.rate, "Target rate R_t in bit/1-D")->capture_default_str();
    gap_cmd->add_option("--shaped-bits", gap.shaped, "Shaped amplitude bit-levels s")->capture_default_str();
    gap_cmd->add_option("--step", gap.step, "Entropy grid step")->capture_default_str();
    gap_cmd->add_option("--from", gap.from, "First H(X) (default R_t)");
    gap_cmd->add_option("--to", gap.to, "Last H(X) (default m)");
    gap_cmd->add_option("--out", gap.out, "Output CSV (default stdout)");
    gap_cmd->callback([&] { action = [&] { return run_gap(gap); }; });

    RateLossArgs rl;
    auto* rl_cmd = app.add_subcommand("rate-loss", "Finite-length rate loss of sphere shapers and CCDM");
    rl_cmd->add_option("--m", rl.m, "Bits per ASK symbol")->capture_default_str();
    rl_cmd->add_option("--rate", rl.rate, "Amplitude shaping rate, e.g. 8/3")->capture_default_str();
    rl_cmd->add_option("--n", rl.lengths, "Block lengths (default 100,120,...,600)")->delimiter(',');
    rl_cmd->add_option("--schemes", rl.schemes, "s3,s2,s1 (shaped bits) and/or ccdm")
        ->delimiter(',')
        ->capture_default_str();
    rl_cmd->add_option("--out", rl.out, "Output CSV (default stdout)");
    rl_cmd->callback([&] { action = [&] { return run_rate_loss(rl); }; });

    TrellisArgs tb, ti;
    auto* tr_cmd = app.add_subcommand("trellis", "Build or inspect enumerative shaping trellises");
    tr_cmd->require_subcommand(1);
    auto* tb_cmd = tr_cmd->add_subcommand("build", "Build a trellis and store it in binary form");
    add_trellis_options(tb_cmd, tb, false);
    tb_cmd->add_option("--out", tb.out, "Output trellis file")->required();
    tb_cmd->callback([&] { action = [&] { return run_trellis_build(tb); }; });
    auto* ti_cmd = tr_cmd->add_subcommand("info", "Report size, levels and complexity as JSON");
    add_trellis_options(ti_cmd, ti, true);
    ti_cmd->add_option("--out", ti.out, "Output JSON (default stdout)");
    ti_cmd->callback([&] { action = [&] { return run_trellis_info(ti); }; });

    TrellisArgs sh, dsh;
    auto* sh_cmd = app.add_subcommand("shape", "Hex indices on stdin -> comma-separated amplitudes");
    add_trellis_options(sh_cmd, sh, true);
    sh_cmd->callback([&] { action = [&] { return run_shape(sh, false); }; });
    auto* dsh_cmd = app.add_subcommand("deshape", "Comma-separated amplitudes on stdin -> hex indices");
    add_trellis_options(dsh_cmd, dsh, true);
    dsh_cmd->callback([&] { action = [&] { return run_shape(dsh, true); }; });

    SimArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo FER of a PAS link over AWGN");
    sim_cmd->add_option("--config", sim.config, "JSON run configuration")->check(CLI::ExistingFile);
    sim_cmd->add_option("--snr", sim.snr, "SNR points in dB")->delimiter(',');
    sim_cmd->add_option("--seed", sim.seed, "Master seed");
    sim_cmd->add_option("--min-errors", sim.min_errors, "Stop a point after this many frame errors");
    sim_cmd->add_option("--max-frames", sim.max_frames, "Stop a point after this many frames");
    sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = all cores)");
    sim_cmd->add_option("--max-iterations", sim.max_iterations, "Decoder iteration limit");
    sim_cmd->add_option("--config-id", sim.config_id, "Label for the config_id column");
    sim_cmd->add_option("--out", sim.out, "Output CSV (default stdout)");
    sim_cmd->callback([&] { action = [&] { return run_simulate(sim); }; });

    std::string tables_out;
    auto* tab_cmd = app.add_subcommand("tables", "Distribution, shaper and complexity tables as JSON");
    tab_cmd->add_option("--out", tables_out, "Output JSON (default stdout)");
    tab_cmd->callback([&] { action = [&] { return run_tables(tables_out); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    try {
        return action ? action() : kExitConfig;
    } catch (const pas::Error& e) {
        std::cerr << "error (" << pas::to_string(e.kind()) << "): " << e.what() << "\n";
        const bool numerical =
            e.kind() == pas::ErrorKind::numerical_error || e.kind() == pas::ErrorKind::precision_too_small;
        return numerical ? kExitNumerical : kExitConfig;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error (io): " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
