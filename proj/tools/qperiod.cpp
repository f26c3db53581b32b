// qperiod: quantum periods of Fano manifolds from convenient weak
// Landau-Ginzburg models, conifold points, random-walk diagnostics, and
// series concentration measurements.
//
// Exit codes: 0 success, 1 I/O or environment failure, 2 domain validation.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qperiod/catalog.hpp"
#include "qperiod/concentration.hpp"
#include "qperiod/conifold.hpp"
#include "qperiod/hypergeom.hpp"
#include "qperiod/laurent.hpp"
#include "qperiod/series.hpp"
#include "qperiod/walk.hpp"

using namespace qp;

namespace {

struct CommonArgs {
    std::string catalog_name;
    std::string model_path;
    std::string out_format = "csv";
    std::string output_path;
    unsigned precision = kDefaultPrecisionBits;
};

struct LoadedModel {
    LaurentPolynomial model;
    std::string name;
};

LoadedModel load_model(const CommonArgs& args) {
    if (!args.catalog_name.empty() && !args.model_path.empty())
        throw validation_error("pass either --catalog or --model, not both");
    if (!args.catalog_name.empty()) {
        const CatalogEntry* entry = find_catalog(args.catalog_name);
        if (!entry) {
            std::string names;
            for (const auto& n : catalog_names()) names += " " + n;
            throw validation_error("unknown catalog model \"" + args.catalog_name +
                                   "\"; available:" + names);
        }
        return {entry->model, entry->name};
    }
    if (args.model_path.empty())
        throw validation_error("a model is required: --catalog NAME or --model PATH");
    return {load_model_file(args.model_path), args.model_path};
}

std::string hex64(std::uint64_t v) {
    std::ostringstream os;
    os << "0x" << std::hex << std::setfill('0') << std::setw(16) << v;
    return os.str();
}

std::string fmt_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// Header block shared by all reports; deliberately free of timestamps so
// identical invocations emit identical bytes.
struct Meta {
    std::string command;
    std::string model;
    std::string model_hash;
    unsigned precision = 0;
    std::optional<std::uint64_t> seed;
    std::vector<std::pair<std::string, std::string>> extra;

    std::string to_csv_header() const {
        std::ostringstream os;
        os << "# " << kToolName << " " << kToolVersion << "\n";
        os << "# schema v1\n";
        os << "# command " << command << "\n";
        if (!model.empty()) os << "# model " << model << " " << model_hash << "\n";
        os << "# precision " << precision << "\n";
        if (seed) os << "# seed " << *seed << "\n";
        for (const auto& [k, v] : extra) os << "# " << k << " " << v << "\n";
        return os.str();
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["tool"] = kToolName;
        j["version"] = kToolVersion;
        j["schema"] = "v1";
        j["command"] = command;
        if (!model.empty()) {
            j["model"] = model;
            j["model_hash"] = model_hash;
        }
        j["precision"] = precision;
        if (seed) j["seed"] = *seed;
        for (const auto& [k, v] : extra) j[k] = v;
        return j;
    }
};

void emit(const CommonArgs& args, const std::string& text) {
    if (args.output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(args.output_path, std::ios::binary);
    if (!out) throw io_error("cannot open output file: " + args.output_path);
    out << text;
    if (!out) throw io_error("failed writing output file: " + args.output_path);
}

std::vector<Real> parse_grid(const std::string& spec, unsigned precision) {
    ScopedPrecision prec(precision);
    auto fail = [&]() -> std::vector<Real> {
        throw validation_error("bad --grid, expected lo:hi:geomN or lo:hi:linN, got \"" +
                               spec + "\"");
    };
    auto c1 = spec.find(':');
    auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) return fail();
    Real lo = real_from_decimal(spec.substr(0, c1), precision);
    Real hi = real_from_decimal(spec.substr(c1 + 1, c2 - c1 - 1), precision);
    std::string tail = spec.substr(c2 + 1);
    bool geom = tail.rfind("geom", 0) == 0;
    bool lin = tail.rfind("lin", 0) == 0;
    if (!geom && !lin) return fail();
    int count = 0;
    try {
        count = std::stoi(tail.substr(geom ? 4 : 3));
    } catch (const std::exception&) {
        return fail();
    }
    if (count < 2 || lo <= 0 || hi <= lo)
        throw validation_error("bad --grid: need 0 < lo < hi and at least 2 points");
    std::vector<Real> grid;
    for (int i = 0; i < count; ++i) {
        if (geom) {
            grid.push_back(lo * pow(hi / lo, Real(i) / (count - 1)));
        } else {
            grid.push_back(lo + (hi - lo) * Real(i) / (count - 1));
        }
    }
    return grid;
}

// Default grid: 8 doubling points starting where the window spans at least
// five indices.
std::vector<Real> default_grid(const RealPolynomial& location, const Real& window_c,
                               const Real& window_nu) {
    Real x = 1;
    for (int guard = 0; guard < 64; ++guard) {
        if (location(x) * window_c * pow(x, -window_nu) >= 5) break;
        x *= 2;
    }
    std::vector<Real> grid;
    for (int i = 0; i < 8; ++i) {
        grid.push_back(x);
        x *= 2;
    }
    return grid;
}

int cmd_period(const CommonArgs& args, int n_max) {
    ScopedPrecision prec(args.precision);
    auto loaded = load_model(args);
    auto seq = quantum_period(loaded.model, n_max, CstMethod::Auto, loaded.name);

    Meta meta;
    meta.command = "period";
    meta.model = loaded.name;
    meta.model_hash = hex64(model_hash(loaded.model));
    meta.precision = args.precision;
    meta.extra = {{"n_max", std::to_string(n_max)},
                  {"index_r", std::to_string(seq.index_r)},
                  {"index_method",
                   "empirical-gcd(horizon=" +
                       std::to_string(std::max(n_max, kDefaultIndexHorizon)) + ")"}};

    if (args.out_format == "csv") {
        std::ostringstream os;
        os << meta.to_csv_header();
        os << "n,g_num,g_den,regularized\n";
        for (int n = 0; n <= n_max; ++n) {
            const auto& g = seq.g[static_cast<std::size_t>(n)];
            os << n << "," << numerator(g).str() << "," << denominator(g).str() << ","
               << format_rational(seq.regularized[static_cast<std::size_t>(n)]) << "\n";
        }
        emit(args, os.str());
    } else {
        nlohmann::json j;
        j["meta"] = meta.to_json();
        j["index_r"] = seq.index_r;
        j["rows"] = nlohmann::json::array();
        for (int n = 0; n <= n_max; ++n) {
            const auto& g = seq.g[static_cast<std::size_t>(n)];
            j["rows"].push_back({{"n", n},
                                 {"g_num", numerator(g).str()},
                                 {"g_den", denominator(g).str()},
                                 {"regularized",
                                  format_rational(seq.regularized[static_cast<std::size_t>(n)])}});
        }
        emit(args, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_conifold(const CommonArgs& args) {
    ScopedPrecision prec(args.precision);
    auto loaded = load_model(args);
    ConifoldOptions opts;
    opts.precision_bits = args.precision;
    opts.tol_log2 = -static_cast<int>(args.precision * 3 / 4);
    auto res = find_conifold(loaded.model, opts);

    Meta meta;
    meta.command = "conifold";
    meta.model = loaded.name;
    meta.model_hash = hex64(model_hash(loaded.model));
    meta.precision = args.precision;

    unsigned digits = digits10_for_bits(args.precision);
    nlohmann::json j;
    j["meta"] = meta.to_json();
    j["point"] = nlohmann::json::array();
    for (const auto& coord : res.point) j["point"].push_back(format_real(coord, digits));
    j["value"] = format_real(res.value, digits);
    j["hessian_log_det"] = format_real(res.hessian_log_det, digits);
    j["gradient_norm"] = format_real(res.gradient_norm, 8);
    j["iterations"] = res.iterations;
    emit(args, j.dump(2) + "\n");
    return 0;
}

int cmd_concentrate(const CommonArgs& args, const std::string& hypergeom_path,
                    const std::string& nu_text, const std::string& grid_spec, int n_max,
                    bool exploratory) {
    ScopedPrecision prec(args.precision);
    Real nu = real_from_decimal(nu_text, args.precision);
    if (!exploratory && !(nu > 0 && nu < Real(1) / 2))
        throw validation_error("--nu must lie in (0, 1/2); pass --exploratory to probe "
                               "other windows");
    if (nu <= 0) throw validation_error("--nu must be positive");

    Meta meta;
    meta.command = "concentrate";
    meta.precision = args.precision;
    meta.extra.push_back({"nu", nu_text});

    ConcentrationReport report;
    if (!hypergeom_path.empty()) {
        auto spec = HypergeomSpec::load_file(hypergeom_path, args.precision);
        meta.model = hypergeom_path;
        meta.model_hash = hex64(fnv1a64(hypergeom_path));
        auto grid = grid_spec.empty()
                        ? default_grid(RealPolynomial::linear(spec.peak_coefficient()),
                                       pow(spec.peak_coefficient(), -nu), nu)
                        : parse_grid(grid_spec, args.precision);
        double nu_d = nu.convert_to<double>();
        if (exploratory && !(nu_d > 0.0 && nu_d < 0.5)) {
            ConcentrationConfig config;
            config.location = RealPolynomial::linear(spec.peak_coefficient());
            config.window_nu = nu;
            config.window_c = pow(spec.peak_coefficient(), -nu);
            report = measure(series_oracle(spec, args.precision), config, grid,
                             args.precision);
        } else {
            report = evaluate_and_measure(spec, nu_d, grid, args.precision);
        }
        meta.extra.push_back({"kappa", std::to_string(spec.kappa())});
        meta.extra.push_back({"peak_coefficient", format_real(spec.peak_coefficient(), 30)});
    } else {
        auto loaded = load_model(args);
        meta.model = loaded.name;
        meta.model_hash = hex64(model_hash(loaded.model));
        auto seq = quantum_period(loaded.model, n_max, CstMethod::Auto, loaded.name);
        auto est = estimate_t_a_con(seq, args.precision);
        ConcentrationConfig config;
        config.location = RealPolynomial::linear(est.value);
        config.window_nu = nu;
        config.window_c = pow(est.value, -nu);
        PeriodOracle oracle(loaded.model, args.precision);
        auto grid = grid_spec.empty()
                        ? default_grid(config.location, config.window_c, config.window_nu)
                        : parse_grid(grid_spec, args.precision);
        report = measure(oracle.as_oracle(), config, grid, args.precision);
        meta.extra.push_back({"t_a_con", format_real(est.value, 30)});
        meta.extra.push_back({"t_a_con_gap", fmt_double(est.agreement_gap)});
    }

    if (args.out_format == "csv") {
        emit(args, meta.to_csv_header() + report.to_csv());
    } else {
        nlohmann::json j;
        j["meta"] = meta.to_json();
        j["report"] = report.to_json();
        emit(args, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_walk(const CommonArgs& args, int n_max, std::int64_t trials, std::uint64_t seed) {
    ScopedPrecision prec(args.precision);
    auto loaded = load_model(args);
    const int m = loaded.model.num_vars();

    ConifoldOptions opts;
    opts.precision_bits = args.precision;
    opts.tol_log2 = -static_cast<int>(args.precision * 3 / 4);
    auto coni = find_conifold(loaded.model, opts);
    int r = detect_index(loaded.model, std::max(kDefaultIndexHorizon, 12));

    auto q = return_probabilities(loaded.model, r, coni.value, n_max, args.precision);
    auto fit = fit_lclt(q, m, default_lclt_fit_start(n_max));

    auto g = power(loaded.model, static_cast<unsigned>(r));
    auto gconi = find_conifold(g, opts);
    auto dist = step_distribution(g, gconi, args.precision);

    Meta meta;
    meta.command = "walk";
    meta.model = loaded.name;
    meta.model_hash = hex64(model_hash(loaded.model));
    meta.precision = args.precision;
    meta.seed = seed;
    meta.extra = {{"n_max", std::to_string(n_max)},
                  {"trials", std::to_string(trials)},
                  {"index_r", std::to_string(r)}};

    const int mc_rows = std::min(n_max, 10);
    std::vector<MonteCarloResult> mc;
    for (int n = 1; n <= mc_rows; ++n)
        mc.push_back(monte_carlo_return(dist, n, trials, seed + static_cast<std::uint64_t>(n)));

    if (args.out_format == "csv") {
        std::ostringstream os;
        os << meta.to_csv_header();
        os << "n_prime,q,mc_estimate,mc_std_error\n";
        for (std::size_t n = 0; n < q.size(); ++n) {
            os << n << "," << format_real(q[n], 30);
            if (n >= 1 && n <= static_cast<std::size_t>(mc_rows)) {
                const auto& row = mc[n - 1];
                os << "," << fmt_double(row.estimate) << "," << fmt_double(row.std_error);
            } else {
                os << ",,";
            }
            os << "\n";
        }
        os << "# fit,c_hat," << format_real(fit.c_hat, 20) << "\n";
        os << "# fit,m_over_2_check," << fmt_double(fit.m_over_2_check) << "\n";
        os << "# fit,residual_exponent," << fmt_double(fit.residual_exponent) << "\n";
        os << "# fit,n_min_fit," << fit.n_min_fit << "\n";
        emit(args, os.str());
    } else {
        nlohmann::json j;
        j["meta"] = meta.to_json();
        j["lclt"] = {{"c_hat", format_real(fit.c_hat, 20)},
                     {"b_hat", fit.b_hat},
                     {"m_over_2_check", fit.m_over_2_check},
                     {"residual_exponent", fit.residual_exponent},
                     {"n_min_fit", fit.n_min_fit},
                     {"dim", fit.dim}};
        j["samples"] = nlohmann::json::array();
        for (std::size_t n = 0; n < q.size(); ++n)
            j["samples"].push_back(format_real(q[n], 30));
        j["monte_carlo"] = nlohmann::json::array();
        for (int n = 1; n <= mc_rows; ++n) {
            const auto& row = mc[static_cast<std::size_t>(n - 1)];
            j["monte_carlo"].push_back({{"n_prime", n},
                                        {"estimate", row.estimate},
                                        {"std_error", row.std_error},
                                        {"hits", row.hits},
                                        {"trials", row.trials}});
        }
        emit(args, j.dump(2) + "\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum periods of Fano manifolds from weak Landau-Ginzburg models"};
    app.require_subcommand(1);

    CommonArgs common;
    int n_max = 60;
    std::string nu_text = "0.25";
    std::string grid_spec;
    std::string hypergeom_path;
    std::int64_t trials = 100000;
    std::uint64_t seed = 1;
    bool exploratory = false;

    auto add_common = [&](CLI::App* cmd, bool with_model = true) {
        if (with_model) {
            cmd->add_option("--catalog", common.catalog_name, "built-in model name");
            cmd->add_option("--model", common.model_path, "model JSON path");
        }
        cmd->add_option("--precision", common.precision, "working precision in bits");
        cmd->add_option("--out", common.out_format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--output", common.output_path, "output file (default stdout)");
    };

    auto* period = app.add_subcommand("period", "exact quantum period table");
    add_common(period);
    period->add_option("--n-max", n_max, "largest n");

    auto* conifold = app.add_subcommand("conifold", "conifold point and value");
    add_common(conifold);

    auto* concentrate =
        app.add_subcommand("concentrate", "head/tail concentration measurement");
    add_common(concentrate);
    concentrate->add_option("--hypergeom", hypergeom_path, "hypergeometric spec JSON");
    concentrate->add_option("--nu", nu_text, "window exponent nu");
    concentrate->add_option("--grid", grid_spec, "lo:hi:geomN or lo:hi:linN");
    concentrate->add_option("--n-max", n_max, "period horizon for the T estimate");
    concentrate->add_flag("--exploratory", exploratory, "allow nu outside (0, 1/2)");

    auto* walk = app.add_subcommand("walk", "return probabilities, LCLT fit, Monte Carlo");
    add_common(walk);
    walk->add_option("--n-max", n_max, "number of g-steps");
    walk->add_option("--trials", trials, "Monte Carlo trials");
    walk->add_option("--seed", seed, "Monte Carlo seed");

    n_max = 60;
    try {
        app.parse(argc, argv);
        if (period->parsed()) {
            if (!period->count("--n-max")) n_max = 60;
            return cmd_period(common, n_max);
        }
        if (conifold->parsed()) return cmd_conifold(common);
        if (concentrate->parsed()) {
            if (!concentrate->count("--n-max")) n_max = 400;
            return cmd_concentrate(common, hypergeom_path, nu_text, grid_spec, n_max,
                                   exploratory);
        }
        if (walk->parsed()) {
            if (!walk->count("--n-max")) n_max = 400;
            return cmd_walk(common, n_max, trials, seed);
        }
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
