#include "hawkes/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hawkes/config.hpp"
#include "hawkes/oracle.hpp"
#include "hawkes/parallel.hpp"
#include "hawkes/pricing.hpp"
#include "hawkes/simulate.hpp"
#include "hawkes/validate.hpp"

namespace hawkes {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct CommonArgs {
    std::string config;
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned threads = 0;
    std::string out_dir;
};

std::uint64_t oracle_seed(std::uint64_t seed) { return RngStream{seed, 0}.child(StreamDomain::oracle).key(); }

const Contract& require_contract(const RunConfig& cfg, const char* command) {
    if (!cfg.contract) throw SchemaError("contract", std::string("block required by '") + command + "'");
    return *cfg.contract;
}

ExpansionOptions expansion_options(const Numerics& n) {
    ExpansionOptions eo;
    eo.order = n.order;
    eo.max_order = n.max_order;
    eo.samples_per_term = n.samples_per_term;
    return eo;
}

BoundOptions bound_options(const Numerics& n, std::uint64_t seed) {
    BoundOptions bo;
    bo.n_terms = n.n_terms;
    bo.p_max = n.p_max;
    bo.samples = n.bound_samples;
    bo.volterra_step = n.volterra_step;
    bo.mphi.mc_samples = n.mphi_samples;
    bo.mphi.stream = RngStream{seed, 0};
    return bo;
}

// Severity floor for the deductible bound: explicit, or implied by a constant f.
std::optional<double> severity_floor(const RunConfig& cfg) {
    if (cfg.numerics.severity_floor) return cfg.numerics.severity_floor;
    if (cfg.model.f.kind == ClaimMap::Kind::constant && cfg.model.f.value > 0.0) return cfg.model.f.value;
    return std::nullopt;
}

double mean_g(const RunConfig& cfg, std::uint64_t seed) {
    if (cfg.model.deterministic()) {
        Engine eng(seed);
        return cfg.model.g(cfg.model.draw(eng));
    }
    const RngStream root = RngStream{seed, 0}.child(StreamDomain::claims, 0xD);
    return parallel::reduce_stat(100000, [&](std::size_t i) {
               Engine eng(root.at(i));
               return cfg.model.g(cfg.model.draw(eng));
           })
        .mean();
}

json cmd_simulate(const RunConfig& cfg, std::uint64_t seed, std::string& csv) {
    const auto& params = cfg.params;
    std::ostringstream os;
    os << kPathCsvHeader << '\n';
    json paths = json::array();
    double total = 0.0;
    for (std::size_t i = 0; i < cfg.numerics.simulate_paths; ++i) {
        const RngStream s{seed, i};
        const EventPath p = simulate_standard(params, s);
        write_csv_rows(os, i, p);
        ClaimSequence claims(cfg.model, s.child(StreamDomain::claims));
        double L = 0.0;
        double K = 0.0;
        for (std::size_t j = 0; j < p.size(); ++j) {
            const double d = cfg.model.discount(params.horizon, p.events[j].time);
            L += d * cfg.model.f(claims[j]);
            K += d * cfg.model.g(claims[j]);
        }
        total += static_cast<double>(p.size());
        paths.push_back({{"path_id", i},
                         {"count", p.size()},
                         {"spontaneous", p.count(EventTag::spontaneous)},
                         {"excited", p.count(EventTag::excited)},
                         {"L_T", L},
                         {"K_T", K}});
    }
    csv = os.str();
    const double n = static_cast<double>(std::max<std::size_t>(cfg.numerics.simulate_paths, 1));
    return {{"command", "simulate"},
            {"seed", seed},
            {"paths", paths},
            {"mean_count", total / n},
            {"mean_intensity_bound", mean_intensity_bound(params)},
            {"config", cfg.echo}};
}

json cmd_mphi(const RunConfig& cfg, std::uint64_t seed, std::string& csv) {
    MPhiOptions mo;
    mo.method = cfg.numerics.mphi_method;
    mo.mc_samples = cfg.numerics.mphi_samples;
    mo.stream = RngStream{seed, 0};
    std::ostringstream os;
    os << "n,value,stderr,method,upper_bound\n" << std::setprecision(12);
    json rows = json::array();
    for (std::size_t n = 1; n <= cfg.numerics.mphi_order; ++n) {
        const auto r = m_phi(cfg.params.kernel, cfg.params.horizon, n, mo);
        const double ub = m_phi_upper_bound(cfg.params.kernel, cfg.params.horizon, n);
        os << n << ',' << r.value << ',' << r.std_error << ',' << method_name(r.method) << ',' << ub << '\n';
        rows.push_back({{"n", n},
                        {"value", r.value},
                        {"stderr", r.std_error},
                        {"method", method_name(r.method)},
                        {"upper_bound", ub}});
    }
    csv = os.str();
    return {{"command", "mphi"}, {"seed", seed}, {"mphi", rows}, {"config", cfg.echo}};
}

json cmd_price(const RunConfig& cfg, std::uint64_t seed) {
    const auto& contract = require_contract(cfg, "price");
    const auto& num = cfg.numerics;
    const auto series = premium_expansion(contract, cfg.params, cfg.model, expansion_options(num), RngStream{seed, 0},
                                          num.inner_draws);
    const auto oracle = mc_premium(contract, cfg.params, cfg.model, num.paths, oracle_seed(seed));
    const auto split = poisson_surplus(series);
    json report{{"command", "price"},
                {"seed", seed},
                {"premium_series", to_json(series)},
                {"oracle", to_json(oracle)},
                {"poisson_part", split.poisson_part},
                {"surplus_part", split.surplus_part},
                {"surplus_stderr", split.surplus_stderr}};
    if (contract.has_band())
        report["decomposition"] = to_json(premium_decomposition_mc(contract, cfg.params, cfg.model, num.paths,
                                                                   oracle_seed(seed)));
    const auto floor = severity_floor(cfg);
    if (contract.h.kind == Payoff::Kind::stoploss && cfg.model.kappa == 0.0 && floor) {
        MPhiOptions mo;
        mo.stream = RngStream{seed, 0};
        mo.mc_samples = num.mphi_samples;
        report["deductible_surplus"] =
            to_json(deductible_surplus_lower_bound(cfg.params.mu, mean_g(cfg, seed), contract.h.lower, *floor,
                                                   cfg.params.kernel, cfg.params.horizon, num.n_terms, mo));
    }
    report["config"] = cfg.echo;
    return report;
}

json cmd_bounds(const RunConfig& cfg, std::uint64_t seed) {
    const auto& contract = require_contract(cfg, "bounds");
    const auto& num = cfg.numerics;
    const auto bounds = premium_bounds(contract, cfg.params, cfg.model, bound_options(num, seed), RngStream{seed, 0});
    const auto series = premium_expansion(contract, cfg.params, cfg.model, expansion_options(num), RngStream{seed, 0},
                                          num.inner_draws);
    const auto oracle = mc_premium(contract, cfg.params, cfg.model, num.paths, oracle_seed(seed));
    const auto split = poisson_surplus(series);
    json report = to_json(bounds);
    report["command"] = "bounds";
    report["seed"] = seed;
    report["premium_series"] = to_json(series);
    report["oracle"] = to_json(oracle);
    report["poisson_part"] = split.poisson_part;
    report["surplus_part"] = split.surplus_part;
    report["config_echo"] = cfg.echo;
    return report;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

int execute(const std::string& command, const CommonArgs& args, std::ostream& out) {
    const RunConfig cfg = load_config(args.config);
    const std::uint64_t seed = args.seed_given ? args.seed : cfg.numerics.seed;
    parallel::set_thread_count(args.threads);

    json report;
    std::string csv;
    int code = kExitOk;
    if (command == "simulate") {
        report = cmd_simulate(cfg, seed, csv);
    } else if (command == "mphi") {
        report = cmd_mphi(cfg, seed, csv);
    } else if (command == "price") {
        report = cmd_price(cfg, seed);
    } else if (command == "bounds") {
        report = cmd_bounds(cfg, seed);
    } else {
        report = run_validation(cfg, seed);
        if (report.at("violations").get<std::size_t>() > 0) code = kExitViolation;
    }
    const std::string text = report.dump(2) + "\n";
    if (args.out_dir.empty()) {
        out << text;
        return code;
    }
    const fs::path dir(args.out_dir);
    fs::create_directories(dir);
    write_file(dir / "report.json", text);
    if (command == "simulate") write_file(dir / "paths.csv", csv);
    if (command == "mphi") write_file(dir / "mphi.csv", csv);
    out << command << ": wrote " << (dir / "report.json").string();
    if (command == "validate") out << " (" << report.at("violations").get<std::size_t>() << " violations)";
    out << '\n';
    return code;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hawkes loss-process engine: simulation, premium series, bounds and validation"};
    app.require_subcommand(1, 1);
    CommonArgs common;
    const std::vector<std::pair<const char*, const char*>> commands = {
        {"simulate", "simulate standard paths and dump them as CSV"},
        {"mphi", "table of simplex integrals m_Phi(Delta^n)"},
        {"price", "premium series, Monte Carlo oracle and Poisson/surplus split"},
        {"bounds", "lower and upper premium bounds"},
        {"validate", "run the invariant suite; exit 3 on any violation"}};
    for (const auto& [name, help] : commands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("config,-c,--config", common.config, "TOML or JSON run configuration")->required();
        sub->add_option("--seed", common.seed, "override numerics.seed");
        sub->add_option("--threads", common.threads, "worker threads (default: HAWKES_THREADS or all cores)");
        sub->add_option("--out", common.out_dir, "directory for report.json and CSV outputs");
    }

    std::vector<std::string> argv_store = args;
    std::vector<char*> argv;
    for (auto& a : argv_store) argv.push_back(a.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    for (const auto* sub : app.get_subcommands()) {
        common.seed_given = sub->count("--seed") > 0;
        try {
            return execute(sub->get_name(), common, out);
        } catch (const SchemaError& e) {
            err << "config error: " << e.what() << '\n';
            return kExitSchema;
        } catch (const std::exception& e) {
            err << "error: " << e.what() << '\n';
            return kExitFailure;
        }
    }
    return kExitUsage;
}

int run_command(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run_command(args, std::cout, std::cerr);
}

}  // namespace hawkes
