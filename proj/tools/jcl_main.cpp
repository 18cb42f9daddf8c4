// Command-line front end. All rates are given in units of lambda (lambda = 1
// internally), the time column is lambda*t, and runs with identical flags
// produce byte-identical files.
#include "jcloss/model.hpp"
#include "jcloss/offresonant.hpp"
#include "jcloss/oracle.hpp"
#include "jcloss/output.hpp"
#include "jcloss/resonant.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace {

using namespace jcloss;

constexpr int kPathSumDepth = 12;
constexpr double kProbabilitySlack = 1e-9;
constexpr double kTraceTolerance = 1e-8;

struct CommonConfig {
    double gamma = 0.0;
    double delta = 0.0;
    double tmax = 20.0;
    int steps = 2000;
    int cutoff = 0; // 0: automatic per scenario
    std::string method = "analytic";
    std::string output;
    std::string format = "csv";
};

void add_common_flags(CLI::App* cmd, CommonConfig& cfg, bool with_method) {
    cmd->add_option("--gamma", cfg.gamma, "cavity decay rate, units of lambda")->required();
    cmd->add_option("--delta", cfg.delta, "detuning, units of lambda")->capture_default_str();
    cmd->add_option("--tmax", cfg.tmax, "end of the lambda*t grid")->capture_default_str();
    cmd->add_option("--steps", cfg.steps, "grid points including t = 0")->capture_default_str();
    cmd->add_option("--cutoff", cfg.cutoff, "basis truncation override (0 = automatic)")
        ->capture_default_str();
    if (with_method)
        cmd->add_option("--method", cfg.method, "analytic | oracle | both")
            ->check(CLI::IsMember({"analytic", "oracle", "both"}))
            ->capture_default_str();
    cmd->add_option("--output", cfg.output, "output path (default <scenario>.<format>)");
    cmd->add_option("--format", cfg.format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

void validate_common(const CommonConfig& cfg) {
    if (!(cfg.gamma > 0.0)) throw std::invalid_argument("--gamma must be > 0");
    if (!(cfg.tmax > 0.0)) throw std::invalid_argument("--tmax must be > 0");
    if (cfg.steps < 2) throw std::invalid_argument("--steps must be >= 2");
    if (cfg.cutoff < 0) throw std::invalid_argument("--cutoff must be >= 0");
}

std::vector<double> make_grid(double tmax, int steps) {
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i) grid[i] = tmax * double(i) / double(steps - 1);
    return grid;
}

void require_probability(double value, const char* name) {
    if (!(value >= -kProbabilitySlack && value <= 1.0 + kProbabilitySlack))
        throw std::runtime_error(std::string(name) + " out of [0,1]: " + format_double(value));
}

void require_unit_trace(double trace) {
    if (!(std::abs(trace - 1.0) < kTraceTolerance))
        throw std::runtime_error("trace deviates from 1: " + format_double(trace));
}

// Analytic propagation of an initial sector-diagonal state over the grid.
TimeSeries analytic_series(const SectorState& init, const std::vector<double>& grid,
                           const ModelParams& p) {
    TimeSeries ts;
    const PiBasisVector v0 = to_pi_basis(init);
    for (double t : grid) {
        SectorState st(init.cutoff);
        if (p.delta == 0.0) {
            set_populations(st, evolve_diag(v0, t, p));
            st.coherence = evolve_offdiag(init.coherence, t, p);
        } else {
            st.population = evolve_diag_offres(init.population, t, p, kPathSumDepth);
            st.coherence = evolve_offdiag_offres(init.coherence, t, p);
        }
        ts.append(t, observables(p, st));
    }
    return ts;
}

TimeSeries oracle_series(const DenseState& init, const std::vector<double>& grid,
                         const ModelParams& p) {
    const Liouvillian liou = build_microscopic(p, init.cutoff);
    IntegrationResult result = integrate(liou, init, grid);
    if (result.max_trace_drift > kTraceTolerance)
        throw std::runtime_error("oracle trace drift exceeds tolerance: " +
                                 format_double(result.max_trace_drift));
    return result.series;
}

Table observable_table(std::vector<std::pair<std::string, std::string>> header,
                       const TimeSeries* analytic, const TimeSeries* oracle) {
    Table table;
    table.header = std::move(header);
    table.columns = {"lambda_t", "P_g", "n_photon", "P_0g", "trace"};
    if (analytic && oracle) {
        for (const char* name : {"P_g", "n_photon", "P_0g", "trace"})
            table.columns.push_back(std::string(name) + "_oracle");
    }
    const TimeSeries& lead = analytic ? *analytic : *oracle;
    double max_abs_diff = 0.0;
    for (std::size_t i = 0; i < lead.size(); ++i) {
        std::vector<double> row{lead.times[i], lead.p_g[i], lead.n_photon[i], lead.p_0g[i],
                                lead.trace[i]};
        require_probability(lead.p_g[i], "P_g");
        require_unit_trace(lead.trace[i]);
        if (analytic && oracle) {
            row.insert(row.end(), {oracle->p_g[i], oracle->n_photon[i], oracle->p_0g[i],
                                   oracle->trace[i]});
            require_probability(oracle->p_g[i], "P_g_oracle");
            require_unit_trace(oracle->trace[i]);
            max_abs_diff = std::max({max_abs_diff, std::abs(lead.p_g[i] - oracle->p_g[i]),
                                     std::abs(lead.n_photon[i] - oracle->n_photon[i]),
                                     std::abs(lead.p_0g[i] - oracle->p_0g[i]),
                                     std::abs(lead.trace[i] - oracle->trace[i])});
        }
        table.rows.push_back(std::move(row));
    }
    if (analytic && oracle) table.summary.emplace_back("max_abs_diff", max_abs_diff);
    return table;
}

void emit(const Table& table, const CommonConfig& cfg, const std::string& scenario) {
    const std::string path = cfg.output.empty() ? scenario + "." + cfg.format : cfg.output;
    const std::string body = cfg.format == "csv" ? to_csv(table) : to_json(table);
    write_file_atomic(path, body);
    std::printf("wrote %s (%zu rows)\n", path.c_str(), table.rows.size());
    for (const auto& [key, value] : table.summary)
        std::printf("%s = %s\n", key.c_str(), format_double(value).c_str());
}

std::vector<std::pair<std::string, std::string>> base_header(const std::string& scenario,
                                                             const CommonConfig& cfg,
                                                             int cutoff,
                                                             const std::string& method) {
    std::vector<std::pair<std::string, std::string>> header;
    header.emplace_back("jcl_version", kVersion);
    header.emplace_back("scenario", scenario);
    header.emplace_back("gamma", format_double(cfg.gamma));
    header.emplace_back("delta", format_double(cfg.delta));
    header.emplace_back("tmax", format_double(cfg.tmax));
    header.emplace_back("steps", std::to_string(cfg.steps));
    header.emplace_back("cutoff", std::to_string(cutoff));
    if (!method.empty()) header.emplace_back("method", method);
    return header;
}

int run_fock(int n, CommonConfig cfg) {
    validate_common(cfg);
    if (n < 1) throw std::invalid_argument("--n must be >= 1");
    const int cutoff = cfg.cutoff == 0 ? n : cfg.cutoff;
    if (cutoff < n) throw std::invalid_argument("--cutoff must be >= n");
    const bool wants_analytic = cfg.method != "oracle";
    if (wants_analytic && cfg.delta != 0.0 && n > kPathSumDepth)
        throw std::invalid_argument(
            "analytic path sum is capped at excitation 12; use --method oracle");

    const ModelParams p(1.0, cfg.delta, cfg.gamma);
    const std::vector<double> grid = make_grid(cfg.tmax, cfg.steps);

    TimeSeries analytic, oracle;
    if (wants_analytic) {
        SectorState init(cutoff);
        const Mixing m = mixing(p, n);
        init.pop(DressedIndex::plus(n)) = m.cos_theta * m.cos_theta;
        init.pop(DressedIndex::minus(n)) = m.sin_theta * m.sin_theta;
        init.coherence[n - 1] = m.cos_theta * m.sin_theta;
        analytic = analytic_series(init, grid, p);
    }
    if (cfg.method != "analytic")
        oracle = oracle_series(dense_fock_g(p, n, cutoff, BasisKind::Dressed), grid, p);

    auto header = base_header("fock", cfg, cutoff, cfg.method);
    header.emplace(header.begin() + 2, "n", std::to_string(n));
    emit(observable_table(std::move(header), wants_analytic ? &analytic : nullptr,
                          cfg.method != "analytic" ? &oracle : nullptr),
         cfg, "fock");
    return 0;
}

int run_coherent(double alpha, CommonConfig cfg) {
    validate_common(cfg);
    if (!(alpha >= 0.0)) throw std::invalid_argument("--alpha must be >= 0");
    if (alpha > 12.0)
        throw std::invalid_argument("--alpha above 12 overflows the supported cutoff");
    if (cfg.delta != 0.0 && cfg.method != "oracle") {
        std::fprintf(stderr, "note: detuned coherent runs use the oracle integrator\n");
        cfg.method = "oracle";
    }
    const int auto_cutoff = alpha == 0.0 ? 1 : coherent_cutoff(alpha);
    const int cutoff = cfg.cutoff == 0 ? auto_cutoff : cfg.cutoff;
    if (cutoff < 1) throw std::invalid_argument("--cutoff must be >= 1");

    const ModelParams p(1.0, cfg.delta, cfg.gamma);
    const std::vector<double> grid = make_grid(cfg.tmax, cfg.steps);

    TimeSeries analytic, oracle;
    if (cfg.method != "oracle") {
        for (double t : grid) {
            SectorState st(cutoff);
            if (alpha == 0.0)
                st.pop(DressedIndex::ground()) = 1.0;
            else
                st = coherent_solution(alpha, t, p, cutoff);
            analytic.append(t, observables(p, st));
        }
    }
    if (cfg.method != "analytic") {
        const DenseState init = alpha == 0.0 ? dense_fock_g(p, 0, cutoff, BasisKind::Dressed)
                                             : dense_coherent_g(p, alpha, cutoff, BasisKind::Dressed);
        oracle = oracle_series(init, grid, p);
    }

    auto header = base_header("coherent", cfg, cutoff, cfg.method);
    header.emplace(header.begin() + 2, "alpha", format_double(alpha));
    emit(observable_table(std::move(header), cfg.method != "oracle" ? &analytic : nullptr,
                          cfg.method != "analytic" ? &oracle : nullptr),
         cfg, "coherent");
    return 0;
}

int run_compare(const std::string& init, CommonConfig cfg) {
    validate_common(cfg);
    if (init != "g1" && init != "e0") throw std::invalid_argument("--init must be g1 or e0");
    const int cutoff = cfg.cutoff == 0 ? 1 : cfg.cutoff;
    if (cutoff < 1) throw std::invalid_argument("--cutoff must be >= 1");

    const ModelParams p(1.0, cfg.delta, cfg.gamma);
    const std::vector<double> grid = make_grid(cfg.tmax, cfg.steps);

    auto initial = [&](BasisKind basis) {
        return init == "g1" ? dense_fock_g(p, 1, cutoff, basis) : dense_e0(p, cutoff, basis);
    };
    const Liouvillian micro = build_microscopic(p, cutoff);
    const Liouvillian pheno = build_phenomenological(p, cutoff);
    const IntegrationResult ms = integrate(micro, initial(BasisKind::Dressed), grid);
    const IntegrationResult ph = integrate(pheno, initial(BasisKind::Bare), grid);
    if (ms.max_trace_drift > kTraceTolerance || ph.max_trace_drift > kTraceTolerance)
        throw std::runtime_error("oracle trace drift exceeds tolerance");

    Table table;
    table.header = base_header("compare", cfg, cutoff, "");
    table.header.emplace(table.header.begin() + 2, "init", init);
    table.columns = {"lambda_t", "P0g_ms", "P0g_ph", "diff"};
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double a = ms.series.p_0g[i];
        const double b = ph.series.p_0g[i];
        require_probability(a, "P0g_ms");
        require_probability(b, "P0g_ph");
        require_unit_trace(ms.series.trace[i]);
        require_unit_trace(ph.series.trace[i]);
        sup = std::max(sup, std::abs(a - b));
        table.rows.push_back({grid[i], a, b, a - b});
    }
    table.summary.emplace_back("sup_norm_diff", sup);
    emit(table, cfg, "compare");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Zero-temperature dynamics of the lossy Jaynes-Cummings system"};
    app.require_subcommand(1);

    int n = 0;
    double alpha = 0.0;
    std::string init;
    CommonConfig fock_cfg, coherent_cfg, compare_cfg;

    CLI::App* fock = app.add_subcommand("fock", "initial Fock state |g,n>");
    fock->add_option("--n", n, "photon number of the initial state")->required();
    add_common_flags(fock, fock_cfg, true);

    CLI::App* coherent = app.add_subcommand("coherent", "initial coherent state |g,alpha>");
    coherent->add_option("--alpha", alpha, "coherent amplitude")->required();
    add_common_flags(coherent, coherent_cfg, true);

    CLI::App* compare =
        app.add_subcommand("compare", "microscopic vs phenomenological P_0g curves");
    compare->add_option("--init", init, "initial state: g1 | e0")->required();
    add_common_flags(compare, compare_cfg, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (fock->parsed()) return run_fock(n, fock_cfg);
        if (coherent->parsed()) return run_coherent(alpha, coherent_cfg);
        return run_compare(init, compare_cfg);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}
