#pragma once

#include <chrono>
#include <filesystem>
#include <iostream>

#include "liewave/analysis.hpp"
#include "liewave/config.hpp"
#include "liewave/report.hpp"
#include "liewave/version.hpp"

namespace liewave {

/// Exit codes of the `run` front end.
enum ExitCode : int {
    kExitPass = 0,
    kExitFail = 1,
    kExitConfigError = 2,
    kExitNumericalAbort = 3,
};

struct ExperimentResult {
    bool pass = false;
    int failure_exit = kExitFail;  // kExitNumericalAbort for blow-up style aborts
    nlohmann::ordered_json verdicts;
    std::vector<CsvTable> tables;
    std::vector<std::pair<std::string, SpectralField>> coefficient_dumps;
    std::vector<std::string> warnings;
};

namespace experiments {

inline CauchyData realize_data(const RunConfig& cfg, const HarmonicPlan& plan) {
    CauchyData d;
    d.u0 = realize_preset(cfg.data.u0, plan);
    d.u1 = realize_preset(cfg.data.u1, plan);
    d.epsilon = cfg.data.epsilon;
    return d;
}

inline std::uint64_t base_seed(const RunConfig& cfg) {
    return cfg.data.u0.kind == DataPreset::Kind::Random ? cfg.data.u0.seed : 1;
}

// --- plancherel_check: grid L² vs spectral norm over random fields ---------

inline ExperimentResult run_plancherel_check(const RunConfig& cfg) {
    HarmonicPlan plan(make_grid(cfg.group, cfg.solver.oversample));
    const int n_fields = 100;
    const double threshold = 1e-10;
    const std::uint64_t seed = base_seed(cfg);

    std::vector<double> defects(n_fields);
    parallel_for(static_cast<std::size_t>(n_fields), [&](std::size_t i) {
        auto F = random_field(plan, seed + i, false);
        defects[i] = std::abs(plancherel_norm(F) - lq_norm(plan.inverse(F), 2.0));
    });

    ExperimentResult res;
    CsvTable table;
    table.name = "plancherel_defects";
    table.columns = {"field", "defect"};
    double max_defect = 0.0;
    for (int i = 0; i < n_fields; ++i) {
        table.add_row({std::to_string(i), fmt17(defects[i])});
        max_defect = std::max(max_defect, defects[i]);
    }
    res.tables.push_back(std::move(table));
    res.pass = max_defect < threshold;
    res.verdicts["fields"] = n_fields;
    res.verdicts["seed"] = seed;
    res.verdicts["max_defect"] = max_defect;
    res.verdicts["threshold"] = threshold;
    res.verdicts["pass"] = res.pass;
    return res;
}

// --- linear_decay: the four weighted decay ratios ---------------------------

inline ExperimentResult run_linear_decay(const RunConfig& cfg) {
    HarmonicPlan plan(make_grid(cfg.group, cfg.solver.oversample));
    CauchyData data = realize_data(cfg, plan);
    auto times = default_decay_times();
    DecayReport rep = verify_decay_bounds(data, times);

    ExperimentResult res;
    CsvTable table;
    table.name = "decay";
    table.columns = {"t", "norm1", "norm2", "norm3", "norm4", "ratio1", "ratio2", "ratio3", "ratio4"};
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::vector<std::string> row{fmt17(times[k])};
        for (int i = 0; i < 4; ++i) row.push_back(fmt17(rep.norms[i][k]));
        for (int i = 0; i < 4; ++i) row.push_back(fmt17(rep.ratios[i][k]));
        table.add_row(std::move(row));
    }
    res.tables.push_back(std::move(table));

    res.pass = rep.all_pass;
    nlohmann::ordered_json estimates = nlohmann::ordered_json::array();
    for (int i = 0; i < 4; ++i) {
        nlohmann::ordered_json v;
        v["rate"] = rep.rates[i];
        v["data_norm"] = rep.data_norms[i];
        v["window_max"] = rep.verdicts[i].window_max;
        v["empirical_constant"] = rep.verdicts[i].overall_max;
        v["early_sup_pass"] = rep.verdicts[i].early_sup_pass;
        v["trend_pass"] = rep.verdicts[i].trend_pass;
        v["pass"] = rep.verdicts[i].pass;
        estimates.push_back(v);
    }
    res.verdicts["estimates"] = estimates;
    res.verdicts["pass"] = res.pass;

    if (cfg.output.dump_coefficients) {
        for (std::size_t k = 0; k < times.size(); ++k) {
            auto st = evolve_homogeneous(data, times[k]);
            char name[64];
            std::snprintf(name, sizeof(name), "coefficients_%04zu", k);
            res.coefficient_dumps.emplace_back(name, std::move(st.u));
        }
    }
    return res;
}

// --- l1_experiment: the zero-mode obstruction --------------------------------

inline ExperimentResult run_l1_experiment(const RunConfig& cfg) {
    auto rep = l1_no_improvement_experiment(cfg.group, 30.0, 0.5, base_seed(cfg));

    ExperimentResult res;
    CsvTable table;
    table.name = "l1_experiment";
    table.columns = {"t", "norm_nonzero_mean", "norm_mean_zero"};
    for (std::size_t k = 0; k < rep.times.size(); ++k)
        table.add_row({fmt17(rep.times[k]), fmt17(rep.norm_nonzero_mean[k]), fmt17(rep.norm_mean_zero[k])});
    res.tables.push_back(std::move(table));

    res.pass = rep.pass;
    res.verdicts["limit"] = rep.limit;
    res.verdicts["final_nonzero_mean"] = rep.final_nonzero_mean;
    res.verdicts["final_mean_zero"] = rep.final_mean_zero;
    res.verdicts["no_decay_pass"] = rep.no_decay_pass;
    res.verdicts["delta1"] = rep.delta1;
    res.verdicts["fitted_rate_mean_zero"] = rep.fitted_rate_mean_zero;
    res.verdicts["decay_pass"] = rep.decay_pass;
    res.verdicts["chain_max_ratio"] = rep.chain_max_ratio;
    res.verdicts["chain_constant"] = 2.0;
    res.verdicts["chain_pass"] = rep.chain_pass;
    res.verdicts["pass"] = res.pass;
    return res;
}

// --- semilinear: Picard iteration on the mild-solution operator -------------

inline ExperimentResult run_semilinear(const RunConfig& cfg, std::vector<std::string> warnings) {
    HarmonicPlan plan(make_grid(cfg.group, cfg.solver.oversample));
    CauchyData data = realize_data(cfg, plan);
    PicardReport rep = picard_solve(data, cfg.solver);

    ExperimentResult res;
    res.warnings = std::move(warnings);

    CsvTable traj;
    traj.name = "trajectory";
    traj.columns = {"t", "panel_boundary", "norm1", "norm2", "norm3", "norm4"};
    for (std::size_t i = 0; i < rep.trajectory.size(); ++i) {
        const auto n = energy_norms(rep.trajectory[i]);
        traj.add_row({fmt17(rep.trajectory[i].t), rep.is_panel_boundary[i] ? "1" : "0", fmt17(n[0]),
                      fmt17(n[1]), fmt17(n[2]), fmt17(n[3])});
    }
    res.tables.push_back(std::move(traj));

    CsvTable iters;
    iters.name = "picard_iterations";
    iters.columns = {"iteration", "xT_diff", "ratio"};
    for (std::size_t k = 0; k < rep.diffs.size(); ++k)
        iters.add_row({std::to_string(k + 1), fmt17(rep.diffs[k]),
                       k > 0 && rep.diffs[k - 1] > 0.0 ? fmt17(rep.diffs[k] / rep.diffs[k - 1]) : "nan"});
    res.tables.push_back(std::move(iters));

    if (cfg.output.dump_coefficients) {
        std::size_t dumped = 0;
        for (std::size_t i = 0; i < rep.trajectory.size(); ++i) {
            if (!rep.is_panel_boundary[i]) continue;
            char name[64];
            std::snprintf(name, sizeof(name), "coefficients_%04zu", dumped++);
            res.coefficient_dumps.emplace_back(name, rep.trajectory[i].u);
        }
    }

    res.pass = rep.success();
    res.failure_exit = rep.blew_up ? kExitNumericalAbort : kExitFail;
    res.verdicts["converged"] = rep.converged;
    res.verdicts["iterations"] = rep.iterations;
    res.verdicts["rho_hat"] = rep.rho_hat;
    res.verdicts["contraction_ok"] = rep.contraction_ok;
    res.verdicts["fixed_point_residual"] = rep.fixed_point_residual;
    res.verdicts["blew_up"] = rep.blew_up;
    res.verdicts["diagnostic"] = rep.diagnostic;
    res.verdicts["pass"] = res.pass;
    return res;
}

// --- gn_check: Gagliardo-Nirenberg ratio corpus ------------------------------

inline ExperimentResult run_gn_check(const RunConfig& cfg) {
    const double q = 2.0 * cfg.solver.p;
    const int corpus_size = 100;
    const std::uint64_t seed = base_seed(cfg);

    // constant-field ratio must be exactly 1
    HarmonicPlan plan(make_grid(cfg.group, 2.0));
    GridField c(plan.grid(), std::vector<Complex>(plan.grid().node_count(), Complex(1.0, 0.0)));
    const double rho_const = gn_ratio_check(c, q).rho;

    GroupSpec doubled = cfg.group;
    doubled.bandlimit *= 2;
    auto lo = gn_corpus_study(cfg.group, q, corpus_size, seed);
    auto hi = gn_corpus_study(doubled, q, corpus_size, seed + 7919);

    ExperimentResult res;
    CsvTable table;
    table.name = "gn_ratios";
    table.columns = {"bandlimit", "field", "rho"};
    for (int i = 0; i < corpus_size; ++i)
        table.add_row({std::to_string(lo.bandlimit), std::to_string(i), fmt17(lo.rhos[i])});
    for (int i = 0; i < corpus_size; ++i)
        table.add_row({std::to_string(hi.bandlimit), std::to_string(i), fmt17(hi.rhos[i])});
    res.tables.push_back(std::move(table));

    const double growth = hi.max_rho / lo.max_rho - 1.0;
    const bool const_ok = std::abs(rho_const - 1.0) < 1e-12;
    const bool stable = growth < 0.05;
    res.pass = const_ok && stable;
    res.verdicts["q"] = q;
    res.verdicts["theta"] = gn_theta(cfg.group.topological_dim(), q);
    res.verdicts["constant_field_rho"] = rho_const;
    res.verdicts["constant_field_pass"] = const_ok;
    res.verdicts["max_rho"] = lo.max_rho;
    res.verdicts["max_rho_doubled_bandlimit"] = hi.max_rho;
    res.verdicts["growth"] = growth;
    res.verdicts["stability_pass"] = stable;
    res.verdicts["pass"] = res.pass;
    return res;
}

// --- multiplier_check: kernel envelopes per occupied region ------------------

inline ExperimentResult run_multiplier_check(const RunConfig& cfg) {
    auto dual = enumerate_dual(cfg.group);
    auto gaps = spectral_gaps(dual);
    std::vector<double> t_grid;
    for (double t = 0.0; t <= 30.0 + 1e-12; t += 0.1) t_grid.push_back(t);

    ExperimentResult res;
    CsvTable table;
    table.name = "multiplier_bounds";
    table.columns = {"region", "kernel", "sup_ratio", "sup_refined", "growth", "pass"};
    res.pass = true;
    nlohmann::ordered_json regions = nlohmann::ordered_json::array();
    for (Region region : {Region::R1, Region::R2, Region::R3, Region::R4}) {
        std::vector<Rational> samples;
        for (const auto& rep : dual)
            if (rep.region == region) {
                bool seen = false;
                for (const auto& s : samples) seen = seen || s == rep.eigenvalue;
                if (!seen) samples.push_back(rep.eigenvalue);
            }
        if (samples.empty()) continue;
        auto rep = multiplier_bound_check(region, gaps, t_grid, samples);
        nlohmann::ordered_json r;
        r["region"] = region_name(region);
        r["eigenvalues"] = static_cast<int>(samples.size());
        r["pass"] = rep.pass;
        nlohmann::ordered_json kernels = nlohmann::ordered_json::array();
        for (const auto& s : rep.stats) {
            table.add_row({region_name(region), s.kernel, fmt17(s.sup_ratio), fmt17(s.sup_refined),
                           fmt17(s.growth), s.pass ? "1" : "0"});
            nlohmann::ordered_json k;
            k["kernel"] = s.kernel;
            k["sup_ratio"] = s.sup_ratio;
            k["growth"] = s.growth;
            k["pass"] = s.pass;
            kernels.push_back(k);
        }
        r["kernels"] = kernels;
        regions.push_back(r);
        res.pass = res.pass && rep.pass;
    }
    res.tables.push_back(std::move(table));
    res.verdicts["regions"] = regions;
    res.verdicts["pass"] = res.pass;
    return res;
}

}  // namespace experiments

/// Writes report.json plus the per-series CSV files (and coefficient dumps)
/// into the output directory. CSV output is byte-stable across identical
/// runs; report.json additionally carries the wall time.
inline void write_report(const RunConfig& cfg, const ExperimentResult& res, double wall_seconds) {
    namespace fs = std::filesystem;
    fs::path dir(cfg.output.directory);
    fs::create_directories(dir);

    if (cfg.output.csv)
        for (const auto& table : res.tables) write_csv(dir / (table.name + ".csv"), table);

    for (const auto& [name, field] : res.coefficient_dumps)
        write_coefficients(dir / (name + ".csv"), field);

    if (cfg.output.json) {
        nlohmann::ordered_json j;
        j["liewave_version"] = version();
        j["experiment"] = experiment_name(cfg.experiment);
        j["pass"] = res.pass;
        j["exit_code"] = res.pass ? kExitPass : res.failure_exit;
        j["wall_time_seconds"] = wall_seconds;
        j["warnings"] = res.warnings;
        j["config"] = config_to_json(cfg);
        j["verdicts"] = res.verdicts;
        std::ofstream out(dir / "report.json", std::ios::binary);
        if (!out) throw std::runtime_error("cannot write report.json");
        out << j.dump(2) << '\n';
    }
}

/// Parses, runs, reports. Exit code contract: 0 all PASS, 1 experiment FAIL,
/// 2 config error, 3 numerical abort / blow-up.
inline int run_config_file(const std::string& path, std::ostream& log = std::cerr) {
    RunConfig cfg;
    std::vector<std::string> warnings;
    try {
        cfg = load_config(path);
        warnings = cfg.solver.validate(cfg.group);
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    for (const auto& w : warnings) log << "warning: " << w << "\n";

    try {
        const auto start = std::chrono::steady_clock::now();
        ExperimentResult res;
        switch (cfg.experiment) {
            case Experiment::PlancherelCheck: res = experiments::run_plancherel_check(cfg); break;
            case Experiment::LinearDecay: res = experiments::run_linear_decay(cfg); break;
            case Experiment::L1Experiment: res = experiments::run_l1_experiment(cfg); break;
            case Experiment::Semilinear: res = experiments::run_semilinear(cfg, warnings); break;
            case Experiment::GnCheck: res = experiments::run_gn_check(cfg); break;
            case Experiment::MultiplierCheck: res = experiments::run_multiplier_check(cfg); break;
        }
        if (res.warnings.empty()) res.warnings = warnings;
        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_report(cfg, res, wall);
        if (!res.pass) {
            log << "experiment " << experiment_name(cfg.experiment) << ": FAIL\n";
            return res.failure_exit;
        }
        log << "experiment " << experiment_name(cfg.experiment) << ": PASS\n";
        return kExitPass;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitFail;
    }
}

}  // namespace liewave
