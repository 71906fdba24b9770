#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsearch/grover.hpp"
#include "qsearch/iterated.hpp"
#include "qsearch/parallel_rs.hpp"
#include "qsearch/perturbation.hpp"
#include "qsearch/statevector.hpp"

namespace qsearch {

using Json = nlohmann::ordered_json;

enum class Command { Grover, Rs, Is, VerifyAppendix, Sweep, Crosscheck };
enum class OutputFormat { Csv, Json };

/// Raised on malformed configurations; the CLI maps it to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Command command = Command::Grover;
    std::vector<double> n_values;      // search-space sizes N (powers of two)
    std::vector<int> k_values;         // oracle counts for sweep
    int k = 2;                         // oracle count for the is command
    int qubits = 6;                    // register width for crosscheck
    std::optional<int> steps;          // default: optimal + 5
    std::string out_path;
    OutputFormat format = OutputFormat::Csv;
    std::uint64_t seed = 0;
    int jobs = 1;
};

inline const char* command_name(Command c) {
    switch (c) {
        case Command::Grover: return "grover";
        case Command::Rs: return "rs";
        case Command::Is: return "is";
        case Command::VerifyAppendix: return "verify-appendix";
        case Command::Sweep: return "sweep";
        case Command::Crosscheck: return "crosscheck";
    }
    return "?";
}

/// Per-run result: config echo, tabular records, summary, and whether every
/// checked bound held. The wall-clock duration is reported to the caller but
/// never serialized, so identical configs produce byte-identical files.
struct RunReport {
    Json config_echo;
    std::vector<std::string> columns;
    std::vector<Json> records;
    Json summary;
    bool bounds_ok = true;
    double duration_seconds = 0.0;
    std::string out_path;
};

namespace detail {

inline std::string fmt_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

inline std::string csv_cell(const Json& value) {
    if (value.is_null()) return "";
    if (value.is_string()) return value.get<std::string>();
    if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
    if (value.is_number_integer()) return std::to_string(value.get<long long>());
    return fmt_double(value.get<double>());
}

inline std::string render_csv(const RunReport& report) {
    std::string out;
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        if (c) out += ',';
        out += report.columns[c];
    }
    out += "\r\n";
    for (const Json& row : report.records) {
        for (std::size_t c = 0; c < report.columns.size(); ++c) {
            if (c) out += ',';
            out += csv_cell(row.contains(report.columns[c]) ? row[report.columns[c]] : Json{});
        }
        out += "\r\n";
    }
    return out;
}

inline std::string render_json(const RunReport& report) {
    Json doc;
    doc["config"] = report.config_echo;
    doc["records"] = Json::array();
    for (const Json& row : report.records) doc["records"].push_back(row);
    doc["summary"] = report.summary;
    return doc.dump(2) + "\n";
}

inline void write_atomic(const std::string& path, const std::string& content) {
    if (path.empty()) return;
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file: " + tmp);
        out << content;
        if (!out.good()) throw std::runtime_error("write failed: " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

inline double single_n(const ExperimentConfig& config, double minimum) {
    if (config.n_values.size() != 1)
        throw UsageError("this command takes exactly one N (use sweep for ranges)");
    const double n = config.n_values.front();
    if (!is_power_of_two(n) || n < minimum)
        throw UsageError("N must be a power of two >= " + std::to_string(static_cast<long long>(minimum)));
    return n;
}

inline Json echo_config(const ExperimentConfig& config) {
    Json echo;
    echo["command"] = command_name(config.command);
    echo["N"] = config.n_values;
    if (config.command == Command::Is || config.command == Command::Sweep) {
        echo["k"] = config.k;
        echo["k_range"] = config.k_values;
    }
    if (config.command == Command::Crosscheck) echo["n_qubits"] = config.qubits;
    if (config.steps) echo["steps"] = *config.steps;
    echo["format"] = config.format == OutputFormat::Csv ? "csv" : "json";
    echo["seed"] = config.seed;
    echo["jobs"] = config.jobs;
    echo["out"] = config.out_path;
    return echo;
}

inline void run_grover_command(const ExperimentConfig& config, RunReport& report) {
    const double n = single_n(config, 2.0);
    const int steps = config.steps.value_or(optimal_steps_simple(n) + 5);
    const std::vector<GroverReducedState> trace = grover_trace(n, steps);

    report.columns = {"step", "b", "a", "prob_target"};
    for (std::size_t i = 0; i < trace.size(); ++i) {
        Json row;
        row["step"] = static_cast<long long>(i);
        row["b"] = trace[i].b.real();
        row["a"] = trace[i].a.real();
        row["prob_target"] = std::norm(trace[i].b);
        report.records.push_back(std::move(row));
    }

    const int peak = peak_step(trace);
    const double peak_prob = std::norm(trace[peak].b);
    const double bound = 10.0 / n;
    report.summary["N"] = n;
    report.summary["steps"] = steps;
    report.summary["optimal_steps"] = optimal_steps_simple(n);
    report.summary["peak_step"] = peak;
    report.summary["peak_prob"] = peak_prob;
    report.summary["error_deficit"] = 1.0 - peak_prob;
    report.summary["error_bound"] = bound;
    report.summary["error_bound_ok"] = (1.0 - peak_prob) <= bound;
    report.bounds_ok = (1.0 - peak_prob) <= bound;
}

inline void run_rs_command(const ExperimentConfig& config, RunReport& report) {
    const double n = single_n(config, 4.0);
    const int steps = config.steps.value_or(optimal_steps_rs(n) + 5);
    const std::vector<RSReducedState> trace = rs_trace(n, steps);

    report.columns = {"step", "b_re", "b_im", "a_re", "a_im", "alpha_re", "alpha_im",
                      "beta_re", "beta_im", "prob_target"};
    int peak = 0;
    double peak_prob = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        Json row;
        row["step"] = static_cast<long long>(i);
        row["b_re"] = trace[i].b.real();
        row["b_im"] = trace[i].b.imag();
        row["a_re"] = trace[i].a.real();
        row["a_im"] = trace[i].a.imag();
        row["alpha_re"] = trace[i].alpha.real();
        row["alpha_im"] = trace[i].alpha.imag();
        row["beta_re"] = trace[i].beta.real();
        row["beta_im"] = trace[i].beta.imag();
        const double prob = std::norm(trace[i].b);
        row["prob_target"] = prob;
        if (prob > peak_prob) {
            peak_prob = prob;
            peak = static_cast<int>(i);
        }
        report.records.push_back(std::move(row));
    }

    const double bound = 10.0 / std::sqrt(n);
    report.summary["N"] = n;
    report.summary["steps"] = steps;
    report.summary["optimal_steps"] = optimal_steps_rs(n);
    report.summary["peak_step"] = peak;
    report.summary["peak_prob"] = peak_prob;
    report.summary["error_deficit"] = 1.0 - peak_prob;
    report.summary["error_bound"] = bound;
    report.summary["error_bound_ok"] = (1.0 - peak_prob) <= bound;
    report.bounds_ok = (1.0 - peak_prob) <= bound;
}

inline void run_is_command(const ExperimentConfig& config, RunReport& report) {
    const double n = single_n(config, 4.0);
    const int k = config.k;
    if (k < 2) throw UsageError("is: k must be >= 2");
    const int steps = config.steps.value_or(static_cast<int>(std::ceil(std::sqrt(n))));
    const IsTrace trace = is_reduced_trace(k, n, steps);

    report.columns = {"step"};
    for (int j = 0; j <= k; ++j) {
        report.columns.push_back("a" + std::to_string(j) + "_re");
        report.columns.push_back("a" + std::to_string(j) + "_im");
    }
    report.columns.push_back("target_abs");
    report.columns.push_back("upper_bound");

    bool bound_ok = true;
    for (std::size_t i = 0; i < trace.states_exact.size(); ++i) {
        Json row;
        row["step"] = static_cast<long long>(i);
        for (int j = 0; j <= k; ++j) {
            row["a" + std::to_string(j) + "_re"] = trace.states_exact[i][j].real();
            row["a" + std::to_string(j) + "_im"] = trace.states_exact[i][j].imag();
        }
        const double target = std::abs(trace.states_exact[i].back());
        const double bound = amplitude_upper_bound(k, n, trace.times[i]);
        row["target_abs"] = target;
        row["upper_bound"] = bound;
        bound_ok = bound_ok && target <= bound + 1e-15;
        report.records.push_back(std::move(row));
    }

    report.summary["N"] = n;
    report.summary["k"] = k;
    report.summary["steps"] = steps;
    report.summary["upper_bound_ok"] = bound_ok;
    const SchedulePlan plan = pairwise_is_schedule(k, n);
    report.summary["schedule_runs"] = plan.num_runs;
    report.summary["schedule_queries_per_run"] = plan.queries_per_run;
    report.summary["schedule_total_queries"] = plan.total_queries;
    report.summary["schedule_error_bound"] = plan.error_bound;
    if (k >= 3) {
        const BudgetComparison cmp = compare_par_seq(k, n);
        report.summary["p_par"] = cmp.p_par;
        report.summary["p_seq_bound"] = cmp.p_seq_bound;
        report.summary["ratio"] = cmp.ratio;
    }
    report.bounds_ok = bound_ok;
}

inline void run_crosscheck_command(const ExperimentConfig& config, RunReport& report) {
    const int n_qubits = config.qubits;
    if (n_qubits < 2 || n_qubits > 13) throw UsageError("crosscheck: n must be in [2, 13]");
    std::mt19937_64 rng(config.seed);

    report.columns = {"model", "n", "placement_e1", "placement_e2", "max_deviation"};
    double worst_grover = 0.0;
    double worst_rs = 0.0;

    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t dim = std::size_t{1} << n_qubits;
        SearchInstance inst{n_qubits, rng() % dim, 0};
        const int steps = optimal_steps_simple(static_cast<double>(dim)) + 3;
        const auto full = grover_full_run(inst, steps);
        const auto reduced = grover_trace(static_cast<double>(dim), steps);
        double dev = 0.0;
        for (std::size_t i = 0; i < full.size(); ++i) {
            dev = std::max(dev, std::abs(full[i].target - reduced[i].b));
            dev = std::max(dev, std::abs(full[i].rest - reduced[i].a));
        }
        worst_grover = std::max(worst_grover, dev);
        Json row;
        row["model"] = "grover";
        row["n"] = n_qubits;
        row["placement_e1"] = static_cast<long long>(inst.e1);
        row["placement_e2"] = nullptr;
        row["max_deviation"] = dev;
        report.records.push_back(std::move(row));
    }

    const int rs_qubits = std::min(n_qubits, 8);
    for (int trial = 0; trial < 5; ++trial) {
        const std::size_t dim = std::size_t{1} << rs_qubits;
        SearchInstance inst{rs_qubits, rng() % dim, rng() % dim};
        const int steps = optimal_steps_rs(static_cast<double>(dim)) + 3;
        const auto full = rs_full_run(inst, steps);
        std::vector<RSReducedState> reduced = rs_trace(static_cast<double>(dim), steps);
        double dev = 0.0;
        for (std::size_t i = 0; i < full.size(); ++i) {
            dev = std::max(dev, std::abs(full[i].b - reduced[i].b));
            dev = std::max(dev, std::abs(full[i].a - reduced[i].a));
            dev = std::max(dev, std::abs(full[i].alpha - reduced[i].alpha));
            dev = std::max(dev, std::abs(full[i].beta - reduced[i].beta));
        }
        worst_rs = std::max(worst_rs, dev);
        Json row;
        row["model"] = "rs";
        row["n"] = rs_qubits;
        row["placement_e1"] = static_cast<long long>(inst.e1);
        row["placement_e2"] = static_cast<long long>(inst.e2);
        row["max_deviation"] = dev;
        report.records.push_back(std::move(row));
    }

    report.summary["grover_max_deviation"] = worst_grover;
    report.summary["rs_max_deviation"] = worst_rs;
    report.summary["tolerance"] = 1e-12;
    report.summary["ok"] = worst_grover <= 1e-12 && worst_rs <= 1e-12;
    report.bounds_ok = worst_grover <= 1e-12 && worst_rs <= 1e-12;
}

inline void run_verify_appendix_command(const ExperimentConfig& config, RunReport& report) {
    const double n = config.n_values.empty() ? 65536.0 : single_n(config, 1024.0);
    report.columns = {"check", "value", "bound", "ok"};
    bool all_ok = true;

    auto add_row = [&](const std::string& name, double value, double bound, bool ok) {
        Json row;
        row["check"] = name;
        row["value"] = value;
        row["bound"] = bound;
        row["ok"] = ok;
        report.records.push_back(std::move(row));
        all_ok = all_ok && ok;
    };

    const Lemma2Report lemma2 = lemma2_power_structure(n, 10, 5, config.seed + 1);
    add_row("lemma2_pattern_j_le_10", lemma2.tightest_constant, 10.0, lemma2.ok);

    bool lemma3_ok = true;
    double lemma3_dev = 0.0;
    {
        std::vector<double> grid(3001);
        for (std::size_t j = 0; j < grid.size(); ++j) grid[j] = 1e-3 * static_cast<double>(j);
        const auto delta = lemma3_beta_difference([](double) { return Complex{2.0, 0.0}; }, grid);
        for (std::size_t j = 0; j < grid.size(); ++j)
            lemma3_dev = std::max(lemma3_dev,
                                  std::abs(delta[j] - Complex{1.0 - std::exp(-2.0 * grid[j]), 0.0}));
        lemma3_ok = lemma3_dev <= 1e-8;
    }
    add_row("lemma3_constant_forcing", lemma3_dev, 1e-8, lemma3_ok);

    const auto iterates = rs_complex_iterates(n, 6);
    const DeltaReport deltas = picard_differences(iterates, n);
    double worst_ratio = 0.0;
    for (const DeltaEntry& entry : deltas.entries)
        for (std::size_t c = 0; c < entry.max_abs.size(); ++c)
            if (entry.envelope_at_end[c] > 0.0)
                worst_ratio = std::max(worst_ratio, entry.max_abs[c] / entry.envelope_at_end[c]);
    add_row("lemma1_envelopes_i_le_6", worst_ratio, 1.0, deltas.all_ok);

    PerturbationOptions opt;
    opt.seed = config.seed + 2;
    const PerturbationReport perturbation = perturbation_deviation(n, opt);
    add_row("perturbation_deviation", perturbation.deviation, perturbation.bound, perturbation.ok);

    report.summary["N"] = n;
    report.summary["all_ok"] = all_ok;
    report.bounds_ok = all_ok;
}

inline Json sweep_row(double n, std::optional<int> k) {
    Json row;
    row["N"] = n;
    row["k"] = k ? Json(*k) : Json(2);
    const int seq = 2 * optimal_steps_simple(n);
    const int par = optimal_steps_rs(n);
    row["seq_steps"] = seq;
    row["par_steps"] = par;
    row["speedup"] = static_cast<double>(seq) / par;
    const Theorem1Report thm = theorem1_check(n);
    row["peak_prob"] = thm.peak_prob;
    row["error_deficit"] = thm.error_deficit;
    if (k && *k >= 3) {
        const BudgetComparison cmp = compare_par_seq(*k, n);
        row["p_par"] = cmp.p_par;
        row["p_seq_bound"] = cmp.p_seq_bound;
        row["ratio"] = cmp.ratio;
    } else {
        row["p_par"] = nullptr;
        row["p_seq_bound"] = nullptr;
        row["ratio"] = nullptr;
    }
    return row;
}

inline void run_sweep_command(const ExperimentConfig& config, RunReport& report) {
    if (config.n_values.empty()) throw UsageError("sweep: empty N range");
    for (double n : config.n_values)
        if (!is_power_of_two(n) || n < 16.0)
            throw UsageError("sweep: every N must be a power of two >= 16");
    for (int k : config.k_values)
        if (k < 2) throw UsageError("sweep: every k must be >= 2");

    report.columns = {"N", "k", "seq_steps", "par_steps", "speedup",
                      "peak_prob", "error_deficit", "p_par", "p_seq_bound", "ratio"};

    std::vector<std::pair<double, std::optional<int>>> cells;
    for (double n : config.n_values) {
        if (config.k_values.empty())
            cells.emplace_back(n, std::nullopt);
        else
            for (int k : config.k_values) cells.emplace_back(n, k);
    }

    const int jobs = std::max(1, config.jobs);
    std::vector<Json> rows(cells.size());
    for (std::size_t base = 0; base < cells.size(); base += jobs) {
        const std::size_t stop = std::min(cells.size(), base + jobs);
        std::vector<std::future<Json>> batch;
        for (std::size_t i = base; i < stop; ++i)
            batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                       [&cells, i] { return sweep_row(cells[i].first, cells[i].second); }));
        for (std::size_t i = base; i < stop; ++i) rows[i] = batch[i - base].get();
    }
    for (Json& row : rows) report.records.push_back(std::move(row));
    report.summary["rows"] = static_cast<long long>(report.records.size());
}

}  // namespace detail

/// Executes one experiment, writes the output file atomically (temp +
/// rename), and returns the in-memory report. Deterministic for a fixed
/// config and seed.
inline RunReport run_experiment(const ExperimentConfig& config) {
    const auto started = std::chrono::steady_clock::now();
    RunReport report;
    report.config_echo = detail::echo_config(config);
    report.out_path = config.out_path;

    switch (config.command) {
        case Command::Grover: detail::run_grover_command(config, report); break;
        case Command::Rs: detail::run_rs_command(config, report); break;
        case Command::Is: detail::run_is_command(config, report); break;
        case Command::Crosscheck: detail::run_crosscheck_command(config, report); break;
        case Command::VerifyAppendix: detail::run_verify_appendix_command(config, report); break;
        case Command::Sweep: detail::run_sweep_command(config, report); break;
    }

    const std::string content = config.format == OutputFormat::Csv ? detail::render_csv(report)
                                                                   : detail::render_json(report);
    detail::write_atomic(config.out_path, content);
    report.duration_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return report;
}

}  // namespace qsearch
