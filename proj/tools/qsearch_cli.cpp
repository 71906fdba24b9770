// Experiment runner: configures a single run or a sweep, executes it, and
// writes a machine-readable trace/report (CSV or JSON). Exit codes: 0 on
// success, 2 on a usage error, 1 when a checked bound or internal assertion
// fails.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsearch/experiment.hpp"

namespace {

// "lo..hi" inclusive, stepping by doubling (powers of two expected).
std::vector<double> parse_n_range(const std::string& text) {
    const auto sep = text.find("..");
    if (sep == std::string::npos) throw qsearch::UsageError("--N-range expects lo..hi");
    const double lo = std::stod(text.substr(0, sep));
    const double hi = std::stod(text.substr(sep + 2));
    if (lo > hi) throw qsearch::UsageError("--N-range: empty range");
    std::vector<double> values;
    for (double n = lo; n <= hi; n *= 2.0) values.push_back(n);
    return values;
}

std::vector<int> parse_k_range(const std::string& text) {
    const auto sep = text.find("..");
    if (sep == std::string::npos) throw qsearch::UsageError("--k-range expects lo..hi");
    const int lo = std::stoi(text.substr(0, sep));
    const int hi = std::stoi(text.substr(sep + 2));
    if (lo > hi) throw qsearch::UsageError("--k-range: empty range");
    std::vector<int> values;
    for (int k = lo; k <= hi; ++k) values.push_back(k);
    return values;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Amplitude-amplification search simulator and verifier"};

    std::string command;
    app.add_option("--command", command, "grover | rs | is | verify-appendix | sweep | crosscheck")
        ->required();

    double n_single = 0.0;
    std::string n_range;
    int qubits = 6;
    app.add_option("--N", n_single, "search-space size (power of two)");
    app.add_option("--N-range", n_range, "inclusive size range lo..hi, doubling");
    app.add_option("--n", qubits, "qubits per register (crosscheck)");

    int k = 2;
    std::string k_range;
    app.add_option("--k", k, "oracle count (is)");
    app.add_option("--k-range", k_range, "inclusive oracle-count range lo..hi");

    int steps = -1;
    app.add_option("--steps", steps, "iteration count (default: optimal + 5)");

    std::string out_path;
    app.add_option("--out", out_path, "output file")->required();

    std::string format = "csv";
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for randomized trials");

    int jobs = 1;
    app.add_option("--jobs", jobs, "max concurrent sweep entries")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        qsearch::ExperimentConfig config;
        if (command == "grover") config.command = qsearch::Command::Grover;
        else if (command == "rs") config.command = qsearch::Command::Rs;
        else if (command == "is") config.command = qsearch::Command::Is;
        else if (command == "verify-appendix") config.command = qsearch::Command::VerifyAppendix;
        else if (command == "sweep") config.command = qsearch::Command::Sweep;
        else if (command == "crosscheck") config.command = qsearch::Command::Crosscheck;
        else throw qsearch::UsageError("unknown command: " + command);

        if (!n_range.empty()) config.n_values = parse_n_range(n_range);
        else if (n_single > 0.0) config.n_values = {n_single};
        if (!k_range.empty()) config.k_values = parse_k_range(k_range);
        config.k = k;
        config.qubits = qubits;
        if (steps >= 0) config.steps = steps;
        config.out_path = out_path;
        config.format = (format == "json") ? qsearch::OutputFormat::Json : qsearch::OutputFormat::Csv;
        config.seed = seed;
        config.jobs = jobs;

        const qsearch::RunReport report = qsearch::run_experiment(config);
        std::cout << "wrote " << report.out_path << " (" << report.records.size() << " records, "
                  << report.duration_seconds << " s)\n";
        std::cout << report.summary.dump(2) << "\n";
        if (!report.bounds_ok) {
            std::cerr << "bound check failed\n";
            return 1;
        }
        return 0;
    } catch (const qsearch::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
