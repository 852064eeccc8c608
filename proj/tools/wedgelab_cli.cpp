// Command-line front end: exhaustive censuses over Gr(r, Lambda^2 F_p^d),
// closed-form verification at d = 4, Monte-Carlo experiments, log-generic
// parameter sweeps, the integer torsion witness and differential rank checks,
// with machine-readable JSON/CSV reports.
//
// Exit codes: 0 success/verified, 1 verification failure, 2 budget exceeded,
// 3 bad parameters.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>

#include "wedgelab/experiments.hpp"

namespace {

using namespace wedgelab;

struct OutputOptions {
    std::string out_path;  // empty = stdout
    std::string format = "json";
    bool no_timing = false;
};

void add_output_flags(CLI::App* cmd, OutputOptions& out) {
    cmd->add_option("--out", out.out_path, "Write the report to this path instead of stdout");
    cmd->add_option("--format", out.format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--no-timing", out.no_timing,
                  "Omit runtime_ms so identical seeds give byte-identical reports");
}

int emit(const Json& report, const OutputOptions& out) {
    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out.out_path.empty()) {
        file.open(out.out_path);
        if (!file) {
            std::cerr << "cannot open " << out.out_path << "\n";
            return 3;
        }
        os = &file;
    }
    if (out.format == "csv")
        write_csv(report, *os);
    else
        write_json(report, *os);
    return 0;
}

Fraction parse_fraction(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) return Fraction::of(BigInt(text), 1);
    return Fraction::of(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact censuses and experiments for class-2 groups parametrized by "
                 "subspaces of Lambda^2 F_p^d"};
    app.require_subcommand(1);

    std::uint32_t p = 3;
    unsigned d = 4, r = 1, n = 9;
    std::uint64_t trials = 10000, seed = 1, budget = kDefaultEnumerationBudget;
    std::uint64_t family_members = 200;
    unsigned threads = 0;
    std::string mode = "exhaustive";
    std::string alpha_text = "2/3";
    std::string field_text = "rational";
    OutputOptions out;

    auto* census_cmd = app.add_subcommand("census", "Sweep Gr(r, Lambda^2 F_p^d) and histogram "
                                                    "the B0 dimensions");
    census_cmd->add_option("--p", p, "odd prime")->required();
    census_cmd->add_option("--d", d, "generator count")->required();
    census_cmd->add_option("--r", r, "relation dimension")->required();
    census_cmd->add_option("--mode", mode)->check(CLI::IsMember({"exhaustive", "sampled"}));
    census_cmd->add_option("--trials", trials, "samples in sampled mode");
    census_cmd->add_option("--seed", seed);
    census_cmd->add_option("--budget", budget, "max subspaces visited in exhaustive mode");
    census_cmd->add_option("--threads", threads, "0 = hardware concurrency");
    add_output_flags(census_cmd, out);

    auto* verify_cmd = app.add_subcommand("verify-d4", "Check the exact d = 4 census formulas");
    verify_cmd->add_option("--p", p, "odd prime in {3, 5, 7}")->required();
    verify_cmd->add_option("--seed", seed);
    verify_cmd->add_option("--budget", budget);
    verify_cmd->add_option("--threads", threads);
    add_output_flags(verify_cmd, out);

    auto* sample_cmd = app.add_subcommand("sample", "Monte-Carlo in-image fraction with the "
                                                    "applicable asymptotic bounds");
    sample_cmd->add_option("--p", p)->required();
    sample_cmd->add_option("--d", d)->required();
    sample_cmd->add_option("--r", r)->required();
    sample_cmd->add_option("--trials", trials);
    sample_cmd->add_option("--seed", seed);
    add_output_flags(sample_cmd, out);

    auto* loggen_cmd = app.add_subcommand("loggeneric", "Derive (d, r) from (n, alpha) and probe "
                                                        "the constructive non-trivial-B0 family");
    loggen_cmd->add_option("--p", p)->required();
    loggen_cmd->add_option("--n", n, "log_p of the group order")->required();
    loggen_cmd->add_option("--alpha", alpha_text, "rational in (0,1), e.g. 2/3");
    loggen_cmd->add_option("--trials", trials, "uniform samples of Gr(r, W)");
    loggen_cmd->add_option("--family-members", family_members,
                           "random members of the constructive family to check");
    loggen_cmd->add_option("--seed", seed);
    add_output_flags(loggen_cmd, out);

    auto* torsion_cmd = app.add_subcommand("torsion-example", "Integer SK1 witness at d = 4");
    torsion_cmd->add_option("--p", p)->required();
    add_output_flags(torsion_cmd, out);

    auto* subm_cmd = app.add_subcommand("submersion-check", "Differential ranks at the canonical "
                                                            "tuple and random tuples");
    subm_cmd->add_option("--d", d)->required();
    subm_cmd->add_option("--field", field_text)->check(CLI::IsMember({"rational", "prime"}));
    subm_cmd->add_option("--p", p, "modulus when --field prime");
    subm_cmd->add_option("--r", r, "plane count; 0 = full C(d-2,2) + 1")->default_val(0u);
    subm_cmd->add_option("--trials", trials)->default_val(20ull);
    subm_cmd->add_option("--seed", seed);
    add_output_flags(subm_cmd, out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 3;
    }

    try {
        if (census_cmd->parsed()) {
            CensusOptions opts;
            opts.mode = mode == "sampled" ? CensusMode::Sampled : CensusMode::Exhaustive;
            opts.trials = trials;
            opts.seed = seed;
            opts.budget = budget;
            opts.threads = threads;
            return emit(census_json(census(p, d, r, opts), !out.no_timing), out);
        }
        if (verify_cmd->parsed()) {
            CensusOptions opts;
            opts.seed = seed;
            opts.budget = budget;
            opts.threads = threads;
            auto rep = verify_d4(p, opts);
            const int rc = emit(verify_d4_json(rep, !out.no_timing), out);
            if (rc != 0) return rc;
            return rep.all_pass ? 0 : 1;
        }
        if (sample_cmd->parsed()) {
            auto rep = sample_experiment(p, d, r, trials, seed);
            return emit(sample_json(rep, !out.no_timing), out);
        }
        if (loggen_cmd->parsed()) {
            auto rep = loggeneric(p, n, parse_fraction(alpha_text), trials, family_members, seed);
            return emit(loggeneric_json(rep, !out.no_timing), out);
        }
        if (torsion_cmd->parsed()) {
            auto rep = torsion_example(p);
            return emit(torsion_json(rep, !out.no_timing), out);
        }
        if (subm_cmd->parsed()) {
            auto rep = submersion_check(d, field_text == "rational", p, r, trials, seed);
            const int rc = emit(submersion_json(rep, !out.no_timing), out);
            if (rc != 0) return rc;
            return rep.canonical_ok && rep.random.criterion_disagreements == 0 ? 0 : 1;
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "bad parameters: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 3;
}
