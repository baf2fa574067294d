// Command-line front door: generate hard instances, run the streaming and
// offline solvers, verify the structural lemmas, and emit benchmark tables.
//
// Exit codes: 0 success, 1 contract/parameter error, 2 I/O error.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "covstream/core.hpp"
#include "covstream/hardgen.hpp"
#include "covstream/oracles.hpp"
#include "covstream/solver.hpp"
#include "covstream/stream.hpp"
#include "covstream/verify.hpp"

namespace {

using namespace covstream;
using ordered_json = nlohmann::ordered_json;

// Randomized commands take --seed; without it one is drawn from the OS and
// printed, so every invocation stays reproducible from its output.
Seed resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return Seed{*flag};
    std::random_device dev;
    const std::uint64_t hi = dev(), lo = dev();
    return Seed{(hi << 32) ^ lo};
}

std::optional<int> parse_theta(const std::string& text) {
    if (text == "random") return std::nullopt;
    if (text == "0") return 0;
    if (text == "1") return 1;
    throw CLI::ValidationError("--theta must be 0, 1 or random");
}

std::string witness_to_string(const std::vector<std::size_t>& witness) {
    std::string out;
    for (std::size_t i = 0; i < witness.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(witness[i]);
    }
    return out;
}

int run_gen_sc(std::uint64_t n, std::uint64_t m, std::uint64_t t, std::uint32_t alpha,
               const std::string& theta_text, std::optional<std::uint64_t> seed_flag,
               const std::string& out, bool full_meta, bool partition) {
    const Seed seed = resolve_seed(seed_flag);
    auto inst = gen_sc(n, m, t, alpha, parse_theta(theta_text), seed);

    MetaOptions opts;
    opts.full_witness = full_meta;
    PartitionLabels labels;
    if (partition) {
        Rng rng(seed.derive(0x5eed));
        labels = gen_sc_partition(inst, rng);
        opts.labels = &labels;
    }
    write_instance(inst.system, out);
    write_meta(meta_json(inst, opts), out);

    std::cout << "generator=sc n=" << n << " m=" << m << " t=" << t
              << " alpha=" << alpha << " theta=" << inst.theta << " i_star="
              << (inst.i_star ? std::to_string(*inst.i_star) : std::string("none"))
              << " seed=" << seed.value << " out=" << out << "\n";
    return 0;
}

int run_gen_mc(std::uint64_t m, std::uint64_t t1, std::optional<std::uint64_t> a,
               std::optional<std::uint64_t> b, const std::string& theta_text,
               std::optional<std::uint64_t> seed_flag, const std::string& out,
               bool full_meta) {
    const Seed seed = resolve_seed(seed_flag);
    auto inst = gen_mc(m, t1, a, b, parse_theta(theta_text), seed);

    MetaOptions opts;
    opts.full_witness = full_meta;
    write_instance(inst.system, out);
    write_meta(meta_json(inst, opts), out);

    std::cout << "generator=mc m=" << m << " t1=" << t1 << " t2=" << inst.t2
              << " a=" << inst.a << " b=" << inst.b << " theta=" << inst.theta
              << " tau=" << inst.tau << " i_star="
              << (inst.i_star ? std::to_string(*inst.i_star) : std::string("none"))
              << " seed=" << seed.value << " out=" << out << "\n";
    return 0;
}

int run_gen_disj(std::uint64_t t, const std::string& side_text,
                 std::optional<std::uint64_t> seed_flag, const std::string& out,
                 bool full_meta) {
    DisjSide side;
    if (side_text == "natural")
        side = DisjSide::natural;
    else if (side_text == "yes")
        side = DisjSide::yes;
    else if (side_text == "no")
        side = DisjSide::no;
    else
        throw CLI::ValidationError("--side must be natural, yes or no");

    const Seed seed = resolve_seed(seed_flag);
    Rng rng(seed);
    auto inst = sample_disj(t, side, rng);

    // The pair is stored as a two-set system (A then B) over universe [t].
    SetSystem system(t, {inst.a, inst.b});
    write_instance(system, out);
    MetaOptions opts;
    opts.full_witness = full_meta;
    write_meta(meta_json(inst, seed, opts), out);

    std::cout << "generator=disj t=" << t << " Z=" << inst.z << " e_star="
              << (inst.e_star ? std::to_string(*inst.e_star) : std::string("none"))
              << " seed=" << seed.value << " out=" << out << "\n";
    return 0;
}

int run_solve_stream(const std::string& input, std::uint32_t alpha, double eps,
                     std::optional<std::uint64_t> seed_flag,
                     std::optional<std::uint64_t> guess, const std::string& order_text,
                     const std::string& subsolver_text,
                     std::optional<std::uint64_t> ledger_budget, bool as_json) {
    const Seed seed = resolve_seed(seed_flag);
    auto system = read_instance(input);

    if (order_text != "random" && order_text != "adversarial")
        throw CLI::ValidationError("--order must be random or adversarial");
    const StreamOrder order = order_text == "random" ? StreamOrder::random
                                                     : StreamOrder::adversarial;
    auto stream = SetStream::from_system(system, order, seed.derive(1));

    SolverConfig config;
    config.alpha = alpha;
    config.eps = eps;
    config.seed = seed.derive(2);
    config.guess_override = guess;
    config.ledger_budget = ledger_budget;
    if (subsolver_text == "greedy")
        config.subsolver = Subsolver::greedy;
    else if (subsolver_text != "exact")
        throw CLI::ValidationError("--subsolver must be exact or greedy");

    auto res = solve(stream, config);

    if (as_json) {
        ordered_json j;
        j["seed"] = seed.value;
        j["feasible"] = res.feasible;
        j["sol_size"] = res.chosen.size();
        j["passes"] = res.passes_used;
        j["peak_entries"] = res.peak_entries;
        j["winning_guess"] = res.winning_guess;
        j["chosen"] = res.chosen;
        j["proj_entries_stored"] = res.proj_entries_stored;
        j["proj_entries_expected"] = res.proj_entries_expected;
        j["per_guess"] = ordered_json::array();
        for (const auto& g : res.per_guess)
            j["per_guess"].push_back({{"guess", g.guess},
                                      {"feasible", g.feasible},
                                      {"sol_size", g.sol_size},
                                      {"sol0_size", g.sol0_size},
                                      {"largest_subcover", g.largest_subcover}});
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "seed=" << seed.value << " feasible=" << (res.feasible ? 1 : 0)
                  << " sol_size=" << res.chosen.size() << " passes=" << res.passes_used
                  << " peak_entries=" << res.peak_entries
                  << " winning_guess=" << res.winning_guess
                  << " chosen=" << witness_to_string(res.chosen) << "\n";
    }
    return 0;
}

int run_solve_exact(const std::string& input, std::optional<std::uint64_t> cap,
                    bool as_json) {
    auto system = read_instance(input);
    std::optional<std::size_t> cap_arg;
    if (cap) cap_arg = static_cast<std::size_t>(*cap);
    auto res = exact_set_cover(system, cap_arg);

    std::string status;
    switch (res.status) {
        case ExactCoverResult::Status::optimal: status = "optimal"; break;
        case ExactCoverResult::Status::exceeds_cap: status = "exceeds_cap"; break;
        case ExactCoverResult::Status::uncoverable: status = "uncoverable"; break;
    }
    if (as_json) {
        ordered_json j;
        j["status"] = status;
        if (res.status == ExactCoverResult::Status::optimal) {
            j["opt_size"] = res.opt_size;
            j["witness"] = res.witness;
        }
        if (res.status == ExactCoverResult::Status::uncoverable)
            j["uncoverable_element"] = res.uncoverable_element;
        j["nodes_explored"] = res.nodes_explored;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "status=" << status;
        if (res.status == ExactCoverResult::Status::optimal)
            std::cout << " opt_size=" << res.opt_size
                      << " witness=" << witness_to_string(res.witness);
        if (res.status == ExactCoverResult::Status::uncoverable)
            std::cout << " uncoverable_element=" << res.uncoverable_element;
        std::cout << " nodes_explored=" << res.nodes_explored << "\n";
    }
    return 0;
}

int run_solve_greedy(const std::string& input, bool as_json) {
    auto system = read_instance(input);
    auto picks = greedy_set_cover(system);
    if (as_json) {
        ordered_json j;
        j["sol_size"] = picks.size();
        j["witness"] = picks;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "sol_size=" << picks.size()
                  << " witness=" << witness_to_string(picks) << "\n";
    }
    return 0;
}

struct VerifyFlags {
    std::string lemma;
    std::uint64_t trials = 100;
    std::optional<std::uint64_t> seed;
    std::uint64_t n = 0, m = 0, k = 0, s = 0, t = 0, t1 = 0, a = 0, b = 0;
    std::uint64_t u_size = 0, planted_opt = 0;
    std::uint32_t alpha = 0;
    double rho = 0.0, eps = 0.0;
    bool as_json = false;
};

int run_verify(const VerifyFlags& f) {
    const Seed seed = resolve_seed(f.seed);
    TrialReport report;
    if (f.lemma == "coverage") {
        const std::uint64_t n = f.n ? f.n : 4096;
        report = check_coverage_lemma(n, f.s ? f.s : n / 2, f.k ? f.k : 2,
                                      f.u_size ? f.u_size : n, f.trials, seed);
    } else if (f.lemma == "sc-opt") {
        report = check_sc_opt_gap(f.n ? f.n : 256, f.m ? f.m : 16, f.t ? f.t : 4,
                                  f.alpha ? f.alpha : 2, f.trials, seed);
    } else if (f.lemma == "sampling") {
        report = check_element_sampling(f.n ? f.n : 512, f.m ? f.m : 12, f.k ? f.k : 3,
                                        f.rho > 0 ? f.rho : 0.25, f.trials, seed);
    } else if (f.lemma == "mc-gap") {
        const std::uint64_t t1 = f.t1 ? f.t1 : 64;
        report = check_mc_gap(f.m ? f.m : 8, t1, f.a ? f.a : t1 / 2, f.b ? f.b : t1 / 2,
                              f.trials, seed);
    } else if (f.lemma == "solver") {
        report = check_solver_contract(f.n ? f.n : 1024, f.m ? f.m : 64,
                                       f.alpha ? f.alpha : 2, f.eps > 0 ? f.eps : 0.5,
                                       f.planted_opt ? f.planted_opt : 4, f.trials, seed);
    } else {
        throw CLI::ValidationError(
            "--lemma must be one of coverage, sc-opt, sampling, mc-gap, solver");
    }
    std::cout << (f.as_json ? to_json(report) : to_kv(report));
    return 0;
}

// One benchmark row: a gen-sc spec line solved by the streaming solver, with
// the exact optimum alongside when the bitmask guard admits it.
struct BenchRow {
    std::string id;
    std::uint64_t n = 0, m = 0;
    std::uint32_t alpha = 0;
    double eps = 0.0;
    std::uint32_t passes = 0;
    std::uint64_t peak_entries = 0;
    std::size_t sol_size = 0;
    std::optional<std::size_t> opt_exact;
};

std::string format_ratio(const BenchRow& row) {
    if (!row.opt_exact || *row.opt_exact == 0) return "";
    std::ostringstream out;
    out.precision(6);
    out << static_cast<double>(row.sol_size) / static_cast<double>(*row.opt_exact);
    return out.str();
}

int run_bench(const std::string& suite_path, std::optional<std::uint64_t> seed_flag,
              const std::string& out_path) {
    std::ifstream suite(suite_path);
    if (!suite) throw IoError("cannot open " + suite_path);
    const Seed seed = resolve_seed(seed_flag);

    std::vector<BenchRow> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(suite, line)) {
        ++lineno;
        std::istringstream in(line);
        std::vector<std::string> toks;
        std::string tok;
        while (in >> tok) toks.push_back(tok);
        if (toks.empty() || toks[0][0] == '#') continue;
        if (toks[0] != "gen-sc")
            throw std::invalid_argument("suite line " + std::to_string(lineno) +
                                        ": only gen-sc specs are supported");

        std::uint64_t n = 0, m = 0, t = 0;
        std::uint32_t alpha = 2;
        double eps = 0.5;
        std::string theta = "random", order = "adversarial", subsolver = "exact";
        for (std::size_t i = 1; i + 1 < toks.size(); i += 2) {
            const std::string& key = toks[i];
            const std::string& value = toks[i + 1];
            if (key == "--n") n = std::stoull(value);
            else if (key == "--m") m = std::stoull(value);
            else if (key == "--t") t = std::stoull(value);
            else if (key == "--alpha") alpha = static_cast<std::uint32_t>(std::stoul(value));
            else if (key == "--eps") eps = std::stod(value);
            else if (key == "--theta") theta = value;
            else if (key == "--order") order = value;
            else if (key == "--subsolver") subsolver = value;
            else
                throw std::invalid_argument("suite line " + std::to_string(lineno) +
                                            ": unknown flag " + key);
        }
        if (!n || !m || !t)
            throw std::invalid_argument("suite line " + std::to_string(lineno) +
                                        ": --n, --m and --t are required");

        auto inst = gen_sc(n, m, t, alpha, parse_theta(theta), seed.derive(2 * lineno));
        auto stream = SetStream::from_system(
            inst.system,
            order == "random" ? StreamOrder::random : StreamOrder::adversarial,
            seed.derive(2 * lineno + 1));

        SolverConfig config;
        config.alpha = alpha;
        config.eps = eps;
        config.seed = seed.derive(10'000 + lineno);
        if (subsolver == "greedy") config.subsolver = Subsolver::greedy;
        auto res = solve(stream, config);

        BenchRow row;
        row.id = "sc-" + std::to_string(lineno);
        row.n = n;
        row.m = inst.system.set_count();
        row.alpha = alpha;
        row.eps = eps;
        row.passes = res.passes_used;
        row.peak_entries = res.peak_entries;
        row.sol_size = res.chosen.size();
        if (n <= 4096) {
            auto exact = exact_set_cover(inst.system);
            if (exact.status == ExactCoverResult::Status::optimal)
                row.opt_exact = exact.opt_size;
        }
        rows.push_back(std::move(row));
    }

    std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& a, const BenchRow& b) {
        return std::tie(a.n, a.m, a.alpha) < std::tie(b.n, b.m, b.alpha);
    });

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + out_path);
    out << "instance,n,m,alpha,eps,passes,peak_entries,sol_size,opt_exact,ratio\n";
    for (const auto& row : rows) {
        out << row.id << ',' << row.n << ',' << row.m << ',' << row.alpha << ','
            << row.eps << ',' << row.passes << ',' << row.peak_entries << ','
            << row.sol_size << ','
            << (row.opt_exact ? std::to_string(*row.opt_exact) : std::string()) << ','
            << format_ratio(row) << "\n";
    }
    if (!out) throw IoError("write failed: " + out_path);

    std::cout << "seed=" << seed.value << " rows=" << rows.size() << " out=" << out_path
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"streaming set-cover toolkit"};
    app.require_subcommand(1);

    // gen-sc
    std::uint64_t sc_n = 0, sc_m = 0, sc_t = 0;
    std::uint32_t sc_alpha = 2;
    std::string sc_theta = "random", sc_out;
    std::optional<std::uint64_t> sc_seed;
    bool sc_full_meta = false, sc_partition = false;
    auto* gen_sc_cmd = app.add_subcommand("gen-sc", "generate a hard set-cover instance");
    gen_sc_cmd->add_option("--n", sc_n, "universe size")->required();
    gen_sc_cmd->add_option("--m", sc_m, "pair count (2m sets emitted)")->required();
    gen_sc_cmd->add_option("--t", sc_t, "block count, must divide n")->required();
    gen_sc_cmd->add_option("--alpha", sc_alpha, "approximation parameter");
    gen_sc_cmd->add_option("--seed", sc_seed, "rng seed (drawn and printed if absent)");
    gen_sc_cmd->add_option("--out", sc_out, "output instance path")->required();
    gen_sc_cmd->add_option("--theta", sc_theta, "0, 1 or random");
    gen_sc_cmd->add_flag("--full-meta", sc_full_meta, "include witness internals");
    gen_sc_cmd->add_flag("--partition", sc_partition, "record a random player split");

    // gen-mc
    std::uint64_t mc_m = 0, mc_t1 = 0;
    std::optional<std::uint64_t> mc_a, mc_b, mc_seed;
    std::string mc_theta = "random", mc_out;
    bool mc_full_meta = false;
    auto* gen_mc_cmd = app.add_subcommand("gen-mc", "generate a hard max-coverage instance");
    gen_mc_cmd->add_option("--m", mc_m, "pair count (2m sets emitted)")->required();
    gen_mc_cmd->add_option("--t1", mc_t1, "gap-hamming universe size")->required();
    gen_mc_cmd->add_option("--a", mc_a, "|A_i| (default t1/2)");
    gen_mc_cmd->add_option("--b", mc_b, "|B_i| (default t1/2)");
    gen_mc_cmd->add_option("--seed", mc_seed, "rng seed (drawn and printed if absent)");
    gen_mc_cmd->add_option("--out", mc_out, "output instance path")->required();
    gen_mc_cmd->add_option("--theta", mc_theta, "0, 1 or random");
    gen_mc_cmd->add_flag("--full-meta", mc_full_meta, "include witness internals");

    // gen-disj
    std::uint64_t dj_t = 0;
    std::string dj_side = "natural", dj_out;
    std::optional<std::uint64_t> dj_seed;
    bool dj_full_meta = false;
    auto* gen_disj_cmd = app.add_subcommand("gen-disj", "sample a disjointness instance");
    gen_disj_cmd->add_option("--t", dj_t, "ground-set size")->required();
    gen_disj_cmd->add_option("--side", dj_side, "natural, yes or no")->required();
    gen_disj_cmd->add_option("--seed", dj_seed, "rng seed (drawn and printed if absent)");
    gen_disj_cmd->add_option("--out", dj_out, "output instance path")->required();
    gen_disj_cmd->add_flag("--full-meta", dj_full_meta, "include A and B");

    // solve-stream
    std::string ss_input, ss_order = "adversarial", ss_subsolver = "exact";
    std::uint32_t ss_alpha = 0;
    double ss_eps = 0.0;
    std::optional<std::uint64_t> ss_seed, ss_guess, ss_budget;
    bool ss_json = false;
    auto* solve_stream_cmd =
        app.add_subcommand("solve-stream", "run the multi-pass streaming solver");
    solve_stream_cmd->add_option("--input", ss_input, "instance file")->required();
    solve_stream_cmd->add_option("--alpha", ss_alpha, "pass/approximation knob")->required();
    solve_stream_cmd->add_option("--eps", ss_eps, "epsilon in (0,1)")->required();
    solve_stream_cmd->add_option("--seed", ss_seed, "rng seed (drawn and printed if absent)");
    solve_stream_cmd->add_option("--guess", ss_guess, "run a single opt guess");
    solve_stream_cmd->add_option("--order", ss_order, "adversarial or random");
    solve_stream_cmd->add_option("--subsolver", ss_subsolver, "exact or greedy");
    solve_stream_cmd->add_option("--ledger-budget", ss_budget, "space cutoff in entries");
    solve_stream_cmd->add_flag("--json", ss_json, "machine-readable output");

    // solve-exact
    std::string se_input;
    std::optional<std::uint64_t> se_cap;
    bool se_json = false;
    auto* solve_exact_cmd = app.add_subcommand("solve-exact", "exact branch-and-bound");
    solve_exact_cmd->add_option("--input", se_input, "instance file")->required();
    solve_exact_cmd->add_option("--cap", se_cap, "certify only up to this size");
    solve_exact_cmd->add_flag("--json", se_json, "machine-readable output");

    // solve-greedy
    std::string sg_input;
    bool sg_json = false;
    auto* solve_greedy_cmd = app.add_subcommand("solve-greedy", "greedy baseline");
    solve_greedy_cmd->add_option("--input", sg_input, "instance file")->required();
    solve_greedy_cmd->add_flag("--json", sg_json, "machine-readable output");

    // verify
    VerifyFlags vf;
    auto* verify_cmd = app.add_subcommand("verify", "Monte-Carlo lemma checks");
    verify_cmd->add_option("--lemma", vf.lemma, "coverage|sc-opt|sampling|mc-gap|solver")
        ->required();
    verify_cmd->add_option("--trials", vf.trials, "trial count")->required();
    verify_cmd->add_option("--seed", vf.seed, "rng seed (drawn and printed if absent)");
    verify_cmd->add_option("--n", vf.n, "universe size");
    verify_cmd->add_option("--m", vf.m, "set / pair count");
    verify_cmd->add_option("--k", vf.k, "cover size parameter");
    verify_cmd->add_option("--s", vf.s, "coverage-lemma set deficiency");
    verify_cmd->add_option("--t", vf.t, "block count");
    verify_cmd->add_option("--t1", vf.t1, "gap-hamming universe size");
    verify_cmd->add_option("--a", vf.a, "|A_i|");
    verify_cmd->add_option("--b", vf.b, "|B_i|");
    verify_cmd->add_option("--u-size", vf.u_size, "target subset size");
    verify_cmd->add_option("--alpha", vf.alpha, "approximation parameter");
    verify_cmd->add_option("--rho", vf.rho, "element-sampling slack");
    verify_cmd->add_option("--eps", vf.eps, "solver epsilon");
    verify_cmd->add_option("--planted-opt", vf.planted_opt, "planted cover size");
    verify_cmd->add_flag("--json", vf.as_json, "machine-readable output");

    // bench
    std::string bench_suite, bench_out;
    std::optional<std::uint64_t> bench_seed;
    auto* bench_cmd = app.add_subcommand("bench", "run a suite file into a CSV table");
    bench_cmd->add_option("--suite", bench_suite, "suite file, one gen-sc spec per line")
        ->required();
    bench_cmd->add_option("--seed", bench_seed, "rng seed (drawn and printed if absent)");
    bench_cmd->add_option("--out", bench_out, "CSV output path")->required();

    try {
        app.parse(argc, argv);

        if (*gen_sc_cmd)
            return run_gen_sc(sc_n, sc_m, sc_t, sc_alpha, sc_theta, sc_seed, sc_out,
                              sc_full_meta, sc_partition);
        if (*gen_mc_cmd)
            return run_gen_mc(mc_m, mc_t1, mc_a, mc_b, mc_theta, mc_seed, mc_out,
                              mc_full_meta);
        if (*gen_disj_cmd)
            return run_gen_disj(dj_t, dj_side, dj_seed, dj_out, dj_full_meta);
        if (*solve_stream_cmd)
            return run_solve_stream(ss_input, ss_alpha, ss_eps, ss_seed, ss_guess,
                                    ss_order, ss_subsolver, ss_budget, ss_json);
        if (*solve_exact_cmd) return run_solve_exact(se_input, se_cap, se_json);
        if (*solve_greedy_cmd) return run_solve_greedy(sg_input, sg_json);
        if (*verify_cmd) return run_verify(vf);
        if (*bench_cmd) return run_bench(bench_suite, bench_seed, bench_out);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
