// Command-line front end over the fmrmr C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fmrmr.h"

namespace {

// Thrown for data/runtime failures; maps to exit code 1.
struct RunError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void check(fmrmr_status s, const std::string& context) {
    if (s != FMRMR_OK) throw RunError(context + ": " + fmrmr_status_name(s) + ": " + fmrmr_last_error());
}

unsigned resolve_threads(int flag) {
    if (flag > 0) return static_cast<unsigned>(flag);
    if (const char* env = std::getenv("FMRMR_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
        throw RunError(std::string("FMRMR_THREADS must be a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw RunError("cannot open '" + path + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void print_config(const nlohmann::ordered_json& j) { std::cerr << "config: " << j.dump() << '\n'; }

std::string fmt(double x, const char* spec) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, x);
    return buf;
}

struct SimulateArgs {
    std::string model, out;
    std::size_t n = 100;
    std::uint64_t seed = 0;
};

void run_simulate(const SimulateArgs& a) {
    print_config({{"command", "simulate"}, {"model", a.model}, {"n", a.n}, {"seed", a.seed}, {"out", a.out}});
    fmrmr_dataset* ds = nullptr;
    check(fmrmr_simulate(a.model.c_str(), a.n, a.seed, &ds), "simulate");
    const fmrmr_status s = fmrmr_dataset_write_csv(ds, a.out.c_str());
    fmrmr_dataset_free(ds);
    check(s, "write");
}

struct SelectArgs {
    std::string input, measure, criterion, out;
    std::size_t k = 10;
    std::uint64_t seed = 0;
};

void run_select(const SelectArgs& a) {
    print_config({{"command", "select"}, {"input", a.input}, {"measure", a.measure}, {"criterion", a.criterion},
                  {"k", a.k}, {"seed", a.seed}, {"out", a.out}});
    fmrmr_dataset* ds = nullptr;
    check(fmrmr_dataset_load_csv(a.input.c_str(), &ds), "load");
    std::vector<double> grid(fmrmr_dataset_points(ds));
    fmrmr_selection* sel = nullptr;
    fmrmr_status s = fmrmr_dataset_grid(ds, grid.data(), grid.size());
    if (s == FMRMR_OK) s = fmrmr_select(ds, a.measure.c_str(), a.criterion.c_str(), a.k, &sel);
    fmrmr_dataset_free(ds);
    check(s, "select");

    std::string csv = "index,time,score\n";
    for (std::size_t step = 0; step < fmrmr_selection_size(sel); ++step) {
        std::size_t index = 0;
        double score = 0.0;
        fmrmr_selection_get(sel, step, &index, &score);
        csv += std::to_string(index) + ',' + fmt(grid[index - 1], "%.17g") + ',' + fmt(score, "%.17g") + '\n';
    }
    fmrmr_selection_free(sel);
    std::ofstream out(a.out, std::ios::binary);
    if (!out || !(out << csv)) throw RunError("cannot write '" + a.out + "'");
}

struct BenchArgs {
    std::string config, out;
    int threads = 0;
    std::optional<std::uint64_t> seed;
};

void run_bench(const BenchArgs& a) {
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(read_file(a.config));
    } catch (const nlohmann::json::parse_error& e) {
        throw RunError(std::string("config is not valid JSON: ") + e.what());
    }
    if (a.seed) cfg["seed"] = *a.seed;
    const std::string text = cfg.dump();
    char* resolved = nullptr;
    check(fmrmr_config_resolve(text.c_str(), &resolved), "config");
    auto shown = nlohmann::ordered_json::parse(resolved);
    fmrmr_string_free(resolved);
    const unsigned threads = resolve_threads(a.threads);
    nlohmann::ordered_json header{{"command", "bench"}, {"out", a.out}, {"threads", threads}};
    header["experiment"] = shown;
    print_config(header);

    std::size_t failed = 0;
    check(fmrmr_bench(text.c_str(), a.out.c_str(), threads, &failed), "bench");
    if (failed > 0) std::cerr << "warning: " << failed << " run(s) failed and were left out of the report\n";
}

struct RealDataArgs {
    std::string input, out, config;
    std::vector<std::string> methods{"MID", "FCD", "RD", "VD", "CD"};
    std::vector<std::string> classifiers{"nb", "knn", "lda", "svm"};
    int derivative = 0;
    std::size_t folds = 0;
    std::uint64_t seed = 0;
    int threads = 0;
};

void run_realdata(const RealDataArgs& a) {
    nlohmann::json cfg = nlohmann::json::object();
    if (!a.config.empty()) {
        try {
            cfg = nlohmann::json::parse(read_file(a.config));
        } catch (const nlohmann::json::parse_error& e) {
            throw RunError(std::string("config is not valid JSON: ") + e.what());
        }
    }
    cfg["seed"] = a.seed;
    if (!cfg.contains("models")) cfg["models"] = {"G1"};  // placeholder so validation passes
    const std::string text = cfg.dump();
    char* resolved = nullptr;
    check(fmrmr_config_resolve(text.c_str(), &resolved), "config");
    auto shown = nlohmann::ordered_json::parse(resolved);
    fmrmr_string_free(resolved);
    shown.erase("models");
    shown.erase("sample_sizes");
    const unsigned threads = resolve_threads(a.threads);
    print_config({{"command", "realdata"}, {"input", a.input}, {"derivative", a.derivative},
                  {"folds", a.folds == 0 ? std::string("loo") : std::to_string(a.folds)}, {"methods", a.methods},
                  {"classifiers", a.classifiers}, {"threads", threads}, {"out", a.out}, {"tuning", shown}});

    fmrmr_dataset* raw = nullptr;
    check(fmrmr_dataset_load_csv(a.input.c_str(), &raw), "load");
    fmrmr_dataset* ds = raw;
    if (a.derivative > 0) {
        const fmrmr_status s = fmrmr_differentiate(raw, a.derivative, &ds);
        fmrmr_dataset_free(raw);
        check(s, "differentiate");
    }
    const std::size_t n = fmrmr_dataset_samples(ds);

    std::string acc_row, dim_row, head = "classifier,output,n";
    for (const auto& m : a.methods) head += ',' + m;
    std::string csv = head + '\n';
    for (const auto& clf : a.classifiers) {
        acc_row = clf + ",Average accuracy," + std::to_string(n);
        dim_row = clf + ",Average dim. red," + std::to_string(n);
        for (const auto& m : a.methods) {
            fmrmr_cv_result r{};
            const fmrmr_status s =
                fmrmr_cross_validate(ds, a.folds, a.seed, m.c_str(), clf.c_str(), text.c_str(), threads, &r);
            if (s != FMRMR_OK) {
                std::cerr << "warning: " << m << "/" << clf << ": " << fmrmr_last_error() << '\n';
                acc_row += ",-";
                dim_row += ",-";
                continue;
            }
            if (r.skipped > 0) std::cerr << "warning: " << m << "/" << clf << ": " << r.skipped << " fold(s) skipped\n";
            acc_row += ',' + fmt(100.0 * r.accuracy, "%.2f");
            dim_row += ',' + fmt(r.mean_dim, "%.1f");
        }
        csv += acc_row + '\n' + dim_row + '\n';
    }
    fmrmr_dataset_free(ds);
    std::ofstream out(a.out, std::ios::binary);
    if (!out || !(out << csv)) throw RunError("cannot write '" + a.out + "'");
}

void run_rank(const std::string& runs, const std::string& out) {
    print_config({{"command", "rank"}, {"runs", runs}, {"out", out}});
    check(fmrmr_rank(runs.c_str(), out.c_str()), "rank");
}

void run_catalog() {
    std::cerr << "config: {\"command\":\"catalog\"}\n";
    for (std::size_t i = 0; i < fmrmr_catalog_size(); ++i) {
        const char* id = nullptr;
        const char* desc = nullptr;
        check(fmrmr_catalog_entry(i, &id, &desc), "catalog");
        std::cout << id << ": " << desc << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable selection for functional classification via mRMR"};
    app.require_subcommand(1);
    app.set_version_flag("--version", fmrmr_version());

    const std::vector<std::string> measures{"C", "MI", "FC", "V", "R"};

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "Draw a sample from a catalog model");
    c_sim->add_option("--model", sim.model, "Model id (see 'catalog')")->required();
    c_sim->add_option("--n", sim.n, "Number of trajectories")->check(CLI::PositiveNumber);
    c_sim->add_option("--seed", sim.seed, "Random seed");
    c_sim->add_option("--out", sim.out, "Output CSV")->required();

    SelectArgs sel;
    auto* c_sel = app.add_subcommand("select", "Rank grid points of a dataset by mRMR");
    c_sel->add_option("--input", sel.input, "Input CSV")->required();
    c_sel->add_option("--measure", sel.measure, "Association measure")->required()->check(CLI::IsMember(measures));
    c_sel->add_option("--criterion", sel.criterion, "D (difference) or Q (quotient)")
        ->required()
        ->check(CLI::IsMember({"D", "Q"}));
    c_sel->add_option("--k", sel.k, "Number of variables")->required()->check(CLI::PositiveNumber);
    c_sel->add_option("--seed", sel.seed, "Random seed (selection itself is deterministic)");
    c_sel->add_option("--out", sel.out, "Output CSV")->required();

    BenchArgs bench;
    std::uint64_t bench_seed = 0;
    auto* c_bench = app.add_subcommand("bench", "Run a simulation benchmark from a JSON config");
    c_bench->add_option("--config", bench.config, "Experiment config (JSON)")->required();
    c_bench->add_option("--out", bench.out, "Output directory")->required();
    c_bench->add_option("--threads", bench.threads, "Worker threads (default: FMRMR_THREADS or all cores)")
        ->check(CLI::PositiveNumber);
    auto* bench_seed_opt = c_bench->add_option("--seed", bench_seed, "Override the config's master seed");

    RealDataArgs real;
    auto* c_real = app.add_subcommand("realdata", "Cross-validate methods on a curve CSV");
    c_real->add_option("--input", real.input, "Input CSV")->required();
    c_real->add_option("--out", real.out, "Summary CSV")->required();
    c_real->add_option("--config", real.config, "JSON with tuning grids (dim_candidates, k_candidates, ...)");
    c_real->add_option("--methods", real.methods, "Methods, e.g. RD MID Base")->delimiter(',');
    c_real->add_option("--classifiers", real.classifiers, "Classifiers")
        ->delimiter(',')
        ->check(CLI::IsMember({"nb", "knn", "lda", "svm"}));
    c_real->add_option("--derivative", real.derivative, "Differentiate curves first (0, 1 or 2)")
        ->check(CLI::Range(0, 2));
    c_real->add_option("--folds", real.folds, "K for k-fold CV; 0 = leave-one-out");
    c_real->add_option("--seed", real.seed, "Random seed");
    c_real->add_option("--threads", real.threads, "Worker threads")->check(CLI::PositiveNumber);

    std::string rank_runs, rank_out;
    auto* c_rank = app.add_subcommand("rank", "Aggregate and rank an existing runs.csv");
    c_rank->add_option("--runs", rank_runs, "runs.csv from a bench run")->required();
    c_rank->add_option("--out", rank_out, "Output directory")->required();

    auto* c_cat = app.add_subcommand("catalog", "List the simulation models");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_sim->parsed()) run_simulate(sim);
        if (c_sel->parsed()) run_select(sel);
        if (c_bench->parsed()) {
            if (bench_seed_opt->count()) bench.seed = bench_seed;
            run_bench(bench);
        }
        if (c_real->parsed()) run_realdata(real);
        if (c_rank->parsed()) run_rank(rank_runs, rank_out);
        if (c_cat->parsed()) run_catalog();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
