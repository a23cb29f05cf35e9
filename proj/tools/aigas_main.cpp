// Command-line harness: dataset generation, recurrent-drift induction,
// single runs, and the benchmark driver.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "aigas/datasets.hpp"
#include "aigas/pipeline.hpp"
#include "aigas/reporting.hpp"

namespace fs = std::filesystem;
using namespace aigas;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitDataset = 2;
constexpr int kExitRuntime = 3;

struct RunArgs {
    std::string data;
    std::string config;
    std::string out;
    bool no_memory = false;
    long long seed = -1;  // < 0: keep the config's seed
};

int do_run(const RunArgs& args) {
    RunConfig cfg;
    std::string raw_config;
    try {
        cfg = load_config(args.config, &raw_config);
        if (args.no_memory) cfg.memory_enabled = false;
        if (args.seed >= 0) cfg.seed = static_cast<uint64_t>(args.seed);
        validate(cfg);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    Stream stream;
    try {
        stream = load_csv(args.data);
    } catch (const Error& e) {
        std::cerr << "dataset error: " << e.what() << "\n";
        return kExitDataset;
    }

    try {
        const RunOutput out = run_with_memory(stream, cfg);
        fs::create_directories(args.out);
        write_report_json((fs::path(args.out) / "report.json").string(), out.report,
                          args.data, raw_config);
        write_batches_csv((fs::path(args.out) / "batches.csv").string(), out.report);
        write_memory_csv((fs::path(args.out) / "memory.csv").string(), out.memory);
        std::cout << "dataset " << args.data << ": prequential error "
                  << out.report.final_error_percent << "%, macro F1 "
                  << out.report.macro_f1_score << ", memory size "
                  << out.memory.size() << ", " << out.report.wall_seconds << " s\n";
        return 0;
    } catch (const Error& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return kExitRuntime;
    }
}

struct InduceArgs {
    std::string in;
    std::string out;
    long append = 0;
    long source_start = 0;
};

int do_induce(const InduceArgs& args) {
    try {
        const Stream stream = load_csv(args.in);
        const Stream extended = induce_rcd(stream, args.append, args.source_start);
        save_csv(args.out, extended);
        std::cout << "wrote " << args.out << ": " << stream.size() << " -> "
                  << extended.size() << " instances\n";
        return 0;
    } catch (const Error& e) {
        std::cerr << "induce-rcd failed: " << e.what() << "\n";
        return kExitDataset;
    }
}

struct GenArgs {
    std::string out;
    std::string preset;
    std::string kind;
    long long seed = 0;
    SyntheticParams params;
};

int do_gen(const GenArgs& args) {
    try {
        Stream stream;
        if (!args.preset.empty()) {
            stream = generate_preset(args.preset, static_cast<uint64_t>(args.seed));
        } else if (!args.kind.empty()) {
            stream = generate_synthetic(synthetic_kind_from_name(args.kind), args.params,
                                        static_cast<uint64_t>(args.seed));
        } else {
            std::cerr << "gen: need --preset or --kind\n";
            return kExitConfig;
        }
        save_csv(args.out, stream);
        std::cout << "wrote " << args.out << ": " << stream.size() << " instances\n";
        return 0;
    } catch (const Error& e) {
        std::cerr << "gen failed: " << e.what() << "\n";
        return kExitConfig;
    }
}

struct BenchArgs {
    std::string manifest;
    std::string out;
};

struct BenchRow {
    std::string name;
    double err_mem = 0.0, f1_mem = 0.0;
    double err_nomem = 0.0, f1_nomem = 0.0;
};

int do_bench(const BenchArgs& args) {
    std::ifstream in(args.manifest);
    if (!in) {
        std::cerr << "bench: cannot open manifest " << args.manifest << "\n";
        return kExitConfig;
    }
    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            std::cerr << "bench: manifest line needs 'dataset,config': " << line << "\n";
            return kExitConfig;
        }
        entries.emplace_back(line.substr(0, comma), line.substr(comma + 1));
    }
    if (entries.empty()) {
        std::cerr << "bench: empty manifest\n";
        return kExitConfig;
    }

    fs::create_directories(args.out);
    std::vector<BenchRow> rows;
    bool any_failed = false;
    for (const auto& [data_path, config_path] : entries) {
        BenchRow row;
        row.name = fs::path(data_path).stem().string();
        try {
            std::string raw_config;
            RunConfig cfg = load_config(config_path, &raw_config);
            validate(cfg);
            const Stream stream = load_csv(data_path);

            for (const bool memory : {true, false}) {
                RunConfig variant = cfg;
                variant.memory_enabled = memory;
                const RunOutput out = run_with_memory(stream, variant);
                const fs::path dir =
                    fs::path(args.out) / row.name / (memory ? "memory" : "no_memory");
                fs::create_directories(dir);
                write_report_json((dir / "report.json").string(), out.report, data_path,
                                  raw_config);
                write_batches_csv((dir / "batches.csv").string(), out.report);
                write_memory_csv((dir / "memory.csv").string(), out.memory);
                (memory ? row.err_mem : row.err_nomem) = out.report.final_error_percent;
                (memory ? row.f1_mem : row.f1_nomem) = out.report.macro_f1_score;
            }
            rows.push_back(row);
            std::cout << row.name << ": error " << row.err_mem << "% (memory) vs "
                      << row.err_nomem << "% (no memory)\n";
        } catch (const Error& e) {
            std::cerr << row.name << " failed: " << e.what() << "\n";
            any_failed = true;
        }
    }

    const std::string summary_path = (fs::path(args.out) / "summary.csv").string();
    std::ofstream summary(summary_path);
    summary << "dataset,error_percent_memory,f1_memory,error_percent_no_memory,f1_no_memory\n";
    auto emit = [&summary](const std::string& name, double a, double b, double c, double d) {
        summary << name << ',' << a << ',' << b << ',' << c << ',' << d << '\n';
    };
    for (const BenchRow& r : rows) emit(r.name, r.err_mem, r.f1_mem, r.err_nomem, r.f1_nomem);
    if (!rows.empty()) {
        auto stats = [&rows](auto accessor) {
            double mean = 0.0;
            for (const BenchRow& r : rows) mean += accessor(r);
            mean /= static_cast<double>(rows.size());
            double var = 0.0;
            for (const BenchRow& r : rows) {
                const double d = accessor(r) - mean;
                var += d * d;
            }
            return std::pair{mean, std::sqrt(var / static_cast<double>(rows.size()))};
        };
        const auto [em, es] = stats([](const BenchRow& r) { return r.err_mem; });
        const auto [fm, fs_] = stats([](const BenchRow& r) { return r.f1_mem; });
        const auto [en, ens] = stats([](const BenchRow& r) { return r.err_nomem; });
        const auto [fn, fns] = stats([](const BenchRow& r) { return r.f1_nomem; });
        emit("mean", em, fm, en, fn);
        emit("stddev", es, fs_, ens, fns);
    }
    std::cout << "summary written to " << summary_path << "\n";
    return any_failed ? kExitRuntime : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AiGAS-dEVL-RC stream learning harness"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* cmd_run = app.add_subcommand("run", "run the pipeline on one dataset");
    cmd_run->add_option("--data", run_args.data, "stream CSV")->required();
    cmd_run->add_option("--config", run_args.config, "run config JSON")->required();
    cmd_run->add_option("--out", run_args.out, "output directory")->required();
    cmd_run->add_flag("--no-memory", run_args.no_memory, "disable the concept memory");
    cmd_run->add_option("--seed", run_args.seed, "override the config seed");

    InduceArgs induce_args;
    CLI::App* cmd_induce = app.add_subcommand("induce-rcd", "append a recurrent-drift window");
    cmd_induce->add_option("--in", induce_args.in, "input stream CSV")->required();
    cmd_induce->add_option("--out", induce_args.out, "output stream CSV")->required();
    cmd_induce->add_option("--append", induce_args.append, "instances to append")->required();
    cmd_induce->add_option("--source-start", induce_args.source_start,
                           "start index of the copied window")->required();

    GenArgs gen_args;
    CLI::App* cmd_gen = app.add_subcommand("gen", "generate a synthetic stream");
    cmd_gen->add_option("--out", gen_args.out, "output stream CSV")->required();
    cmd_gen->add_option("--preset", gen_args.preset, "named stream: 1cdt, 2cdt, rc10k");
    cmd_gen->add_option("--kind", gen_args.kind,
                        "translating-gaussians | rotating-gaussians | recurrent-translating");
    cmd_gen->add_option("--seed", gen_args.seed, "generator seed");
    cmd_gen->add_option("--n", gen_args.params.count, "instance count");
    cmd_gen->add_option("--classes", gen_args.params.classes, "class count");
    cmd_gen->add_option("--sigma", gen_args.params.sigma, "class noise");
    cmd_gen->add_option("--separation", gen_args.params.separation, "class mean spacing");
    cmd_gen->add_option("--span", gen_args.params.span, "drift span");
    cmd_gen->add_option("--hold", gen_args.params.hold, "stationary warmup instances");
    cmd_gen->add_option("--jump-at", gen_args.params.jump_at, "recurrence instant");
    cmd_gen->add_option("--truncate", gen_args.params.truncate_sigmas,
                        "truncate noise at this many sigmas (0 = off)");

    BenchArgs bench_args;
    CLI::App* cmd_bench = app.add_subcommand("bench", "run a manifest of dataset/config pairs");
    cmd_bench->add_option("--manifest", bench_args.manifest, "lines of dataset.csv,config.json")
        ->required();
    cmd_bench->add_option("--out", bench_args.out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    if (cmd_run->parsed()) return do_run(run_args);
    if (cmd_induce->parsed()) return do_induce(induce_args);
    if (cmd_gen->parsed()) return do_gen(gen_args);
    if (cmd_bench->parsed()) return do_bench(bench_args);
    return kExitConfig;
}
