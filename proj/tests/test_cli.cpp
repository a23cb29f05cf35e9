#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "aigas/reporting.hpp"

namespace fs = std::filesystem;
using Catch::Approx;

namespace {

const std::string kCli = AIGAS_CLI_PATH;
const std::string kConfigDir = AIGAS_CONFIG_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("aigas_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args, const std::string& capture = "") {
    std::string cmd = kCli + " " + args;
    if (!capture.empty()) cmd += " > " + capture + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("cli run: writes reports and is byte-deterministic") {
    TempDir dir;
    REQUIRE(run_cli("gen --preset rc10k --seed 5 --out " + dir.file("s.csv")) == 0);
    const std::string config = kConfigDir + std::string("/synthetic_rc.json");

    REQUIRE(run_cli("run --data " + dir.file("s.csv") + " --config " + config + " --out " +
                    dir.file("a")) == 0);
    REQUIRE(run_cli("run --data " + dir.file("s.csv") + " --config " + config + " --out " +
                    dir.file("b")) == 0);

    const std::string csv_a = slurp(dir.file("a") + "/batches.csv");
    REQUIRE_FALSE(csv_a.empty());
    REQUIRE(csv_a == slurp(dir.file("b") + "/batches.csv"));

    // report files are readable by the library's own loaders
    const auto rows = aigas::read_batches_csv(dir.file("a") + "/batches.csv");
    REQUIRE(rows.size() == 95);
    const auto report = aigas::read_report_json(dir.file("a") + "/report.json");
    REQUIRE(report.at("instances_predicted").get<long>() == 9500);
    REQUIRE(report.at("batches").get<long>() == 95);
    REQUIRE(report.at("seed").get<uint64_t>() == 0);
    REQUIRE(rows.back().prequential_percent ==
            Approx(report.at("prequential_error_percent").get<double>()).margin(1e-9));
}

TEST_CASE("cli run: malformed config names the field, exit 1") {
    TempDir dir;
    REQUIRE(run_cli("gen --preset rc10k --seed 1 --out " + dir.file("s.csv")) == 0);
    write_file(dir.file("bad.json"),
               R"({"name":"x","batch_size":100,"supervised_prefix":500,"gamma":1.5,)"
               R"("eps_retrieve":0.2,"eps_store":2.0})");
    const int code = run_cli("run --data " + dir.file("s.csv") + " --config " +
                                 dir.file("bad.json") + " --out " + dir.file("out"),
                             dir.file("log.txt"));
    REQUIRE(code == 1);
    REQUIRE(slurp(dir.file("log.txt")).find("gamma") != std::string::npos);
}

TEST_CASE("cli run: unreadable dataset exits 2") {
    TempDir dir;
    const int code = run_cli("run --data " + dir.file("missing.csv") + " --config " +
                                 kConfigDir + std::string("/synthetic_rc.json") + " --out " +
                                 dir.file("out"),
                             dir.file("log.txt"));
    REQUIRE(code == 2);
}

TEST_CASE("cli induce-rcd: zero append copies the stream byte for byte") {
    TempDir dir;
    REQUIRE(run_cli("gen --preset rc10k --seed 2 --out " + dir.file("s.csv")) == 0);
    REQUIRE(run_cli("induce-rcd --in " + dir.file("s.csv") + " --out " + dir.file("zero.csv") +
                    " --append 0 --source-start 0") == 0);
    REQUIRE(slurp(dir.file("s.csv")) == slurp(dir.file("zero.csv")));

    // bounds violation exits 2
    REQUIRE(run_cli("induce-rcd --in " + dir.file("s.csv") + " --out " + dir.file("x.csv") +
                        " --append 4000 --source-start 9000",
                    dir.file("log.txt")) == 2);
}

TEST_CASE("cli bench: summary rows plus aggregates; empty manifest exits 1") {
    TempDir dir;
    REQUIRE(run_cli("gen --preset rc10k --seed 3 --out " + dir.file("a.csv")) == 0);
    REQUIRE(run_cli("gen --preset rc10k --seed 4 --out " + dir.file("b.csv")) == 0);
    const std::string config = kConfigDir + std::string("/synthetic_rc.json");
    write_file(dir.file("manifest.txt"), "# two desk streams\n" + dir.file("a.csv") + "," +
                                             config + "\n" + dir.file("b.csv") + "," + config +
                                             "\n");
    REQUIRE(run_cli("bench --manifest " + dir.file("manifest.txt") + " --out " +
                    dir.file("bench")) == 0);

    std::ifstream summary(dir.file("bench") + "/summary.csv");
    REQUIRE(summary.good());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(summary, line)) lines.push_back(line);
    REQUIRE(lines.size() == 5);  // header + 2 rows + mean + stddev
    REQUIRE(lines[0] ==
            "dataset,error_percent_memory,f1_memory,error_percent_no_memory,f1_no_memory");
    REQUIRE(lines[3].rfind("mean,", 0) == 0);
    REQUIRE(lines[4].rfind("stddev,", 0) == 0);

    // recurrent stream: memory must beat no-memory in both rows
    for (int i = 1; i <= 2; ++i) {
        std::stringstream ss(lines[i]);
        std::string name, em, fm, en, fn;
        std::getline(ss, name, ',');
        std::getline(ss, em, ',');
        std::getline(ss, fm, ',');
        std::getline(ss, en, ',');
        std::getline(ss, fn, ',');
        REQUIRE(std::stod(em) < std::stod(en));
    }

    write_file(dir.file("empty.txt"), "# nothing here\n");
    REQUIRE(run_cli("bench --manifest " + dir.file("empty.txt") + " --out " + dir.file("eb"),
                    dir.file("log.txt")) == 1);
}

TEST_CASE("cli: memory and no-memory agree on a stationary stream") {
    TempDir dir;
    REQUIRE(run_cli("gen --kind translating-gaussians --n 2300 --classes 2 --sigma 0.4 "
                    "--separation 6 --span 0 --hold 1 --truncate 2.5 --seed 6 --out " +
                    dir.file("s.csv")) == 0);
    // eps_store far above the stream diameter: storage can never fire and
    // retrieval can only return the init model, which equals the reference
    write_file(dir.file("cfg.json"),
               R"({"name":"stationary","batch_size":100,"supervised_prefix":300,)"
               R"("gamma":0.5,"eps_retrieve":0.2,"eps_store":1000.0,)"
               R"("gng":{"max_nodes":60,"lambda":20}})");
    REQUIRE(run_cli("run --data " + dir.file("s.csv") + " --config " + dir.file("cfg.json") +
                    " --out " + dir.file("mem")) == 0);
    REQUIRE(run_cli("run --data " + dir.file("s.csv") + " --config " + dir.file("cfg.json") +
                    " --no-memory --out " + dir.file("nomem")) == 0);
    const auto a = aigas::read_report_json(dir.file("mem") + "/report.json");
    const auto b = aigas::read_report_json(dir.file("nomem") + "/report.json");
    REQUIRE(a.at("prequential_error_fraction").get<double>() ==
            Approx(b.at("prequential_error_fraction").get<double>()).margin(1e-12));
}

TEST_CASE("cli gen: seed override and preset validation") {
    TempDir dir;
    REQUIRE(run_cli("gen --preset 1cdt --seed 7 --out " + dir.file("a.csv")) == 0);
    REQUIRE(run_cli("gen --preset 1cdt --seed 7 --out " + dir.file("b.csv")) == 0);
    REQUIRE(slurp(dir.file("a.csv")) == slurp(dir.file("b.csv")));
    REQUIRE(run_cli("gen --preset bogus --out " + dir.file("c.csv"), dir.file("log.txt")) == 1);
}
