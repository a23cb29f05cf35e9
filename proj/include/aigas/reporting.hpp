#pragma once

#include <charconv>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "aigas/memory.hpp"
#include "aigas/pipeline.hpp"

namespace aigas {

// Per-batch diagnostics row of batches.csv.
struct BatchRow {
    long batch = 0;
    double prequential_percent = 0.0;
    std::optional<std::size_t> retrieved;
    bool stored = false;
    std::size_t memory_size = 0;
};

namespace detail {

inline std::string csv_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace detail

inline void write_batches_csv(const std::string& path, const RunReport& report) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "batch,prequential_percent,retrieved,stored,memory_size\n";
    for (std::size_t b = 0; b < report.batches.size(); ++b) {
        const BatchResult& res = report.batches[b];
        out << (b + 1) << ',' << detail::csv_double(100.0 * report.batch_prequential[b]) << ',';
        if (res.retrieved_model_index) out << *res.retrieved_model_index;
        out << ',' << (res.stored ? 1 : 0) << ',' << report.memory_sizes[b] << '\n';
    }
}

inline std::vector<BatchRow> read_batches_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("batch,", 0) != 0) {
        throw ParseError(path + ": missing batches.csv header");
    }
    std::vector<BatchRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<std::string> parts;
        while (std::getline(ss, tok, ',')) parts.push_back(tok);
        if (line.back() == ',') parts.push_back("");
        if (parts.size() != 5) {
            throw ParseError(path + ": row " + std::to_string(lineno) + " malformed");
        }
        BatchRow row;
        row.batch = std::stol(parts[0]);
        row.prequential_percent = std::stod(parts[1]);
        if (!parts[2].empty()) row.retrieved = std::stoul(parts[2]);
        row.stored = parts[3] == "1";
        row.memory_size = std::stoul(parts[4]);
        rows.push_back(row);
    }
    return rows;
}

// Summary report. The config echo keeps the raw text so a report is exactly
// reproducible from its own file.
inline nlohmann::json report_to_json(const RunReport& report, const std::string& dataset,
                                     const std::string& raw_config) {
    nlohmann::json j;
    j["dataset"] = dataset;
    j["config_name"] = report.config.name;
    j["config_echo"] = raw_config;
    j["seed"] = report.config.seed;
    j["memory_enabled"] = report.config.memory_enabled;
    j["batch_size"] = report.config.batch_size;
    j["supervised_prefix"] = report.config.t_s;
    j["batches"] = report.batches.size();
    j["instances_predicted"] = report.predictions.size();
    j["prequential_error_fraction"] = report.final_error_fraction;
    j["prequential_error_percent"] = report.final_error_percent;
    j["macro_f1"] = report.macro_f1_score;
    j["memory_size_final"] = report.memory_sizes.empty() ? 1 : report.memory_sizes.back();
    long retrievals = 0, stores = 0;
    for (const BatchResult& b : report.batches) {
        if (b.retrieved_model_index) ++retrievals;
        if (b.stored) ++stores;
    }
    j["retrieval_events"] = retrievals;
    j["store_events"] = stores;
    j["wall_clock_seconds"] = report.wall_seconds;
    return j;
}

inline void write_report_json(const std::string& path, const RunReport& report,
                              const std::string& dataset, const std::string& raw_config) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << report_to_json(report, dataset, raw_config).dump(2) << '\n';
}

inline nlohmann::json read_report_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return nlohmann::json::parse(in);
}

// Memory snapshot: one row per stored entity (prototype or node) so the
// whole memory reloads from flat CSV.
inline void write_memory_csv(const std::string& path, const Memory& memory) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write " + path);
    out << "model,batch_index_created,kind,label,coords\n";
    for (std::size_t m = 0; m < memory.size(); ++m) {
        const ConceptModel& model = memory.at(m);
        auto row = [&](const char* kind, int label, const Point& p) {
            out << m << ',' << model.batch_index_created << ',' << kind << ',' << label;
            for (const double v : p) out << ',' << detail::csv_double(v);
            out << '\n';
        };
        for (const Prototype& p : model.prototypes) row("prototype", p.label, p.centroid);
        for (std::size_t i = 0; i < model.nodes.points.size(); ++i) {
            row("node", model.nodes.labels[i], model.nodes.points[i]);
        }
    }
}

// Config file: flat JSON of RunConfig fields plus a nested gng block.
inline RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig cfg;
    cfg.name = j.value("name", "");
    cfg.batch_size = j.value("batch_size", 0);
    cfg.t_s = j.value("supervised_prefix", 0L);
    cfg.gamma = j.value("gamma", 0.6);
    cfg.eps_retrieve = j.value("eps_retrieve", 0.2);
    cfg.eps_store = j.value("eps_store", 4.0);
    cfg.k_annotate = j.value("k_annotate", 5);
    cfg.protos_per_class = j.value("protos_per_class", 1);
    cfg.memory_enabled = j.value("memory_enabled", true);
    cfg.seed = j.value("seed", 0ULL);
    if (j.contains("gng")) {
        const nlohmann::json& g = j.at("gng");
        cfg.gng.max_nodes = g.value("max_nodes", 0);
        cfg.gng.lambda = g.value("lambda", 100);
        cfg.gng.eps_b = g.value("eps_b", 0.2);
        cfg.gng.eps_n = g.value("eps_n", 0.006);
        cfg.gng.alpha_split = g.value("alpha_split", 0.5);
        cfg.gng.d_decay = g.value("d_decay", 0.995);
        cfg.gng.a_max = g.value("a_max", 50);
        cfg.gng.epochs = g.value("epochs", 3);
    } else {
        cfg.gng.max_nodes = 0;  // auto
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path, std::string* raw_text = nullptr) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    if (raw_text) *raw_text = buf.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(buf.str());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("config parse: ") + e.what());
    }
    return config_from_json(j);
}

}  // namespace aigas
