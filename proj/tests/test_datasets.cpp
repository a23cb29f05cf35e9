#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "aigas/datasets.hpp"

using namespace aigas;
using Catch::Approx;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) {
        path = (std::filesystem::temp_directory_path() / name).string();
    }
    ~TempFile() { std::remove(path.c_str()); }
};

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

Point window_mean(const Stream& s, long begin, long end, int cls) {
    Point mean{0, 0};
    long count = 0;
    for (long i = begin; i < end; ++i) {
        if (s[i].label != cls) continue;
        mean[0] += s[i].features[0];
        mean[1] += s[i].features[1];
        ++count;
    }
    mean[0] /= count;
    mean[1] /= count;
    return mean;
}

}  // namespace

TEST_CASE("benchmark_specs: known rows") {
    const DatasetSpec& s = benchmark_spec("1CDT");
    REQUIRE(s.instances == 16000);
    REQUIRE(s.batches == 100);
    REQUIRE(s.t_s == 800);
    REQUIRE(s.gamma == 0.6);
    REQUIRE(s.eps_r == 0.2);
    REQUIRE(s.eps_d == 4.0);
    REQUIRE(derived_batch_size(s) == 152);

    const DatasetSpec& rcd = benchmark_spec("1CDT-RCD");
    REQUIRE(rcd.instances == 20000);
    REQUIRE(rcd.t_s == 1000);
    REQUIRE(derived_batch_size(rcd) == 190);

    REQUIRE(benchmark_specs().size() == 25);
    REQUIRE_THROWS_AS(benchmark_spec("nope"), InvalidParams);
}

TEST_CASE("load_csv: labels remapped by first appearance") {
    TempFile f("aigas_test_remap.csv");
    write_file(f.path, "0.1,0.2,1\n0.3,0.4,2\n0.5,0.6,1\n");
    const Stream s = load_csv(f.path);
    REQUIRE(s.size() == 3);
    REQUIRE(s[0].label == 0);
    REQUIRE(s[1].label == 1);
    REQUIRE(s[2].label == 0);
    REQUIRE(s[0].features == Point{0.1, 0.2});
}

TEST_CASE("load_csv: parse failures carry the row number") {
    TempFile f("aigas_test_bad.csv");
    write_file(f.path, "0.1,0.2,1\nx,0.4,2\n");
    try {
        load_csv(f.path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        REQUIRE(std::string(e.what()).find("row 2") != std::string::npos);
    }

    TempFile g("aigas_test_dims.csv");
    write_file(g.path, "0.1,0.2,1\n0.3,2\n");
    REQUIRE_THROWS_AS(load_csv(g.path), DimensionMismatch);

    TempFile h("aigas_test_empty.csv");
    write_file(h.path, "");
    REQUIRE_THROWS_AS(load_csv(h.path), ParseError);
}

TEST_CASE("load_csv and save_csv round-trip bit-exactly") {
    const Stream s = generate_preset("rc10k", 3);
    TempFile f("aigas_test_roundtrip.csv");
    save_csv(f.path, s);
    const Stream back = load_csv(f.path);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        REQUIRE(back[i].features == s[i].features);
        REQUIRE(back[i].label == s[i].label);
    }
}

TEST_CASE("induce_rcd: appended window, counts, copy semantics") {
    const Stream s = generate_preset("1cdt", 0);
    REQUIRE(s.size() == 16000);
    const Stream rcd = induce_rcd(s, 4000, 1000);
    REQUIRE(rcd.size() == 20000);
    for (long i = 0; i < 4000; ++i) {
        REQUIRE(rcd[16000 + i].features == s[1000 + i].features);
        REQUIRE(rcd[16000 + i].label == s[1000 + i].label);
    }
    REQUIRE(induce_rcd(s, 0, 0).size() == s.size());
    REQUIRE_THROWS_AS(induce_rcd(s, 4000, 15000), OutOfRange);
}

TEST_CASE("batchify: partition of the stream") {
    const Stream s = generate_preset("1cdt", 1);
    const BatchifyResult r = batchify(s, 152, 800);
    REQUIRE(r.prefix.size() == 800);
    REQUIRE(r.batches.size() == 100);
    std::size_t total = 0;
    for (std::size_t b = 0; b < r.batches.size(); ++b) {
        REQUIRE(r.batches[b].size() == r.truths[b].size());
        total += r.batches[b].size();
    }
    REQUIRE(total == s.size() - 800);

    // concatenating prefix + batches reproduces the stream
    std::size_t idx = 0;
    for (; idx < 800; ++idx) REQUIRE(r.prefix[idx].features == s[idx].features);
    for (std::size_t b = 0; b < r.batches.size(); ++b) {
        for (std::size_t j = 0; j < r.batches[b].size(); ++j, ++idx) {
            REQUIRE(r.batches[b][j] == s[idx].features);
            REQUIRE(r.truths[b][j] == s[idx].label);
        }
    }
}

TEST_CASE("batchify: boundary cases") {
    Stream s;
    for (int i = 0; i < 10; ++i) s.push_back({{double(i), 0.0}, 0});
    const BatchifyResult r = batchify(s, 4, 9);
    REQUIRE(r.batches.size() == 1);
    REQUIRE(r.batches[0].size() == 1);
    REQUIRE_THROWS_AS(batchify(s, 4, 10), OutOfRange);
}

TEST_CASE("generate_synthetic: zero drift keeps class means stationary") {
    SyntheticParams p;
    p.count = 4000;
    p.span = 0.0;
    p.hold = 100;
    p.sigma = 0.5;
    const Stream s = generate_synthetic(SyntheticKind::kTranslatingGaussians, p, 9);
    for (const int cls : {0, 1}) {
        const Point early = window_mean(s, 0, 1000, cls);
        const Point late = window_mean(s, 3000, 4000, cls);
        // 3 sigma / sqrt(n) per window with n ~ 500 per class
        REQUIRE(dist(early, late) < 3.0 * 0.5 / std::sqrt(500.0) * 2.0);
    }
}

TEST_CASE("generate_synthetic: recurrent jump returns to the initial means") {
    SyntheticParams p;
    p.count = 10000;
    p.hold = 500;
    p.jump_at = 6000;
    p.span = 8.0;
    const Stream s = generate_synthetic(SyntheticKind::kRecurrentTranslating, p, 4);
    for (const int cls : {0, 1}) {
        const Point before = window_mean(s, 0, 100, cls);
        const Point after = window_mean(s, 6000, 6100, cls);
        REQUIRE(dist(before, after) < 0.1);
    }
    // and the means right before the jump are far from the start
    const Point pre_jump = window_mean(s, 5900, 6000, 0);
    REQUIRE(dist(pre_jump, window_mean(s, 0, 100, 0)) > 5.0);
}

TEST_CASE("generate_synthetic: rotating gaussians orbit at a fixed radius") {
    SyntheticParams p;
    p.count = 8000;
    p.classes = 2;
    p.sigma = 0.2;
    p.separation = 4.0;  // class 1 orbit radius; class 0 stays at the center
    p.span = 0.5;        // half a turn
    p.hold = 200;
    const Stream s = generate_synthetic(SyntheticKind::kRotatingGaussians, p, 8);

    const Point early = window_mean(s, 0, 200, 1);
    const Point late = window_mean(s, 7800, 8000, 1);
    REQUIRE(dist(early, {0, 4}) < 0.2);       // starts at angle 0
    REQUIRE(dist(late, {0, -4}) < 0.35);      // half turn later
    for (long i = 200; i < 8000; i += 500) {
        const Point m = window_mean(s, i, i + 200, 1);
        REQUIRE(std::hypot(m[0], m[1]) == Approx(4.0).margin(0.25));
    }
}

TEST_CASE("generate_synthetic: deterministic for a fixed seed") {
    SyntheticParams p;
    p.count = 2000;
    const Stream a = generate_synthetic(SyntheticKind::kTranslatingGaussians, p, 7);
    const Stream b = generate_synthetic(SyntheticKind::kTranslatingGaussians, p, 7);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].features == b[i].features);
}

TEST_CASE("generate_synthetic: parameter validation") {
    SyntheticParams p;
    p.sigma = -1.0;
    REQUIRE_THROWS_AS(generate_synthetic(SyntheticKind::kTranslatingGaussians, p, 0),
                      InvalidParams);
    SyntheticParams q;
    q.jump_at = -1;
    REQUIRE_THROWS_AS(generate_synthetic(SyntheticKind::kRecurrentTranslating, q, 0),
                      InvalidParams);
    REQUIRE_THROWS_AS(synthetic_kind_from_name("bogus"), InvalidParams);
}

TEST_CASE("generate_preset: benchmark-shaped streams") {
    const Stream a = generate_preset("1cdt", 0);
    REQUIRE(a.size() == 16000);
    const Stream b = generate_preset("2cdt", 0);
    REQUIRE(b.size() == 16000);
    const Stream c = generate_preset("rc10k", 0);
    REQUIRE(c.size() == 10000);
    for (const Stream* s : {&a, &b, &c}) {
        int max_label = 0;
        for (const StreamInstance& inst : *s) {
            REQUIRE(inst.features.size() == 2);
            max_label = std::max(max_label, inst.label);
        }
        REQUIRE(max_label == 1);
    }
    REQUIRE_THROWS_AS(generate_preset("nope", 0), InvalidParams);
}
