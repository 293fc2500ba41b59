#include "doctest.h"

#include "checkembed/cli.hpp"
#include "checkembed/eval.hpp"
#include "checkembed/pipeline.hpp"
#include "cli_fixtures.hpp"
#include "support.hpp"

#include "json.hpp"

using namespace checkembed;
using testsupport::run_cli;
namespace fs = std::filesystem;

TEST_CASE("verify exit codes follow the verdict") {
    const auto dir = testsupport::scratch_dir("cli-verify");
    fs::create_directories(dir / "same");
    fs::create_directories(dir / "diff");
    const auto same = testsupport::verify_fixture(dir / "same", testsupport::identical_replies());
    CHECK(same.code == cli::kExitOk);
    CHECK(same.out.find("verdict HighConfidence") != std::string::npos);
    for (const char* f : {"report.json", "heatmap.csv", "heatmap.svg"}) CHECK(fs::exists(dir / "same" / "out" / f));

    const auto diff = testsupport::verify_fixture(dir / "diff", testsupport::disjoint_replies());
    CHECK(diff.code == cli::kExitInspect);
    fs::remove_all(dir);
}

TEST_CASE("verify twice gives byte-identical outputs") {
    const auto dir = testsupport::scratch_dir("cli-twice");
    REQUIRE(testsupport::verify_fixture(dir, testsupport::disjoint_replies()).code == cli::kExitInspect);
    std::map<std::string, std::string> first;
    for (const char* f : {"report.json", "heatmap.csv", "heatmap.svg"}) first[f] = read_file(dir / "out" / f);
    REQUIRE(testsupport::verify_fixture(dir, testsupport::disjoint_replies()).code == cli::kExitInspect);
    for (const auto& [name, text] : first) {
        CAPTURE(name);
        CHECK(read_file(dir / "out" / name) == text);
    }
    fs::remove_all(dir);
}

TEST_CASE("verify errors exit 1 without outputs") {
    const auto dir = testsupport::scratch_dir("cli-missing");
    atomic_write(dir / "prompt.txt", "q");
    const auto r = run_cli({"verify", "--config", (dir / "nope.json").string(), "--prompt",
                            (dir / "prompt.txt").string(), "--out", (dir / "out").string()});
    CHECK(r.code == cli::kExitError);
    CHECK(r.err.find("error:") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "out"));

    atomic_write(dir / "config.json", testsupport::stub_config({"a"}, 3, "out"));
    atomic_write(dir / "empty.txt", "  \n");
    CHECK(run_cli({"verify", "--config", (dir / "config.json").string(), "--prompt", (dir / "empty.txt").string()})
              .code == cli::kExitError);
    CHECK_FALSE(fs::exists(dir / "out"));

    atomic_write(dir / "bad.json", "{\"k\": 1}");
    CHECK(run_cli({"verify", "--config", (dir / "bad.json").string(), "--prompt", (dir / "prompt.txt").string()})
              .code == cli::kExitError);
    CHECK(run_cli({"verify"}).code == cli::kExitError);
    CHECK(run_cli({"frobnicate"}).code == cli::kExitError);
    fs::remove_all(dir);
}

TEST_CASE("eval on the synthetic corpus") {
    const auto dir = testsupport::scratch_dir("cli-eval");
    eval::SyntheticOptions o;
    o.records = 30;
    o.replies = 4;
    atomic_write(dir / "synth.jsonl", eval::passages_to_jsonl(eval::synthetic_corpus(o)));
    atomic_write(dir / "config.json", testsupport::stub_config({"unused"}, 3, "out"));

    const auto r = run_cli({"eval", "--config", (dir / "config.json").string(), "--dataset",
                            (dir / "synth.jsonl").string(), "--scheme", "checkembed", "--task", "wikibio"});
    CHECK(r.code == cli::kExitOk);
    const auto j = nlohmann::json::parse(read_file(dir / "out" / "eval-wikibio-checkembed.json"));
    CHECK(j["correlation"].contains("pearson"));
    CHECK(j["correlation"].contains("spearman"));
    CHECK(j["correlation"]["spearman"].get<double>() > 80.0);

    const auto sweep = run_cli({"eval", "--config", (dir / "config.json").string(), "--dataset",
                                (dir / "synth.jsonl").string(), "--sweep", "2,4"});
    CHECK(sweep.code == cli::kExitOk);
    const auto sj = nlohmann::json::parse(read_file(dir / "out" / "eval-wikibio-checkembed.json"));
    CHECK(sj["rows"].size() == 2);

    const auto bad = run_cli({"eval", "--config", (dir / "config.json").string(), "--dataset",
                              (dir / "synth.jsonl").string(), "--scheme", "magic"});
    CHECK(bad.code == cli::kExitError);
    for (eval::Scheme s : eval::all_schemes()) CHECK(bad.err.find(std::string(eval::to_string(s))) != std::string::npos);

    atomic_write(dir / "broken.jsonl", "{\"id\": 1}\n");
    CHECK(run_cli({"eval", "--config", (dir / "config.json").string(), "--dataset", (dir / "broken.jsonl").string()})
              .code == cli::kExitError);
    fs::remove_all(dir);
}

TEST_CASE("eval on a ragtruth fixture reports the best threshold") {
    const auto dir = testsupport::scratch_dir("cli-ragtruth");
    std::vector<eval::BinaryRecord> records;
    for (int i = 0; i < 8; ++i) {
        eval::BinaryRecord r;
        r.id = "r" + std::to_string(i);
        const bool faithful = i % 2 == 0;
        r.label = faithful ? eval::Binary::Faithful : eval::Binary::Hallucinated;
        r.response = "the report states revenue grew in the third quarter";
        if (faithful) {
            r.samples = {r.response, r.response, "the report states revenue grew in the third quarter again"};
        } else {
            r.samples = {"weather was sunny", "cats enjoy naps", "trains run late on mondays"};
        }
        records.push_back(r);
    }
    atomic_write(dir / "rag.jsonl", eval::binary_records_to_jsonl(records));
    atomic_write(dir / "config.json", testsupport::stub_config({"unused"}, 3, "out"));
    for (const char* scheme : {"checkembed", "selfcheck_nli"}) {
        CAPTURE(scheme);
        const auto r = run_cli({"eval", "--config", (dir / "config.json").string(), "--dataset",
                                (dir / "rag.jsonl").string(), "--scheme", scheme, "--task", "ragtruth"});
        CHECK(r.code == cli::kExitOk);
        const auto j = nlohmann::json::parse(read_file(dir / "out" / ("eval-ragtruth-" + std::string(scheme) + ".json")));
        CHECK(j.contains("best_threshold"));
    }
    const auto j = nlohmann::json::parse(read_file(dir / "out" / "eval-ragtruth-checkembed.json"));
    CHECK(j["best"]["f1"].get<double>() == 1.0);
    fs::remove_all(dir);
}

TEST_CASE("heatmap command") {
    const auto dir = testsupport::scratch_dir("cli-heatmap");
    REQUIRE(testsupport::verify_fixture(dir, testsupport::disjoint_replies()).code == cli::kExitInspect);
    const auto r = run_cli({"heatmap", "--report", (dir / "out" / "report.json").string(), "--out",
                            (dir / "again.svg").string()});
    CHECK(r.code == cli::kExitOk);
    CHECK(read_file(dir / "again.svg") == read_file(dir / "out" / "heatmap.svg"));
    CHECK(read_file(dir / "again.csv") == read_file(dir / "out" / "heatmap.csv"));

    atomic_write(dir / "junk.json", "{");
    CHECK(run_cli({"heatmap", "--report", (dir / "junk.json").string(), "--out", (dir / "x.svg").string()}).code ==
          cli::kExitError);
    fs::remove_all(dir);
}

TEST_CASE("cost command") {
    const auto table = run_cli({"cost", "--k", "10", "--d", "3072"});
    CHECK(table.code == cli::kExitOk);
    CHECK(table.out.find("checkembed") != std::string::npos);
    CHECK(table.out.find("gptscore: cost unknown") != std::string::npos);

    const auto json = run_cli({"cost", "--json", "--scheme", "checkembed", "--k", "10", "--d", "3072"});
    CHECK(json.code == cli::kExitOk);
    const auto j = nlohmann::json::parse(json.out);
    CHECK(j["rows"][0]["work"] == 307220.0);

    CHECK(run_cli({"cost", "--scheme", "bertscore", "--task", "verification"}).code == cli::kExitError);
    CHECK(run_cli({"cost", "--k", "0"}).code == cli::kExitError);
    CHECK(run_cli({"--help"}).code == cli::kExitOk);
}
