// Integration tests driving the installed CLI binary end to end.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "attrboost/model_io.hpp"

using namespace attrboost;
namespace fs = std::filesystem;

namespace {

const std::string kCli = ATTRBOOST_CLI_PATH;

struct RunOutput {
    int exit_code = 0;
    std::string stdout_text;
};

RunOutput run(const std::string& args) {
    const fs::path out_file = fs::temp_directory_path() / "attrboost_cli_stdout.txt";
    const std::string cmd = kCli + " " + args + " > " + out_file.string() + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    RunOutput result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream in(out_file);
    std::stringstream buf;
    buf << in.rdbuf();
    result.stdout_text = buf.str();
    return result;
}

fs::path work_dir() {
    const fs::path dir = fs::temp_directory_path() / "attrboost_cli_test";
    fs::create_directories(dir);
    return dir;
}

std::string write_manifest(int n) {
    const fs::path path = work_dir() / "manifest.jsonl";
    std::ofstream out(path, std::ios::trunc);
    for (int i = 0; i < n; ++i) {
        out << R"({"id":"c)" << i << R"(","media_ref":"mem://c)" << i << R"(","label":)"
            << (i % 2) << "}\n";
    }
    return path.string();
}

}  // namespace

TEST_CASE("train writes the four artifacts and exits 0") {
    const std::string manifest = write_manifest(24);
    const fs::path out = work_dir() / "run_ok";
    fs::remove_all(out);
    const auto result = run("train --manifest " + manifest + " --out " + out.string() +
                            " --seed 7 --set T=2 --set q=3 --set k=3");
    CHECK(result.exit_code == 0);
    CHECK(fs::exists(out / "model.json"));
    CHECK(fs::exists(out / "trace.json"));
    CHECK(fs::exists(out / "ledger.json"));
    CHECK(fs::exists(out / "cache.jsonl"));
    const EnsembleModel model = load_model((out / "model.json").string());
    CHECK(model.rounds.size() == 2);
}

TEST_CASE("unknown override key exits 2") {
    const std::string manifest = write_manifest(24);
    const auto result = run("train --manifest " + manifest + " --out " +
                            (work_dir() / "run_bad").string() + " --seed 7 --set bogus=1");
    CHECK(result.exit_code == 2);
}

TEST_CASE("bad manifest label exits 4") {
    const fs::path path = work_dir() / "bad_manifest.jsonl";
    {
        std::ofstream out(path, std::ios::trunc);
        out << R"({"id":"a","media_ref":"mem://a","label":7})" << "\n";
        out << R"({"id":"b","media_ref":"mem://b","label":0})" << "\n";
    }
    const auto result = run("train --manifest " + path.string() + " --out " +
                            (work_dir() / "run_bad2").string() + " --seed 7");
    CHECK(result.exit_code == 4);
}

TEST_CASE("eval on the training manifest with a warm cache matches the trace") {
    const std::string manifest = write_manifest(24);
    const fs::path out = work_dir() / "run_eval";
    fs::remove_all(out);
    REQUIRE(run("train --manifest " + manifest + " --out " + out.string() +
                " --seed 11 --set T=3 --set q=3 --set k=3")
                .exit_code == 0);

    const auto eval_result =
        run("eval --model " + (out / "model.json").string() + " --manifest " + manifest +
            " --cache " + (out / "cache.jsonl").string() + " --seed 11");
    REQUIRE(eval_result.exit_code == 0);
    const auto report = nlohmann::json::parse(eval_result.stdout_text);
    CHECK(report.at("oracle_calls").get<long>() == 0);  // warm cache

    std::ifstream trace_in(out / "trace.json");
    const auto trace = nlohmann::json::parse(trace_in);
    const double final_acc = trace.at("iterations").back().at("train_accuracy").get<double>();
    CHECK(report.at("accuracy").get<double>() == doctest::Approx(final_acc).epsilon(1e-12));
}

TEST_CASE("predict emits one JSON line per instance") {
    const std::string manifest = write_manifest(10);
    const fs::path out = work_dir() / "run_pred";
    fs::remove_all(out);
    REQUIRE(run("train --manifest " + manifest + " --out " + out.string() +
                " --seed 3 --set T=2 --set q=2 --set k=3")
                .exit_code == 0);
    const auto result = run("predict --model " + (out / "model.json").string() + " --manifest " +
                            manifest + " --cache " + (out / "cache.jsonl").string() + " --seed 3");
    REQUIRE(result.exit_code == 0);
    std::istringstream lines(result.stdout_text);
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        const auto rec = nlohmann::json::parse(line);
        CHECK(rec.contains("id"));
        const int label = rec.at("label").get<int>();
        CHECK((label == 1 || label == -1));
        ++count;
    }
    CHECK(count == 10);
}

TEST_CASE("attrs sorts by descending alpha with iteration as tiebreak") {
    // write a model by hand with alphas (0.2, 0.9, 0.5)
    EnsembleModel model;
    for (int i = 0; i < 3; ++i)
        model.attributes.push_back(
            AttributeDefinition::make("Is feature " + std::to_string(i) + " present?", i + 1));
    model.rounds = {{Stump{model.attributes[0].attr_id, +1}, 0.2},
                    {Stump{model.attributes[1].attr_id, +1}, 0.9},
                    {Stump{model.attributes[2].attr_id, -1}, 0.5}};
    const fs::path path = work_dir() / "hand_model.json";
    save_model(model, path.string());

    const auto result = run("attrs --model " + path.string());
    REQUIRE(result.exit_code == 0);
    const auto listing = nlohmann::json::parse(result.stdout_text);
    REQUIRE(listing.size() == 3);
    CHECK(listing[0].at("iteration") == 2);
    CHECK(listing[1].at("iteration") == 3);
    CHECK(listing[2].at("iteration") == 1);
}

TEST_CASE("attrs on a zero-round model prints an empty listing") {
    EnsembleModel model;
    const fs::path path = work_dir() / "empty_model.json";
    save_model(model, path.string());
    const auto result = run("attrs --model " + path.string());
    CHECK(result.exit_code == 0);
    CHECK(nlohmann::json::parse(result.stdout_text).empty());
}

TEST_CASE("synth command reports deterministic statistics") {
    const std::string args =
        "synth --seed 19 --trials 2 --n-train 40 --n-test 40 --eta 0.1 "
        "--set T=3 --set q=3 --set k=4";
    const auto r1 = run(args);
    const auto r2 = run(args);
    REQUIRE(r1.exit_code == 0);
    const auto j1 = nlohmann::json::parse(r1.stdout_text);
    const auto j2 = nlohmann::json::parse(r2.stdout_text);
    CHECK(j1.at("mean_acc") == j2.at("mean_acc"));
    CHECK(j1.at("std_acc") == j2.at("std_acc"));
    CHECK(j1.at("trials") == 2);
}

TEST_CASE("cache command reports entry counts and compacts") {
    const std::string manifest = write_manifest(12);
    const fs::path out = work_dir() / "run_cache";
    fs::remove_all(out);
    REQUIRE(run("train --manifest " + manifest + " --out " + out.string() +
                " --seed 5 --set T=2 --set q=2 --set k=3")
                .exit_code == 0);
    const auto stats = run("cache --journal " + (out / "cache.jsonl").string());
    REQUIRE(stats.exit_code == 0);
    const auto report = nlohmann::json::parse(stats.stdout_text);
    CHECK(report.at("entries").get<long>() > 0);
    CHECK(run("cache --journal " + (out / "cache.jsonl").string() + " --compact").exit_code == 0);
}

TEST_CASE("record then replay reproduces the model bytes with no live backend") {
    const std::string manifest = write_manifest(20);
    const fs::path rec_out = work_dir() / "run_record";
    const fs::path rep_out = work_dir() / "run_replay";
    const fs::path journal = work_dir() / "oracle_journal.jsonl";
    fs::remove_all(rec_out);
    fs::remove_all(rep_out);

    REQUIRE(run("train --manifest " + manifest + " --out " + rec_out.string() +
                " --seed 23 --set T=2 --set q=3 --set k=3 --oracle scripted --record --journal " +
                journal.string())
                .exit_code == 0);
    REQUIRE(run("train --manifest " + manifest + " --out " + rep_out.string() +
                " --seed 23 --set T=2 --set q=3 --set k=3 --oracle replay --journal " +
                journal.string())
                .exit_code == 0);

    std::ifstream m1(rec_out / "model.json"), m2(rep_out / "model.json");
    std::stringstream b1, b2;
    b1 << m1.rdbuf();
    b2 << m2.rdbuf();
    CHECK(b1.str() == b2.str());
    CHECK(!b1.str().empty());
}

TEST_CASE("replay with an incomplete journal exits 3") {
    const std::string manifest = write_manifest(20);
    const fs::path journal = work_dir() / "oracle_journal.jsonl";  // from previous test
    if (!fs::exists(journal)) return;
    const auto result = run("train --manifest " + manifest + " --out " +
                            (work_dir() / "run_replay_miss").string() +
                            " --seed 99 --set T=2 --set q=3 --set k=3 --oracle replay --journal " +
                            journal.string());
    CHECK(result.exit_code == 3);
}
