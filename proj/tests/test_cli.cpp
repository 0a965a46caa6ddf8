#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef EVTCLI_PATH
#error "EVTCLI_PATH must point at the CLI binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kDir = fs::temp_directory_path() / "evtcli_test";

int run_raw(const std::string& cmd) {
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int run(const std::string& args) {
    return run_raw(std::string(EVTCLI_PATH) + " " + args + " > " +
                   (kDir / "stdout.txt").string() + " 2> " + (kDir / "stderr.txt").string());
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    return json::parse(in);
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_week3_model(const fs::path& p) {
    const json model{{"family", "gumbel"},
                     {"alpha", {2.22, 10.37, 3.21}},
                     {"beta", {0.0, 0.84, 0.59}},
                     {"scales", {72.0, 256.0, 392.0}},
                     {"thresholds", {339.0, 339.0, 339.0}},
                     {"loglik", 0.0},
                     {"n", 30},
                     {"submodel", "M1"}};
    std::ofstream out(p);
    out << model.dump(2);
}

}  // namespace

TEST_CASE("end-to-end pipeline: demo-data, segment, fit-uni, return-levels") {
    fs::create_directories(kDir);
    const auto series = (kDir / "series.csv").string();
    const auto feats = (kDir / "features.csv").string();

    CHECK(run("demo-data --output " + series + " --seed 8501") == 0);
    CHECK(fs::file_size(series) > 10000);

    const auto seg1 = kDir / "seg1.json";
    const auto seg2 = kDir / "seg2.json";
    CHECK(run("segment --input " + series + " --report " + seg1.string() +
              " --features " + feats) == 0);
    CHECK(run("segment --input " + series + " --report " + seg2.string() +
              " --features " + feats) == 0);

    json r1 = read_json(seg1);
    json r2 = read_json(seg2);
    CHECK(r1.at("schema_version") == "1");
    CHECK(r1.at("subcommand") == "segment");
    CHECK(r1.contains("generated_at"));
    CHECK(r1.contains("seed"));
    CHECK(r1.contains("config"));
    CHECK(r1.contains("result"));
    // Reports are reproducible apart from the timestamp.
    r1.erase("generated_at");
    r2.erase("generated_at");
    CHECK(r1 == r2);

    // The features artifact has the documented header.
    const std::string head = read_file(feats).substr(0, 34);
    CHECK(head.find("season,y1,y2,y3,size,has_week3") == 0);

    const auto uni = kDir / "uni.json";
    CHECK(run("fit-uni --input " + series + " --features " + feats + " --report " +
              uni.string()) == 0);
    json ru = read_json(uni);
    CHECK(ru.at("subcommand") == "fit-uni");
    CHECK(!ru.at("result").empty());

    const auto rl = kDir / "rl.json";
    CHECK(run("return-levels --u 100 --sigma 50 --pu 0.6 --alpha 0.95 --n 5 --report " +
              rl.string()) == 0);
    json rr = read_json(rl);
    const auto& row = rr.at("result").at("levels").at(0);
    const double expected =
        100.0 + 50.0 * (std::log(0.6) - std::log(1.0 - std::pow(0.95, 0.2)));
    CHECK(row.at("level").get<double>() == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("simulate is seed-deterministic and honours EVT_SEED") {
    fs::create_directories(kDir);
    const auto model = kDir / "model.json";
    write_week3_model(model);

    const auto csv1 = kDir / "sim1.csv";
    const auto csv2 = kDir / "sim2.csv";
    CHECK(run("simulate --model " + model.string() + " --n 20 --seed 5 --output " +
              csv1.string() + " --report " + (kDir / "sim1.json").string()) == 0);
    CHECK(run("simulate --model " + model.string() + " --n 20 --seed 5 --output " +
              csv2.string() + " --report " + (kDir / "sim2.json").string()) == 0);
    const std::string a = read_file(csv1);
    CHECK(a == read_file(csv2));
    CHECK(a.rfind("x1,x2,x3\n", 0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 21);

    // Seed falls back to the EVT_SEED environment variable.
    const auto rep = kDir / "sim_env.json";
    CHECK(run_raw("EVT_SEED=77 " EVTCLI_PATH " simulate --model " + model.string() +
                  " --n 5 --output " + (kDir / "sim3.csv").string() + " --report " +
                  rep.string() + " > /dev/null 2>&1") == 0);
    CHECK(read_json(rep).at("seed").get<std::uint64_t>() == 77);

    // A non-integer EVT_SEED is a configuration error.
    CHECK(run_raw("EVT_SEED=banana " EVTCLI_PATH " simulate --model " + model.string() +
                  " --n 5 --output " + (kDir / "sim4.csv").string() + " > /dev/null 2>&1") == 2);

    // Original units applies the affine map.
    const auto csv5 = kDir / "sim5.csv";
    CHECK(run("simulate --model " + model.string() + " --n 3 --seed 5 --original-units" +
              " --output " + csv5.string() + " --report " + (kDir / "sim5.json").string()) == 0);
    CHECK(read_file(csv5).rfind("y1,y2,y3\n", 0) == 0);
}

TEST_CASE("predict emits probabilities for explicit levels") {
    fs::create_directories(kDir);
    const auto model = kDir / "model.json";
    write_week3_model(model);
    const auto rep = kDir / "pred.json";
    CHECK(run("predict --model " + model.string() +
              " --y1 366 --y2 540 --level 1100 --level 2000 --report " + rep.string()) == 0);
    json r = read_json(rep);
    const auto& rows = r.at("result").at("predictions");
    REQUIRE(rows.size() == 2);
    const double p1 = rows.at(0).at("probability").get<double>();
    const double p2 = rows.at(1).at("probability").get<double>();
    CHECK(p1 > 0.0);
    CHECK(p1 < 1.0);
    CHECK(p2 < p1);  // higher level, smaller probability
}

TEST_CASE("domain and usage failures exit with code 2") {
    fs::create_directories(kDir);
    CHECK(run("--definitely-not-a-flag") == 2);
    CHECK(run("segment --input " + (kDir / "missing.csv").string() + " --report " +
              (kDir / "x.json").string() + " --features " + (kDir / "x.csv").string()) == 2);

    // Structurally broken model file.
    const auto bad = kDir / "bad_model.json";
    {
        std::ofstream out(bad);
        out << "{\"family\": \"gumbel\"}";
    }
    CHECK(run("predict --model " + bad.string() + " --y1 1 --y2 1 --level 10") == 2);

    // Invalid parameters (Gumbel alpha <= 1) are rejected on load.
    const auto invalid = kDir / "invalid_model.json";
    {
        json m{{"family", "gumbel"},        {"alpha", {0.5, 2.0, 2.0}},
               {"beta", {0.0, 0.0, 0.0}},   {"scales", {1.0, 1.0, 1.0}},
               {"thresholds", {0.0, 0.0, 0.0}}};
        std::ofstream out(invalid);
        out << m.dump();
    }
    CHECK(run("simulate --model " + invalid.string() + " --n 3 --seed 1 --output " +
              (kDir / "y.csv").string()) == 2);
}
