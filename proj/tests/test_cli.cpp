#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "oscspec/serialize.hpp"
#include "oscspec/specfun.hpp"

using namespace oscspec;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

// stdout and stderr together
RunResult run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + "\"" OSCSPEC_CLI_PATH "\" " + args + " 2>&1";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(OSCSPEC_TEST_DATA) + "/" + name; }

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("oscspec_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
    static inline int counter_ = 0;
};

void write(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

double max_diff(const json& a, const json& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i].get<double>() - b[i].get<double>()));
    return m;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("spectrum of the zero potential") {
    const auto r = run("spectrum " + data("zero.json") + " --n 6");
    REQUIRE(r.code == 0);
    const auto j = parse_json(r.out);
    for (int n = 0; n < 6; ++n) {
        CHECK(std::abs(j["sigma"][n].get<double>() - (4 * n + 3)) < 1e-8);
        CHECK(std::abs(j["r"][n].get<double>()) < 1e-8);
    }
    CHECK(j["config"]["N"] == 6);
    const auto t = run("spectrum " + data("zero.json") + " --n 3 --format table");
    CHECK(t.code == 0);
    CHECK(t.out.find("# config") == 0);
    CHECK(t.out.find("11.0000000000") != std::string::npos);
}

TEST_CASE("spectrum matches the golden file") {
    const auto golden = read_json_file(data("gaussian_spectrum_golden.json"));
    const auto r = run("spectrum " + data("gaussian.json") + " --n 12");
    REQUIRE(r.code == 0);
    const auto j = parse_json(r.out);
    CHECK(max_diff(j["sigma"], golden["sigma"]) < 1e-8);
    CHECK(max_diff(j["nu"], golden["nu"]) < 1e-8);
    CHECK(max_diff(j["r"], golden["r"]) < 1e-8);
    CHECK(std::abs(j["q0"].get<double>() - golden["q0"].get<double>()) < 1e-12);
    // reruns are bit-identical
    CHECK(run("spectrum " + data("gaussian.json") + " --n 12").out == r.out);
}

TEST_CASE("input errors exit with 1") {
    TempDir tmp;
    write(tmp.file("broken.json"), "{\"kind\": \"potential\",\n \"xmax\": }");
    const auto r = run("spectrum " + tmp.file("broken.json"));
    CHECK(r.code == 1);
    CHECK(r.out.find("byte") != std::string::npos);
    CHECK(run("spectrum /nonexistent.json").code == 1);
    CHECK(run("spectrum " + data("zero.json") + " --tol bogus=1").code == 1);
    CHECK(run("spectrum " + data("zero.json") + " --n 40 --xmax 5").code == 1);
    CHECK(run("nonsense").code != 0);
}

TEST_CASE("darboux and flow commands") {
    TempDir tmp;
    const auto input = potential_from_json(read_json_file(data("gaussian.json")));
    const auto zero_move = run("darboux " + data("gaussian.json") + " 2 0 --out " + tmp.file("same.json"));
    REQUIRE(zero_move.code == 0);
    const auto same = read_json_file(tmp.file("same.json"));
    double worst = 0.0;
    for (std::size_t i = 0; i < input.values().size(); ++i)
        worst = std::max(worst, std::abs(same["values"][i].get<double>() - input.values()[i]));
    CHECK(worst < 1e-12);

    REQUIRE(run("darboux " + data("gaussian.json") + " 1 -0.3 --out " + tmp.file("a.json")).code == 0);
    REQUIRE(run("darboux " + tmp.file("a.json") + " 0 0.4 --out " + tmp.file("b.json")).code == 0);
    REQUIRE(run("flow " + data("gaussian.json") + " 0:0.4 1:-0.3 --out " + tmp.file("f.json")).code == 0);
    CHECK(max_diff(read_json_file(tmp.file("b.json"))["values"], read_json_file(tmp.file("f.json"))["values"]) < 1e-8);

    const auto before = parse_json(run("spectrum " + data("gaussian.json") + " --n 10").out);
    const auto after = parse_json(run("spectrum " + tmp.file("f.json") + " --n 10").out);
    CHECK(max_diff(before["sigma"], after["sigma"]) < 1e-6);
    CHECK(run("flow " + data("gaussian.json") + " 0-0.4").code == 1);
}

TEST_CASE("verify command") {
    CHECK(run("verify " + data("zero.json") + " --n 12").code == 0);
    const auto ok = run("verify " + data("gaussian.json") + " --n 25 --format table");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("FAIL") == std::string::npos);

    TempDir tmp;
    REQUIRE(run("spectrum " + data("gaussian.json") + " --n 25 --neumann --out " + tmp.file("d.json")).code == 0);
    auto d = read_json_file(tmp.file("d.json"));
    d["sigma"][5] = d["sigma"][5].get<double>() + 0.5;
    write(tmp.file("bad.json"), d.dump());
    const auto bad = run("verify " + data("gaussian.json") + " --n 25 --data " + tmp.file("bad.json"));
    CHECK(bad.code == 2);
    const auto report = parse_json(bad.out);
    bool trace_failed = false;
    for (const auto& c : report["checks"])
        if (c["name"].get<std::string>().find("trace formula") != std::string::npos) trace_failed = !c["pass"].get<bool>();
    CHECK(trace_failed);
}

TEST_CASE("reconstruct command") {
    TempDir tmp;
    REQUIRE(run("spectrum " + data("zero.json") + " --n 6 --out " + tmp.file("z.json")).code == 0);
    const auto z = run("reconstruct " + tmp.file("z.json") + " --n 6 --out " + tmp.file("zq.json") + " --log " +
                       tmp.file("zlog.txt"));
    REQUIRE(z.code == 0);
    const auto zr = read_json_file(tmp.file("zq.json"));
    CHECK(zr["converged"] == true);
    double worst = 0.0;
    for (const auto& v : zr["potential"]["values"]) worst = std::max(worst, std::abs(v.get<double>()));
    CHECK(worst < 1e-6);

    const auto committed = potential_from_json(read_json_file(data("hermite_small.json")));
    const auto r = run("reconstruct " + data("hermite_small_spectrum.json") + " --out " + tmp.file("q.json") +
                       " --log " + tmp.file("log.txt"));
    REQUIRE(r.code == 0);
    const auto got = potential_from_json(read_json_file(tmp.file("q.json"))["potential"]);
    const auto truth = Potential::from_hermite(*committed.hermite(), got.grid());
    CHECK(l2_distance(got, truth) < 1e-3);
    std::ifstream log(tmp.file("log.txt"));
    std::string line;
    int lines = 0;
    while (std::getline(log, line)) {
        const auto rec = parse_json(line);
        CHECK(rec.contains("iter"));
        CHECK(rec.contains("residual"));
        CHECK(rec.contains("step_norm"));
        ++lines;
    }
    CHECK(lines >= 2);

    auto d = read_json_file(data("hermite_small_spectrum.json"));
    d["sigma"][4] = d["sigma"][3].get<double>() - 0.5;
    write(tmp.file("unordered.json"), d.dump());
    const auto bad = run("reconstruct " + tmp.file("unordered.json"));
    CHECK(bad.code == 2);
    CHECK(bad.out.find("ordering") != std::string::npos);
}

TEST_CASE("configuration sources") {
    TempDir tmp;
    write(tmp.file("cfg.json"), R"({"N": 3, "tolerances": {"trace": 0.2}})");
    const auto env = run("spectrum " + data("zero.json"), "OSCSPEC_CONFIG=" + tmp.file("cfg.json"));
    REQUIRE(env.code == 0);
    const auto je = parse_json(env.out);
    CHECK(je["N"] == 3);
    CHECK(je["config"]["tolerances"]["trace"] == 0.2);
    // flags win over the file
    const auto flag = run("spectrum " + data("zero.json") + " --n 4 --tol trace=0.3 --config " + tmp.file("cfg.json"));
    const auto jf = parse_json(flag.out);
    CHECK(jf["N"] == 4);
    CHECK(jf["config"]["tolerances"]["trace"] == 0.3);
    write(tmp.file("typo.json"), R"({"NN": 3})");
    CHECK(run("spectrum " + data("zero.json") + " --config " + tmp.file("typo.json")).code == 1);
}

}
