#include <sys/wait.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bolab/initial_data.hpp"
#include "bolab/invariants.hpp"
#include "bolab/solver.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    fs::path p = fs::temp_directory_path() / ("bolab_cli_test_" + std::to_string(::getpid())) / name;
    fs::remove_all(p);
    fs::create_directories(p.parent_path());
    return p;
}

struct Result {
    int code;
    std::string err;
};

Result run(const std::string& args, const fs::path& out) {
    fs::path err = out.string() + ".stderr";
    std::string cmd = std::string(BOLAB_CLI_PATH) + " " + args + " -o '" + out.string() + "' 2> '" + err.string() +
                      "' > /dev/null";
    int raw = std::system(cmd.c_str());
    std::ifstream in(err);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<json> records(const fs::path& out) {
    std::vector<json> r;
    std::ifstream in(out / "run.ndjson");
    for (std::string line; std::getline(in, line);) r.push_back(json::parse(line));
    return r;
}

json last_of(const std::vector<json>& recs, const std::string& type) {
    for (auto it = recs.rbegin(); it != recs.rend(); ++it)
        if ((*it)["type"] == type) return *it;
    FAIL("no record of type " << type);
    return {};
}

std::vector<double> bofield(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::string header;
    std::getline(in, header);
    REQUIRE(header.rfind("BOFIELD v1 n_modes=", 0) == 0);
    int n = std::stoi(header.substr(std::strlen("BOFIELD v1 n_modes=")));
    std::vector<double> v(2 * static_cast<std::size_t>(n));
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(double)));
    REQUIRE(in.gcount() == static_cast<std::streamsize>(v.size() * sizeof(double)));
    return v;
}

}  // namespace

TEST_CASE("simulate with zero data gives a trajectory of zeros") {
    auto out = scratch("zero");
    auto r = run("simulate --grid 32 --u0 'modes:(1,0,0)' -T 0.1 --save-every 20", out);
    REQUIRE(r.code == 0);
    auto recs = records(out);
    int steps = 0;
    for (const auto& rec : recs) {
        CHECK(rec.contains("config_hash"));
        CHECK(rec.contains("seed"));
        CHECK(rec["versions"]["bolab"] == "1.0.0");
        if (rec["type"] != "step") continue;
        ++steps;
        for (double x : bofield(out / rec["snapshot"].get<std::string>())) CHECK(x == 0.0);
    }
    CHECK(steps == 6);
    CHECK(slurp(out / "invariants.csv").rfind("t,I1,I2,Psi4,Psi6,energy_identity_defect\n", 0) == 0);
}

TEST_CASE("conserved reproduces the invariants module") {
    auto out = scratch("conserved");
    const std::string spec = "modes:(1,0.5,0),(2,0.3,-1.5707963267948966)";
    auto r = run("conserved --grid 64 -T 0.5 --save-every 10 --u0 '" + spec + "'", out);
    REQUIRE(r.code == 0);
    json rec = last_of(records(out), "conserved");

    bolab::GridSpec g = bolab::GridSpec::make(64);
    bolab::IntegrateOptions io;
    io.save_every = 10;
    auto traj = bolab::integrate(bolab::initial_data(spec, g), bolab::ZeroSource{},
                                 bolab::TimeGrid::covering(0.0, 0.5, 1e-3), io);
    auto reps = bolab::invariant_reports(traj);
    const char* names[] = {"I1", "I2", "Psi4", "Psi6"};
    for (int k = 0; k < 4; ++k) {
        CHECK(rec["drift"][names[k]].get<double>() == reps[k].drift);
        CHECK(rec["initial"][names[k]].get<double>() == reps[k].values.front());
    }
    CHECK(rec["drift"]["I2"].get<double>() < 1e-8);
}

TEST_CASE("steer with mean-mismatched endpoints is a validation error") {
    auto out = scratch("steer");
    auto r = run("steer --grid 32 --u0 'modes:(0,0.1,0),(1,0.01,0)'", out);
    CHECK(r.code == 2);
    json d = json::parse(r.err);
    CHECK(d["error"] == "MeanMismatch");
    CHECK(d["exit_code"] == 2);
    CHECK(d["message"].get<std::string>().size() > 0);
}

TEST_CASE("validation and solver failures map to exit codes") {
    auto out = scratch("fail");
    CHECK(run("simulate --dt -1", out).code == 2);
    CHECK(run("bogus", out).code == 2);
    CHECK(run("simulate --grid 32 --u0 'modes:(1,'", out).code == 2);
    CHECK(json::parse(run("simulate --grid 32 --u0 'modes:(1,'", out).err)["error"] == "ParseError");
    CHECK(run("norms --check nothing", out).code == 2);
    CHECK(run("simulate --no-such-flag", out).code == 2);
    auto blow = run("simulate --grid 32 --u0 'modes:(1,1e100,0)'", out);
    CHECK(blow.code == 3);
    CHECK(json::parse(blow.err)["error"] == "BlowUp");
}

TEST_CASE("initial data specifications") {
    auto out = scratch("random");
    REQUIRE(run("conserved --grid 64 -T 0.01 --u0 random:0,1.0,42", out).code == 0);
    json rec = last_of(records(out), "conserved");
    CHECK(std::abs(rec["initial"]["I2"].get<double>() - 1.0) < 2e-12);
    CHECK(std::abs(rec["initial"]["I1"].get<double>()) < 1e-14);

    auto a = scratch("file_a");
    REQUIRE(run("simulate --grid 64 -T 0.01 --u0 random:0.5,0.7,3", a).code == 0);
    auto b = scratch("file_b");
    REQUIRE(run("simulate --grid 64 -T 0.01 --u0 file:" + (a / "fields/u_000000.bofield").string(), b).code == 0);
    CHECK(slurp(a / "fields/u_000000.bofield") == slurp(b / "fields/u_000000.bofield"));
    CHECK(slurp(a / "invariants.csv") == slurp(b / "invariants.csv"));
}

TEST_CASE("config file with flag overrides") {
    auto dir = scratch("config");
    fs::create_directories(dir);
    std::ofstream(dir / "run.json") << R"J({"verb": "conserved", "grid": 64, "horizon": 0.05, "u0": "modes:(1,0.2,0)"})J";
    auto out = dir / "out";
    REQUIRE(run("--config '" + (dir / "run.json").string() + "' --grid 32", out).code == 0);
    auto recs = records(out);
    CHECK(recs.front()["config"]["grid"] == 32);
    CHECK(recs.front()["config"]["horizon"] == 0.05);
    CHECK(recs.front()["config"]["verb"] == "conserved");

    std::ofstream(dir / "bad.json") << R"({"verb": "conserved", "gird": 64})";
    auto r = run("--config '" + (dir / "bad.json").string() + "'", dir / "bad");
    CHECK(r.code == 2);
    CHECK(json::parse(r.err)["error"] == "ParseError");
}

TEST_CASE("identical configurations give bit-identical outputs") {
    auto a = scratch("det_a"), b = scratch("det_b");
    const std::string args = "simulate --grid 64 -T 0.2 --save-every 50 --feedback --u0 random:0,0.5,7";
    REQUIRE(run(args, a).code == 0);
    REQUIRE(run(args, b).code == 0);
    CHECK(slurp(a / "run.ndjson") == slurp(b / "run.ndjson"));
    CHECK(slurp(a / "invariants.csv") == slurp(b / "invariants.csv"));

    auto c = scratch("det_c"), d = scratch("det_d");
    REQUIRE(run("observability --grid 32 --ensemble 3 --band 4 --jobs 1", c).code == 0);
    REQUIRE(run("observability --grid 32 --ensemble 3 --band 4 --jobs 3", d).code == 0);
    CHECK(slurp(c / "run.ndjson") == slurp(d / "run.ndjson"));

    auto e = scratch("det_e");
    REQUIRE(run("simulate --grid 64 -T 0.2 --save-every 50 --feedback --u0 random:0,0.5,8", e).code == 0);
    CHECK(records(a).front()["config_hash"] != records(e).front()["config_hash"]);
}

TEST_CASE("remaining verbs emit their records") {
    auto out = scratch("gauge");
    REQUIRE(run("gauge-check --grid 64 -T 0.2 --dt 5e-3 --N 8", out).code == 0);
    json g = last_of(records(out), "gauge");
    CHECK(g["ungauge"].get<double>() < 1e-9);
    CHECK(g["ungauge_high"].get<double>() < 1e-9);
    CHECK(std::abs(g["residual_order"].get<double>() - 2.0) < 0.1);

    out = scratch("stabilize");
    REQUIRE(run("stabilize --grid 32 -T 2 --save-every 100 --u0 'modes:(1,0.3,0)'", out).code == 0);
    json s = last_of(records(out), "stabilization");
    CHECK(s["final_l2"].get<double>() < s["initial_l2"].get<double>());

    out = scratch("gramian");
    REQUIRE(run("gramian-spectrum --grid 32 --n-quad 64 -k 4", out).code == 0);
    json v = last_of(records(out), "gramian_spectrum");
    REQUIRE(v["values"].size() >= 1);
    CHECK(v["values"][0].get<double>() > 0.0);

    out = scratch("norms");
    REQUIRE(run("norms --check highfreq --ensemble 4 --seed 9", out).code == 0);
    json n = last_of(records(out), "norm_report");
    CHECK(n["report_seed"] == 9);
    CHECK(n["fitted_exponent"].get<double>() <= -0.4);
    CHECK(n["sweep"].size() == 5);
}
