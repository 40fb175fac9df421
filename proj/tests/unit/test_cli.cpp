#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <sstream>

#include "bodymass_cli/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int rc;
    std::string out, err;
};

Result cli(std::vector<std::string> args) {
    args.insert(args.begin(), "bodymass");
    std::ostringstream out, err;
    const int rc = bodymass::cli::run_cli(args, out, err);
    return {rc, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("bodymass_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

int count_lines(const std::string& s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_CASE("run writes csv and json") {
    const fs::path dir = scratch("run");
    const auto r = cli({"run", "--preset", "bm-tdc", "--seed", "42", "--days", "30", "--out",
                        dir.string(), "--plot", "delta"});
    CHECK(r.rc == 0);
    CHECK(fs::exists(dir / "bm-tdc.csv"));
    CHECK(fs::exists(dir / "bm-tdc.json"));
    CHECK(fs::exists(dir / "bm-tdc.delta.dat"));
    CHECK(count_lines(slurp(dir / "bm-tdc.csv")) == 31);
    CHECK(slurp(dir / "bm-tdc.json").find("\"seed\": 42") != std::string::npos);
    const std::string first = slurp(dir / "bm-tdc.csv");

    const auto again = cli({"run", "--preset", "bm-tdc", "--seed", "42", "--days", "30", "--out",
                            dir.string()});
    CHECK(again.rc == 0);
    CHECK(slurp(dir / "bm-tdc.csv") == first);
    fs::remove_all(dir);
}

TEST_CASE("batch of presets") {
    const fs::path dir = scratch("batch");
    const auto r = cli({"run", "--preset", "alloc-fl", "--preset", "alloc-smc", "--days", "20",
                        "--out", dir.string()});
    CHECK(r.rc == 0);
    CHECK(fs::exists(dir / "alloc-fl.csv"));
    CHECK(fs::exists(dir / "alloc-smc.csv"));
    CHECK(cli({"run", "--preset", "alloc-fl", "--preset", "alloc-fl", "--out", dir.string()}).rc == 2);
    fs::remove_all(dir);
}

TEST_CASE("config file and override precedence") {
    const fs::path dir = scratch("cfg");
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "s.cfg");
        f << "preset = bm-tdc\nname = mine\ndays = 12\nseed = 5\n";
    }
    auto r = cli({"run", "--config", (dir / "s.cfg").string(), "--days", "8", "--override",
                  "days=6", "--out", dir.string()});
    CHECK(r.rc == 0);
    CHECK(count_lines(slurp(dir / "mine.csv")) == 7);

    r = cli({"config", "--config", (dir / "s.cfg").string(), "--override", "rho1=400"});
    CHECK(r.rc == 0);
    CHECK(r.out.find("alloc.rho1 = 400") != std::string::npos);
    CHECK(r.out.find("days = 12") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("errors give nonzero exit codes") {
    const fs::path dir = scratch("err");
    CHECK(cli({"run", "--preset", "nope", "--out", dir.string()}).rc == 2);
    CHECK(cli({"run", "--preset", "bm-tdc", "--override", "delta_max=3", "--out", dir.string()}).rc == 2);
    CHECK(cli({"run", "--preset", "bm-tdc", "--days", "0"}).rc != 0);
    CHECK(cli({"run"}).rc == 2);
    CHECK(cli({}).rc != 0);

    fs::create_directories(dir);
    { std::ofstream(dir / "file") << "x"; }
    const auto r = cli({"run", "--preset", "bm-tdc", "--days", "3", "--out", (dir / "file" / "sub").string()});
    CHECK(r.rc != 0);
    CHECK(r.err.find("error") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("output directory from the environment") {
    const fs::path dir = scratch("env");
    ::setenv("BODYMASS_OUT", dir.string().c_str(), 1);
    const auto r = cli({"run", "--preset", "fat-tdc", "--days", "3"});
    ::unsetenv("BODYMASS_OUT");
    CHECK(r.rc == 0);
    CHECK(fs::exists(dir / "fat-tdc.csv"));
    fs::remove_all(dir);
}

TEST_CASE("presets listing") {
    const auto r = cli({"presets"});
    CHECK(r.rc == 0);
    CHECK(count_lines(r.out) == 6);
    CHECK(r.out.find("alloc-smc") != std::string::npos);
}
