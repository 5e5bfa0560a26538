// End-to-end checks against the installed binary (path injected by the build).
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(MMIMO_BIN) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string l;
    while (std::getline(ss, l)) out.push_back(l);
    return out;
}

fs::path tmpdir(const std::string& leaf) {
    const fs::path p = fs::temp_directory_path() / ("mmimo_cli_" + leaf);
    fs::remove_all(p);
    return p;
}

// keep CLI runs small: shrink the scenario through a config file
void write_small_config(const fs::path& p, const std::string& preset, int drops) {
    std::ofstream f(p);
    f << "{\"preset\":\"" << preset << "\",\"n_devices\":60,\"n_antennas\":32,"
      << "\"tau_p\":12,\"n_rf\":8,\"horizon_ms\":150.0,\"qlearn_episodes\":60,"
      << "\"drops\":" << drops << "}";
}

}  // namespace

TEST_CASE("run: row count, header, exit 0") {
    const fs::path out = tmpdir("run");
    const fs::path cfg = fs::temp_directory_path() / "mmimo_cli_small.json";
    write_small_config(cfg, "baseline", 10);
    REQUIRE(run("run " + cfg.string() + " --out " + out.string()) == 0);
    const auto rows = lines(slurp(out / "metrics.csv"));
    REQUIRE(rows.size() == 11);
    CHECK(rows[0] == "drop_index,se_cell,ee,mean_latency_ms,pci,success_pct,pilot_overhead");
    CHECK(rows[1].rfind("0,", 0) == 0);
    CHECK(fs::exists(out / "summary.json"));
    CHECK(fs::exists(out / "manifest.json"));
}

TEST_CASE("run twice: byte-identical outputs") {
    const fs::path a = tmpdir("det_a"), b = tmpdir("det_b");
    const fs::path cfg = fs::temp_directory_path() / "mmimo_cli_det.json";
    write_small_config(cfg, "baseline", 12);
    REQUIRE(run("run " + cfg.string() + " --seed 7 --out " + a.string()) == 0);
    REQUIRE(run("run " + cfg.string() + " --seed 7 --out " + b.string()) == 0);
    CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
    CHECK(slurp(a / "metrics.csv").size() > 100);
}

TEST_CASE("worker count does not change the bytes") {
    const fs::path a = tmpdir("w1"), b = tmpdir("w4");
    const fs::path cfg = fs::temp_directory_path() / "mmimo_cli_w.json";
    write_small_config(cfg, "ai_assisted", 8);
    REQUIRE(run("run " + cfg.string() + " --workers 1 --out " + a.string()) == 0);
    REQUIRE(run("run " + cfg.string() + " --workers 4 --out " + b.string()) == 0);
    CHECK(slurp(a / "metrics.csv") == slurp(b / "metrics.csv"));
}

TEST_CASE("config digest is stable and seed-sensitive") {
    const fs::path a = tmpdir("m1"), b = tmpdir("m2"), c = tmpdir("m3");
    const fs::path cfg = fs::temp_directory_path() / "mmimo_cli_m.json";
    write_small_config(cfg, "baseline", 3);
    REQUIRE(run("run " + cfg.string() + " --seed 7 --out " + a.string()) == 0);
    REQUIRE(run("run " + cfg.string() + " --seed 7 --out " + b.string()) == 0);
    REQUIRE(run("run " + cfg.string() + " --seed 8 --out " + c.string()) == 0);
    auto digest = [&](const fs::path& d) {
        const std::string m = slurp(d / "manifest.json");
        const size_t at = m.find("config_digest");
        REQUIRE(at != std::string::npos);
        return m.substr(at, 40);
    };
    CHECK(digest(a) == digest(b));
    CHECK(digest(a) != digest(c));
}

TEST_CASE("malformed config: exit 2 naming the key") {
    const fs::path bad = fs::temp_directory_path() / "mmimo_cli_bad.json";
    std::ofstream(bad) << "{\"preset\":\"baseline\",\"tau_pee\":12}";
    const std::string cmd = std::string(MMIMO_BIN) + " run " + bad.string() +
                            " --out /tmp/mmimo_cli_badout 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[512];
    std::string output;
    while (fgets(buf, sizeof(buf), pipe)) output += buf;
    const int rc = WEXITSTATUS(pclose(pipe));
    CHECK(rc == 2);
    CHECK(output.find("tau_pee") != std::string::npos);
}

TEST_CASE("compare precondition and sweep shape") {
    CHECK(run("compare --presets baseline --out /tmp/mmimo_cli_c1") == 2);

    const fs::path out = tmpdir("sweep");
    REQUIRE(run("sweep --preset baseline --devices 20,40,80 --drops 2 --out " + out.string()) == 0);
    const auto rows = lines(slurp(out / "sweep.csv"));
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] ==
          "device_count,se_cell,ee,mean_latency_ms,pci,success_pct,pilot_overhead");
    CHECK(rows[1].rfind("20,", 0) == 0);
    const std::string summary = slurp(out / "summary.json");
    CHECK(summary.find("breaking_point") != std::string::npos);

    const fs::path out2 = tmpdir("sweep2");
    REQUIRE(run("sweep --preset baseline --devices 20,40,80 --drops 2 --out " + out2.string()) ==
            0);
    CHECK(slurp(out / "sweep.csv") == slurp(out2 / "sweep.csv"));
}

TEST_CASE("usage basics") {
    CHECK(run("--version") == 0);
    CHECK(run("--help") == 0);
    CHECK(run("definitely_not_a_command") == 2);
    CHECK(run("") == 2);  // a subcommand is required
}

TEST_CASE("selftest passes on a pristine build") {
    CHECK(run("selftest") == 0);
}
