#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "tritrack/io.hpp"

namespace fs = std::filesystem;
using tritrack::write_atomic;

namespace {

struct CliResult {
    int status = -1;
    std::string out;
    std::string err;
};

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() /
                     ("tritrack_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CliResult run_cli(const std::string& args) {
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = std::string(TRITRACK_CLI_PATH) + " " + args +
                            " > " + out.string() + " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

} // namespace

TEST_CASE("help exits zero, bad flags exit two") {
    CHECK(run_cli("--help").status == 0);
    CHECK(run_cli("solve --help").status == 0);
    CHECK(run_cli("frobnicate").status == 2);
    CHECK(run_cli("riemann --nu 10 --ul 0.1").status == 2); // missing flags
    CHECK(run_cli("").status == 2);                         // subcommand required
}

TEST_CASE("solve writes the two-front fan for the standard riemann data") {
    const fs::path dir = work_dir() / "riemann_run";
    const fs::path cfg = work_dir() / "riemann.cfg";
    write_atomic(cfg, "model = burgers_linear\n"
                      "nu = 10\n"
                      "u0 = 0.3 | 0:-0.3\n"
                      "v0 = 1\n"
                      "t = 0.5\n"
                      "outdir = " + dir.string() + "\n");
    const CliResult r = run_cli("solve --config " + cfg.string());
    CHECK(r.status == 0);
    REQUIRE(fs::exists(dir / "fronts.csv"));
    const std::string fronts = slurp(dir / "fronts.csv");
    CHECK(fronts.rfind("# tritrack-v1 fronts\n", 0) == 0);
    CHECK(count_lines(fronts) == 4); // magic + header + C2 + S1
    CHECK(fronts.find("C2") != std::string::npos);
    CHECK(fronts.find("S1") != std::string::npos);
    REQUIRE(fs::exists(dir / "stats.csv"));

    // Determinism: a second run produces byte-identical output.
    const fs::path dir2 = work_dir() / "riemann_run2";
    const CliResult r2 = run_cli("solve --config " + cfg.string() + " --out " +
                                 dir2.string());
    CHECK(r2.status == 0);
    CHECK(slurp(dir2 / "fronts.csv") == fronts);
    CHECK(slurp(dir2 / "stats.csv") == slurp(dir / "stats.csv"));
}

TEST_CASE("solve on constant data leaves an empty front log") {
    const fs::path dir = work_dir() / "constant_run";
    const fs::path cfg = work_dir() / "constant.cfg";
    write_atomic(cfg, "nu = 10\nu0 = 0.1\nv0 = 2\nt = 1\noutdir = " +
                          dir.string() + "\n");
    const CliResult r = run_cli("solve --config " + cfg.string());
    CHECK(r.status == 0);
    const std::string fronts = slurp(dir / "fronts.csv");
    CHECK(count_lines(fronts) == 2); // headers only
}

TEST_CASE("solve snapshots are re-ingestible as initial data") {
    const fs::path dir = work_dir() / "snap_run";
    const fs::path cfg = work_dir() / "snap.cfg";
    write_atomic(cfg, "nu = 10\n"
                      "u0 = 0 | 0:0.2 | 1:-0.2 | 2:0\n"
                      "v0 = 1\n"
                      "t = 0.5\n"
                      "snapshots = 0.25\n"
                      "traces = 3\n"
                      "outdir = " + dir.string() + "\n");
    CHECK(run_cli("solve --config " + cfg.string()).status == 0);
    REQUIRE(fs::exists(dir / "snapshot_0.25.csv"));
    REQUIRE(fs::exists(dir / "trace_3.csv"));

    const fs::path cfg2 = work_dir() / "snap_again.cfg";
    write_atomic(cfg2, "nu = 10\ndata = csv:" +
                           (dir / "snapshot_0.25.csv").string() +
                           "\nt = 0.25\noutdir = " + dir.string() +
                           "/again\n");
    CHECK(run_cli("solve --config " + cfg2.string()).status == 0);
}

TEST_CASE("configuration and hyperbolicity failures use distinct statuses") {
    CHECK(run_cli("solve --config /nonexistent.cfg").status == 2);

    const fs::path bad = work_dir() / "bad.cfg";
    write_atomic(bad, "nu = 10\nu0 = 0\nt = 0.1\nwhat = 7\n");
    const CliResult rb = run_cli("solve --config " + bad.string());
    CHECK(rb.status == 2);
    CHECK(rb.err.find("bad.cfg:4") != std::string::npos);

    const fs::path ush = work_dir() / "ush.cfg";
    write_atomic(ush, "model = burgers_linear\nm = 1\nnu = 10\nu0 = 0\n"
                      "v0 = 1\nt = 0.1\n");
    const CliResult ru = run_cli("solve --config " + ush.string());
    CHECK(ru.status == 3);
    CHECK(ru.err.find("-1") != std::string::npos); // reported margin

    const fs::path cap = work_dir() / "cap.cfg";
    write_atomic(cap, "nu = 10\nu0 = 0 | 0:0.2 | 1:-0.2 | 2:0\nv0 = 1\n"
                      "t = 5\nmax_interactions = 1\noutdir = " +
                          (work_dir() / "cap_run").string() + "\n");
    CHECK(run_cli("solve --config " + cap.string()).status == 4);
}

TEST_CASE("riemann subcommand prints the fan") {
    const CliResult r = run_cli(
        "riemann --nu 10 --ul 0.3 --vl 1 --ur -0.3 --vr 1 --csv " +
        (work_dir() / "fan.csv").string());
    CHECK(r.status == 0);
    CHECK(r.out.find("2 wave(s)") != std::string::npos);
    CHECK(r.out.find("S1") != std::string::npos);
    CHECK(r.out.find("C2") != std::string::npos);
    const std::string fan = slurp(work_dir() / "fan.csv");
    CHECK(count_lines(fan) == 4);

    CHECK(run_cli("riemann --model nosuch --nu 10 --ul 0 --vl 1 --ur 0 "
                  "--vr 1")
              .status == 2);
}

TEST_CASE("blowup subcommand reports the crosscheck") {
    const fs::path dir = work_dir() / "blowup_run";
    const CliResult r = run_cli("blowup --blocks 1 --nu 60 --out " +
                                dir.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("rel err=") != std::string::npos);
    REQUIRE(fs::exists(dir / "blowup_summary.json"));
    const std::string j = slurp(dir / "blowup_summary.json");
    CHECK(j.find("\"blocks\": 1") != std::string::npos);
    CHECK(j.find("\"rel_trace_oracle\"") != std::string::npos);
    CHECK(fs::exists(dir / "trace_1.csv"));

    // The written data feeds straight back into tvs: TV^1 of the N=1 data is
    // 4*b_1 = 4/3 up to the one-ULP cbrt(27) rounding in b_1.
    REQUIRE(fs::exists(dir / "data.csv"));
    const CliResult rt =
        run_cli("tvs --input " + (dir / "data.csv").string() + " --s 1");
    CHECK(rt.status == 0);
    CHECK(rt.out.find("tv=1.333333333333333 ") != std::string::npos);

    CHECK(run_cli("blowup --blocks 0 --nu 60").status == 1);
}

TEST_CASE("verify transport suite produces a report") {
    const fs::path dir = work_dir() / "verify_run";
    const CliResult r =
        run_cli("verify --suite transport --out " + dir.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("[PASS]") != std::string::npos);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
    REQUIRE(fs::exists(dir / "verify_report.json"));
    const std::string j = slurp(dir / "verify_report.json");
    CHECK(j.find("\"pass\": true") != std::string::npos);
    CHECK(fs::exists(dir / "transport_residuals.csv"));

    CHECK(run_cli("verify --suite nosuch").status == 2);
}

TEST_CASE("verify cubic suite passes against its frozen targets") {
    const fs::path dir = work_dir() / "verify_cubic";
    const CliResult r = run_cli("verify --suite cubic --out " + dir.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("[FAIL]") == std::string::npos);
    CHECK(r.out.find("composite_variation_burgers_tv") != std::string::npos);
    CHECK(fs::exists(dir / "cubic_flatness_samples.csv"));
}

TEST_CASE("tvs subcommand on pinned examples") {
    const fs::path hat = work_dir() / "hat.csv";
    write_atomic(hat, "# tritrack-v1 data\nx,u\n-inf,0\n0,1\n1,0\n");
    const CliResult r = run_cli("tvs --input " + hat.string() + " --s 0.5");
    CHECK(r.status == 0);
    CHECK(r.out.find("tv=2") != std::string::npos);
    CHECK(r.out.find("seminorm=1.4142135623730951") != std::string::npos);

    const fs::path stair = work_dir() / "stair.csv";
    write_atomic(stair, "# tritrack-v1 data\nx,u\n-inf,0\n0,0.25\n"
                        "1,0.5\n2,0.75\n3,1\n");
    const CliResult rs = run_cli("tvs --input " + stair.string() + " --s 0.5");
    CHECK(rs.status == 0);
    CHECK(rs.out.find("tv=1 seminorm=1") != std::string::npos);

    const fs::path jump = work_dir() / "jump.csv";
    write_atomic(jump, "# tritrack-v1 data\nx,u\n-inf,0\n0,1\n");
    const CliResult rj =
        run_cli("tvs --input " + jump.string() + " --s 1 --s 0.5");
    CHECK(rj.status == 0);
    CHECK(rj.out.find("s=1 tv=1 seminorm=1") != std::string::npos);
    CHECK(rj.out.find("s=0.5 tv=1 seminorm=1") != std::string::npos);

    const fs::path bad = work_dir() / "tvs_bad.csv";
    write_atomic(bad, "x,u\n0,1\n");
    CHECK(run_cli("tvs --input " + bad.string()).status == 2);
    CHECK(run_cli("tvs --input " + hat.string() + " --s 2").status == 2);
}
