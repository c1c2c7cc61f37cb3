#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

// MANIPLAB_CLI_PATH is injected by the build so these tests always exercise
// the binary that was just linked.

namespace {

namespace fs = std::filesystem;

struct CliResult {
    int code = -1;
    std::string out;
};

CliResult run_shell(const std::string& cmd) {
    CliResult result;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[4096];
    std::size_t got = 0;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.out.append(buf, got);
    const int status = pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

CliResult run_cli(const std::string& args) {
    return run_shell(std::string(MANIPLAB_CLI_PATH) + " " + args + " 2>&1");
}

struct TempDir {
    fs::path path;
    TempDir() {
        std::string tmpl = (fs::temp_directory_path() / "maniplab_cli_XXXXXX").string();
        REQUIRE(mkdtemp(tmpl.data()) != nullptr);
        path = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name, const std::string& body) const {
        const fs::path target = path / name;
        std::ofstream(target) << body;
        return target.string();
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

const std::string kSmallProfile = "m=3 n=3\n2: 0>1>2\n1: 1>2>0\n";

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(run_cli("--help").code == 0);
    CHECK(contains(run_cli("--help").out, "tournaments"));
    CHECK(run_cli("elect --help").code == 0);

    const auto bare = run_cli("");
    CHECK(bare.code == 2);
    CHECK(contains(bare.out, "subcommand is required"));

    CHECK(run_cli("elect --bogus-flag x --in foo").code == 2);
    CHECK(run_cli("frobnicate").code == 2);
}

TEST_CASE("generate is deterministic and honours --out") {
    TempDir tmp;
    const auto first = run_cli("generate --m 3 --n 5 --dist ic --seed 7");
    CHECK(first.code == 0);
    CHECK(contains(first.out, "m=3 n=5\n"));
    CHECK(first.out == run_cli("generate --m 3 --n 5 --dist ic --seed 7").out);
    CHECK(first.out != run_cli("generate --m 3 --n 5 --dist ic --seed 8").out);

    const auto out_path = (tmp.path / "gen.txt").string();
    CHECK(run_cli("generate --m 3 --n 5 --dist ic --seed 7 --out " + out_path).code == 0);
    CHECK(slurp(out_path) == first.out);

    CHECK(run_cli("generate --m 0 --n 5 --seed 1").code == 2);
    CHECK(run_cli("generate --m 3 --n 5 --dist marbles --seed 1").code == 2);
}

TEST_CASE("elect reads files and stdin") {
    TempDir tmp;
    const auto profile = tmp.file("p.txt", kSmallProfile);

    const auto stv = run_cli("elect --rule stv --in " + profile);
    CHECK(stv.code == 0);
    CHECK(stv.out == "round 1: 0=2 1=1 2=0  decided\nwinner: 0\n");

    const auto veto = run_cli("elect --rule veto --in " + profile);
    CHECK(veto.code == 0);
    CHECK(veto.out == "vetoes: 0=1 1=0 2=2\nwinner: 1\n");

    // The full pipeline: sample a profile, elect over stdin.
    const auto piped = run_shell(std::string(MANIPLAB_CLI_PATH) +
                                 " generate --m 3 --n 5 --dist ic --seed 7 | " +
                                 MANIPLAB_CLI_PATH + " elect --rule stv --in - 2>&1");
    CHECK(piped.code == 0);
    CHECK(contains(piped.out, "winner: "));

    CHECK(run_cli("elect --rule stv --in " + tmp.path.string() + "/absent.txt").code == 2);
    const auto bad = run_cli("elect --rule stv --in " + tmp.file("bad.txt", "garbage\n"));
    CHECK(bad.code == 2);
    CHECK(contains(bad.out, "error: line 1"));
    CHECK(run_cli("elect --rule approval --in " + profile).code == 2);
}

TEST_CASE("manipulate reports verdicts, witnesses and budgets") {
    TempDir tmp;
    const auto profile = tmp.file("p.txt", kSmallProfile);

    // Two units of veto weight cannot cover the 5 outstanding deficits.
    const auto lost = run_cli("manipulate --rule veto --in " + profile + " --target 2 --weights 2,1");
    CHECK(lost.code == 0);
    CHECK(lost.out == "verdict: impossible\nnodes: 1\ndecided: yes\n");

    const auto won = run_cli("manipulate --rule stv --in " + profile +
                             " --target 0 --coalition 1 --goal destructive");
    CHECK(won.code == 0);
    CHECK(won.out == "verdict: found\nmember 0 (weight 1): 1>0>2\nnodes: 3\ndecided: yes\n");

    const auto starved = run_cli("manipulate --rule stv --in " + profile +
                                 " --target 2 --coalition 1 --budget 0");
    CHECK(starved.code == 0);
    CHECK(starved.out == "verdict: budget-exhausted\nnodes: 0\ndecided: no\n");

    CHECK(run_cli("manipulate --rule stv --in " + profile + " --target 9 --coalition 1").code == 2);
    CHECK(run_cli("manipulate --rule veto --in " + profile + " --target 1 --weights 2,0").code == 2);
}

TEST_CASE("sweep writes CSV and plot data deterministically") {
    TempDir tmp;
    const auto csv_path = (tmp.path / "sweep.csv").string();
    const auto dat_path = (tmp.path / "sweep.dat").string();
    const std::string args = "sweep --rule stv --dist ic --vary m:3:4 --n 5 --coalition 1 "
                             "--trials 20 --seed 3 --out " + csv_path + " --plot-data " + dat_path;
    CHECK(run_cli(args).code == 0);

    const auto csv = slurp(csv_path);
    CHECK(contains(csv, "m,n,p_manipulable,mean_nodes,median_nodes,p90_nodes,undecided,bound_ratio\n"));
    CHECK(contains(csv, "\n3,5,"));
    CHECK(contains(csv, "\n4,5,"));
    CHECK(contains(csv, "# max_adjacent_slope="));

    const auto dat = slurp(dat_path);
    CHECK(contains(dat, "# m n p_manipulable mean_nodes median_nodes p90_nodes undecided bound\n"));
    CHECK(contains(dat, "\n3 5 "));

    // Byte-identical regardless of worker threads.
    const auto rerun = (tmp.path / "again.csv").string();
    const std::string rerun_args = "sweep --rule stv --dist ic --vary m:3:4 --n 5 --coalition 1 "
                                   "--trials 20 --seed 3 --out " + rerun;
    CHECK(run_shell("MANIPLAB_THREADS=1 " + std::string(MANIPLAB_CLI_PATH) + " " + rerun_args).code == 0);
    const auto serial = slurp(rerun);
    CHECK(run_shell("MANIPLAB_THREADS=5 " + std::string(MANIPLAB_CLI_PATH) + " " + rerun_args).code == 0);
    CHECK(slurp(rerun) == serial);
    CHECK(serial == csv);

    CHECK(run_cli("sweep --rule stv --vary m:4:3 --n 5 --trials 20").code == 2);
    CHECK(run_cli("sweep --rule stv --vary m:3:4 --trials 20").code == 2);  // --n missing
    CHECK(run_cli("sweep --rule stv --dist file --in " + tmp.path.string() +
                  "/absent.txt --vary n:3:4 --m 3 --trials 5")
              .code == 2);
}

TEST_CASE("estimate prints a confidence interval") {
    const auto est = run_cli("estimate --rule stv --dist ic --m 3 --n 4 --coalition 1 "
                             "--trials 200 --seed 5");
    CHECK(est.code == 0);
    CHECK(est.out == "p_hat=0.555000 interval95=[0.485732,0.622195] successes=111 trials=200\n");
    CHECK(run_cli("estimate --rule stv --m 0 --n 4 --trials 10").code == 2);
}

TEST_CASE("tourney answers cup and round robin queries") {
    TempDir tmp;
    const auto teams = tmp.file("teams.txt",
                                "4\n0 1 0\n0 2 0\n0 3 3\n1 2 1\n1 3 1\n2 3 2\n");

    const auto cup = run_cli("tourney --kind cup --teams " + teams +
                             " --target 3 --coalition 1,2 --min-throws");
    CHECK(cup.code == 0);
    CHECK(cup.out == "target 3 can win: yes\nminimum thrown games: 1\n");

    const auto honest = run_cli("tourney --kind cup --teams " + teams + " --target 3");
    CHECK(honest.out == "target 3 can win: no\n");

    const auto rr = run_cli("tourney --kind rr --teams " + teams +
                            " --target 2 --coalition 0,1 --min-throws");
    CHECK(rr.code == 0);
    CHECK(contains(rr.out, "target 2 can win: yes\n"));
    CHECK(contains(rr.out, "game 0 vs 2: winner 2\n"));
    CHECK(contains(rr.out, "minimum thrown games: 2\n"));

    const auto probs = tmp.file("duel.txt", "2\n0 1 0\n0 1 0.1\n");
    const auto prob = run_cli("tourney --kind cup --teams " + probs +
                              " --target 1 --prob --policy honest");
    CHECK(prob.code == 0);
    CHECK(prob.out == "target 1 can win: no\nwin probability: 0.900000\n");

    CHECK(run_cli("tourney --kind cup --teams " + teams + " --target 9").code == 2);
    CHECK(run_cli("tourney --kind cup --teams " + teams +
                  " --target 3 --seeding 0,1,2,2").code == 2);
    const auto empty = run_cli("tourney --kind rr --teams " + tmp.file("none.txt", "") +
                               " --target 0");
    CHECK(empty.code == 2);
    CHECK(contains(empty.out, "team file is empty"));
    // Probability lines alone do not define the winner relation.
    CHECK(run_cli("tourney --kind cup --teams " + tmp.file("p.txt", "2\n0 1 0.4\n") +
                  " --target 0").code == 2);
}

TEST_CASE("match runs procedures and probes misreports") {
    TempDir tmp;
    const auto inst = tmp.file("roth.txt",
                               "3\n0 1 2\n1 0 2\n0 1 2\n1 0 2\n0 1 2\n0 1 2\n");

    const auto men = run_cli("match --instance " + inst + " --gs men");
    CHECK(men.code == 0);
    CHECK(men.out == "men-proposing stable matching: m0-w0 m1-w1 m2-w2\n");

    const auto probe = run_cli("match --instance " + inst + " --gs men --probe-agent w0");
    CHECK(probe.code == 0);
    CHECK(contains(probe.out, "probe w0: misreport 1>2>0 improves partner to m1 (was m0)\n"));

    const auto honest_probe = run_cli("match --instance " + inst + " --gs men --probe-agent m0");
    CHECK(contains(honest_probe.out, "probe m0: no beneficial misreport\n"));

    const auto popular = run_cli("match --instance " + inst + " --popular --rule veto");
    CHECK(popular.code == 0);
    CHECK(popular.out == "popular stable matching (veto): m0-w1 m1-w0 m2-w2\n");

    CHECK(run_cli("match --instance " + inst).code == 2);  // nothing requested
    CHECK(run_cli("match --instance " + inst + " --gs sideways").code == 2);
    CHECK(run_cli("match --instance " + inst + " --gs men --probe-agent q3").code == 2);
    CHECK(run_cli("match --instance " + tmp.file("junk.txt", "2\n0 1\n") + " --gs men").code == 2);
}
