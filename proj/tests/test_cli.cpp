#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// Exercises the installed command-line binary end to end. The build passes
// its location in VILLAGENET_CLI_PATH.

namespace {

namespace fs = std::filesystem;

const fs::path& work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "villagenet_test_cli";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

// Runs the CLI with the given argument string; stdout goes to `capture`
// (or /dev/null), stderr is silenced. Returns the process exit code.
int run_cli(const std::string& args, const fs::path& capture = {}) {
    std::string cmd = std::string(VILLAGENET_CLI_PATH) + " " + args;
    cmd += capture.empty() ? " >/dev/null" : " >" + capture.string();
    cmd += " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

fs::path make_moons_csv() {
    static const fs::path csv = [] {
        fs::path p = work_dir() / "moons.csv";
        REQUIRE(run_cli("synth --n 1000 --noise 0.05 --seed 7 --out " + p.string()) == 0);
        return p;
    }();
    return csv;
}

}  // namespace

TEST_CASE("help and usage errors use the documented exit codes") {
    CHECK(run_cli("--help") == 0);
    CHECK(run_cli("cluster --help") == 0);
    CHECK(run_cli("--no-such-flag") == 2);
    CHECK(run_cli("cluster") == 2);  // missing required input and --k
    CHECK(run_cli("nonsense-subcommand") == 2);
}

TEST_CASE("invalid parameter values exit with the usage code") {
    const fs::path csv = make_moons_csv();
    const fs::path out = work_dir() / "unused.csv";
    CHECK(run_cli("cluster " + csv.string() + " --header --k 0 --out " + out.string()) == 2);
    CHECK(run_cli("cluster " + csv.string() + " --header --k 10 --r 0 --out " +
                  out.string()) == 2);
    CHECK(run_cli("synth --n 1 --out " + (work_dir() / "tiny.csv").string()) == 2);
    CHECK_FALSE(fs::exists(out));  // failed runs leave no output behind
}

TEST_CASE("missing input files exit with the runtime code") {
    CHECK(run_cli("cluster /no/such/file.csv --k 10") == 1);
}

TEST_CASE("synthetic dataset generation is reproducible") {
    const fs::path a = work_dir() / "synth_a.csv";
    const fs::path b = work_dir() / "synth_b.csv";
    REQUIRE(run_cli("synth --n 120 --noise 0.1 --seed 42 --out " + a.string()) == 0);
    REQUIRE(run_cli("synth --n 120 --noise 0.1 --seed 42 --out " + b.string()) == 0);
    const std::string text = read_file(a);
    CHECK(text == read_file(b));
    CHECK(text.rfind("x,y,label\n", 0) == 0);

    const fs::path c = work_dir() / "synth_c.csv";
    REQUIRE(run_cli("synth --n 120 --noise 0.1 --seed 43 --out " + c.string()) == 0);
    CHECK(text != read_file(c));
}

TEST_CASE("clustering a generated dataset is deterministic end to end") {
    const fs::path csv = make_moons_csv();
    const fs::path labels_a = work_dir() / "labels_a.csv";
    const fs::path labels_b = work_dir() / "labels_b.csv";
    const std::string common = "cluster " + csv.string() + " --header --k 15 --r 20 --seed 0";
    REQUIRE(run_cli(common + " --out " + labels_a.string()) == 0);
    REQUIRE(run_cli(common + " --out " + labels_b.string()) == 0);
    const std::string text = read_file(labels_a);
    CHECK(text == read_file(labels_b));
    CHECK(text.rfind("index,cluster\n", 0) == 0);
    // header plus one row per point
    CHECK(std::count(text.begin(), text.end(), '\n') == 1001);
}

TEST_CASE("ground-truth column changes the report, never the labels") {
    const fs::path csv = make_moons_csv();
    // Same features with the label column physically removed: clustering it
    // must give byte-identical output to clustering with --labels set.
    const fs::path stripped = work_dir() / "moons_nolabel.csv";
    {
        std::istringstream lines(read_file(csv));
        std::ostringstream cut;
        std::string line;
        while (std::getline(lines, line)) {
            cut << line.substr(0, line.rfind(',')) << '\n';
        }
        write_file(stripped, cut.str());
    }
    const fs::path blind = work_dir() / "labels_blind.csv";
    const fs::path informed = work_dir() / "labels_informed.csv";
    const fs::path report = work_dir() / "report.txt";
    const std::string options = " --header --k 15 --r 20 --seed 0";
    REQUIRE(run_cli("cluster " + stripped.string() + options + " --out " + blind.string()) ==
            0);
    REQUIRE(run_cli("cluster " + csv.string() + options + " --labels label --out " +
                    informed.string() + " --report " + report.string()) == 0);
    CHECK(read_file(blind) == read_file(informed));
    const std::string report_text = read_file(report);
    CHECK(report_text.find("m_predicted: 2") != std::string::npos);
    CHECK(report_text.find("nmi: ") != std::string::npos);
    CHECK(report_text.find("(auto)") != std::string::npos);  // walk length was adaptive
}

TEST_CASE("the cluster command can emit the village network") {
    const fs::path csv = make_moons_csv();
    const fs::path graph = work_dir() / "graph.txt";
    REQUIRE(run_cli("cluster " + csv.string() + " --header --k 12 --r 10 --seed 0 --out " +
                    (work_dir() / "labels_g.csv").string() + " --emit-graph " +
                    graph.string()) == 0);
    std::istringstream lines(read_file(graph));
    int u = 0, v = 0;
    long long w = 0;
    int n_edges = 0;
    while (lines >> u >> v >> w) {
        CHECK(0 <= u);
        CHECK(u < v);
        CHECK(v < 12);
        CHECK(w >= 1);
        ++n_edges;
    }
    CHECK(n_edges > 0);
}

TEST_CASE("the communities command partitions an edge list") {
    const fs::path out = work_dir() / "communities.csv";

    SUBCASE("a single edge is one community") {
        const fs::path edges = work_dir() / "edge_single.txt";
        write_file(edges, "0 1 1\n");
        const fs::path stdout_file = work_dir() / "single_stdout.txt";
        REQUIRE(run_cli("communities " + edges.string() + " --out " + out.string(),
                        stdout_file) == 0);
        CHECK(read_file(stdout_file).find("communities: 1") != std::string::npos);
        CHECK(read_file(out) == "node,community\n0,0\n1,0\n");
    }

    SUBCASE("two disconnected triangles are two communities") {
        const fs::path edges = work_dir() / "edge_triangles.txt";
        write_file(edges, "0 1 1\n1 2 1\n0 2 1\n3 4 1\n4 5 1\n3 5 1\n");
        const fs::path stdout_file = work_dir() / "triangles_stdout.txt";
        REQUIRE(run_cli("communities " + edges.string() + " --out " + out.string(),
                        stdout_file) == 0);
        CHECK(read_file(stdout_file).find("communities: 2") != std::string::npos);
    }

    SUBCASE("an empty edge list is a usage error") {
        const fs::path edges = work_dir() / "edge_empty.txt";
        write_file(edges, "");
        CHECK(run_cli("communities " + edges.string() + " --out " + out.string()) == 2);
    }

    SUBCASE("malformed lines are runtime errors") {
        const fs::path edges = work_dir() / "edge_bad.txt";
        write_file(edges, "0 one 1\n");
        CHECK(run_cli("communities " + edges.string() + " --out " + out.string()) == 1);
        write_file(edges, "0 -1 1\n");
        CHECK(run_cli("communities " + edges.string() + " --out " + out.string()) == 1);
    }
}

TEST_CASE("bench prints one row per configuration") {
    const fs::path table = work_dir() / "bench.csv";
    const fs::path stdout_file = work_dir() / "bench_stdout.txt";
    REQUIRE(run_cli("bench --moons 300 --noise 0.05 --k 10,15 --seeds 0,1 --out " +
                    table.string(),
                    stdout_file) == 0);
    const std::string text = read_file(stdout_file);
    // 2 village counts x 2 seeds, plus a median line per configuration
    CHECK(std::count(text.begin(), text.end(), '\n') >= 6);
    CHECK(fs::exists(table));
}
