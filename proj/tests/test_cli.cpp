/*
 * evtree: event-tree mining in interaction networks
 * Licensed under the terms of the Apache 2.0 License.
 * See LICENSE file in the project root for terms.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "evtree_cli_test";
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  const fs::path cap = work_dir() / "capture.txt";
  const std::string cmd =
      std::string(EVTREE_CLI_PATH) + " " + args + " > " + cap.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(cap);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kToy = std::string(EVTREE_DATA_DIR) + "/toy_email.jsonl";

}  // namespace

TEST_CASE("build reports the toy counts") {
  const fs::path graph = work_dir() / "toy_graph.json";
  const RunResult r = run("build -i " + kToy + " -o " + graph.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("7 vertices, 13 edges") != std::string::npos);
  CHECK(fs::exists(graph));
}

TEST_CASE("build on an empty log") {
  const fs::path empty = work_dir() / "empty.jsonl";
  std::ofstream(empty.string()).close();
  const fs::path graph = work_dir() / "empty_graph.json";
  const RunResult r = run("build -i " + empty.string() + " -o " + graph.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("0 vertices, 0 edges") != std::string::npos);
}

TEST_CASE("build rejects malformed lines with the line number") {
  const fs::path bad = work_dir() / "bad.jsonl";
  {
    std::ofstream out(bad.string());
    out << R"({"id": 0, "sender": "a", "recipients": ["b"], "timestamp": 1})" << '\n';
    out << "this is not json\n";
  }
  const RunResult r = run("build -i " + bad.string() + " -o /dev/null");
  CHECK(r.exit_code == 3);
  CHECK(r.out.find("line 2") != std::string::npos);
}

TEST_CASE("missing input file exits with the I/O code") {
  const RunResult r = run("build -i /nonexistent/log.jsonl -o /dev/null");
  CHECK(r.exit_code == 2);
}

TEST_CASE("detect extracts the two toy events deterministically") {
  const fs::path graph = work_dir() / "toy_graph.json";
  run("build -i " + kToy + " -o " + graph.string());

  const fs::path ev1 = work_dir() / "events1.json";
  const fs::path ev2 = work_dir() / "events2.json";
  const std::string flags = " --budget 0 --window 1w --top-k 2 --seed 4 ";
  const RunResult r1 = run("detect -g " + graph.string() + " -o " + ev1.string() + flags);
  CHECK(r1.exit_code == 0);
  CHECK(r1.out.find("covered 6/7") != std::string::npos);
  const RunResult r2 = run("detect -g " + graph.string() + " -o " + ev2.string() + flags);
  CHECK(r2.exit_code == 0);

  const std::string a = slurp(ev1), b = slurp(ev2);
  CHECK(a == b);  // byte-identical on the same config + seed
  CHECK(a.find("\"covered\": [\n    1,\n    2,\n    3,\n    4,\n    5,\n    6\n  ]") !=
        std::string::npos);

  SUBCASE("k beyond the pool reports a shortfall") {
    const RunResult r = run("detect -g " + graph.string() + " -o /dev/null " +
                            " --budget 0 --window 1w --top-k 10");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("[shortfall]") != std::string::npos);
  }
  SUBCASE("usage errors exit with code 1") {
    CHECK(run("detect -g " + graph.string() + " -o /dev/null --budget -3 --window 1d")
              .exit_code == 1);
    CHECK(run("detect -g " + graph.string() + " -o /dev/null --top-k 0 --window 1d")
              .exit_code == 1);
    CHECK(run("detect -g " + graph.string() +
              " -o /dev/null --algorithm quantum --window 1d")
              .exit_code == 1);
  }
}

TEST_CASE("detect reads a flat key=value config file with flag overrides") {
  const fs::path graph = work_dir() / "toy_graph.json";
  run("build -i " + kToy + " -o " + graph.string());

  const fs::path cfg = work_dir() / "detect.cfg";
  {
    std::ofstream out(cfg.string());
    out << "budget = 0\n"
        << "window = 1w\n"
        << "top-k = 1\n"
        << "seed = 4\n";
  }
  const fs::path ev = work_dir() / "events_cfg.json";
  const RunResult r = run("detect -g " + graph.string() + " -o " + ev.string() +
                          " --config " + cfg.string() + " --top-k 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("covered 6/7") != std::string::npos);  // the flag wins: k=2
}

TEST_CASE("detect prints top tf-idf terms when the log is supplied") {
  const fs::path log = work_dir() / "texty.jsonl";
  {
    std::ofstream out(log.string());
    out << R"({"id": 0, "sender": "a", "recipients": ["b"], "timestamp": 100, "text": "zoning permit approved", "topic": [1.0, 0.0]})"
        << '\n'
        << R"({"id": 1, "sender": "b", "recipients": ["a"], "timestamp": 200, "text": "zoning hearing rescheduled", "topic": [1.0, 0.0]})"
        << '\n';
  }
  const fs::path graph = work_dir() / "texty_graph.json";
  REQUIRE(run("build -i " + log.string() + " -o " + graph.string()).exit_code == 0);
  const RunResult r = run("detect -g " + graph.string() + " -o /dev/null --log " +
                          log.string() + " --budget 1 --window 1d --top-k 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("top terms:") != std::string::npos);
}

TEST_CASE("sweep runs a small grid") {
  const fs::path spec = work_dir() / "sweep.cfg";
  {
    std::ofstream out(spec.string());
    out << "axis = noise\n"
        << "grid = 0, 1, 2\n"
        << "algorithms = greedy, random\n"
        << "repetitions = 2\n"
        << "event_size = 10\n"
        << "seed = 3\n";
  }
  const fs::path csv = work_dir() / "sweep.csv";
  const RunResult r = run("sweep -s " + spec.string() + " -o " + csv.string());
  CHECK(r.exit_code == 0);
  const std::string body = slurp(csv);
  CHECK(std::count(body.begin(), body.end(), '\n') == 7);  // header + 3x2 rows
  CHECK(body.rfind("axis_value,algorithm,precision,recall,f1,objective,runtime_s,"
                   "repetitions",
                   0) == 0);

  SUBCASE("unknown algorithm names are usage errors") {
    const fs::path bad = work_dir() / "bad_sweep.cfg";
    std::ofstream(bad.string()) << "grid = 0\nalgorithms = magic\n";
    const RunResult rb = run("sweep -s " + bad.string() + " -o /dev/null");
    CHECK(rb.exit_code == 1);
    CHECK(rb.out.find("greedy") != std::string::npos);  // lists the valid names
  }
  SUBCASE("an empty grid is a usage error") {
    const fs::path bad = work_dir() / "empty_sweep.cfg";
    std::ofstream(bad.string()) << "algorithms = greedy\n";
    CHECK(run("sweep -s " + bad.string() + " -o /dev/null").exit_code == 1);
  }
}

TEST_CASE("gen writes a dataset plus ground truth that build can ingest") {
  const fs::path data = work_dir() / "synth.jsonl";
  const fs::path truth = work_dir() / "synth_truth.json";
  const RunResult r = run("gen -o " + data.string() + " --truth " + truth.string() +
                          " --size 12 --noise 1 --seed 5");
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(truth));

  const fs::path graph = work_dir() / "synth_graph.json";
  const RunResult b =
      run("build -i " + data.string() + " -o " + graph.string() + " --no-merge");
  CHECK(b.exit_code == 0);
}

TEST_CASE("dot export renders the toy graph") {
  const fs::path graph = work_dir() / "toy_graph.json";
  run("build -i " + kToy + " -o " + graph.string());
  const fs::path dot = work_dir() / "toy.dot";
  const RunResult r = run("dot -g " + graph.string() + " -o " + dot.string());
  CHECK(r.exit_code == 0);
  const std::string body = slurp(dot);
  CHECK(body.find("digraph meta {") != std::string::npos);
  CHECK(body.find("style=dashed") != std::string::npos);
}
