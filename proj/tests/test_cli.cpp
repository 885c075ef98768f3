#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

// End-to-end checks of the installed command-line binary. The test runner
// provides the binary path via the STOKESLIP_BIN environment variable.

namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code = -1;
  std::string output;  // stdout + stderr
};

const std::string& binary_path() {
  static const std::string bin = [] {
    const char* env = std::getenv("STOKESLIP_BIN");
    REQUIRE_MESSAGE(env != nullptr, "STOKESLIP_BIN must point at the CLI binary");
    return std::string(env);
  }();
  return bin;
}

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "stokeslip_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

fs::path fresh_dir(const std::string& name) {
  auto d = scratch_dir() / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path log = scratch_dir() / ("cli_log_" + std::to_string(counter++) + ".txt");
  const std::string cmd = binary_path() + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(log);
  std::ostringstream buf;
  buf << in.rdbuf();
  r.output = buf.str();
  return r;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE_MESSAGE(in.good(), "missing expected output file: " << p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

int count_occurrences(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
    ++n;
  return n;
}

}  // namespace

TEST_CASE("help succeeds and usage errors exit with code 2") {
  CHECK(run_cli("--help").code == 0);
  CHECK(run_cli("solve --help").code == 0);

  CHECK(run_cli("").code == 2);                      // a subcommand is required
  CHECK(run_cli("shake").code == 2);                 // unknown subcommand
  CHECK(run_cli("solve --frobnicate").code == 2);    // unknown flag
  CHECK(run_cli("mesh --out x").code == 2);          // --rings is required
  CHECK(run_cli("mesh --rings 0 --out x").code == 2);
  CHECK(run_cli("geometry-check --levels 1").code == 2);
  CHECK(run_cli("solve --scheme diagonal").code == 2);
  CHECK(run_cli("solve --method qr").code == 2);
}

TEST_CASE("config and flag validation exits with code 2") {
  const auto dir = fresh_dir("badcfg");
  {
    std::ofstream out(dir / "unknown_key.json");
    out << R"({"ring": 2})";
  }
  {
    std::ofstream out(dir / "bad_value.json");
    out << R"({"mesh": {"rings": 0}})";
  }
  CHECK(run_cli("solve --config " + (dir / "unknown_key.json").string()).code == 2);
  CHECK(run_cli("solve --config " + (dir / "bad_value.json").string()).code == 2);
  CHECK(run_cli("solve --element p1b --eta 0.5").code == 2);
  CHECK(run_cli("solve --node only.node").code == 2);  // needs --ele too
  CHECK(run_cli("solve --eps-rule fixed").code == 2);  // needs --eps VALUE
  CHECK(run_cli("solve --rel-tol 0").code == 2);
  CHECK(run_cli("solve --eps -1e-8").code == 2);
}

TEST_CASE("missing input files exit with code 4") {
  const auto dir = fresh_dir("missing");
  CHECK(run_cli("solve --config " + (dir / "absent.json").string()).code == 4);
  CHECK(run_cli("solve --node " + (dir / "a.node").string() + " --ele " +
                (dir / "a.ele").string())
            .code == 4);
}

TEST_CASE("mesh subcommand exports importable files") {
  const auto dir = fresh_dir("mesh");
  const std::string prefix = (dir / "disk").string();
  const CliResult r = run_cli("mesh --rings 2 --out " + prefix);
  CHECK(r.code == 0);
  CHECK(r.output.find("vertices 19") != std::string::npos);
  CHECK(r.output.find("triangles 24") != std::string::npos);

  const auto node_lines = lines_of(read_file(prefix + ".node"));
  const auto ele_lines = lines_of(read_file(prefix + ".ele"));
  REQUIRE(!node_lines.empty());
  REQUIRE(!ele_lines.empty());
  CHECK(node_lines[0] == "19 2 0 1");
  CHECK(ele_lines[0] == "24 3 0");
  CHECK(node_lines.size() == 20);  // header + one row per vertex
  CHECK(ele_lines.size() == 25);
  CHECK(fs::exists(prefix + ".run.json"));

  // One refinement pass quadruples the triangle count.
  const std::string prefix2 = (dir / "fine").string();
  const CliResult r2 = run_cli("mesh --rings 1 --refine 1 --out " + prefix2);
  CHECK(r2.code == 0);
  CHECK(lines_of(read_file(prefix2 + ".ele"))[0] == "24 3 0");

  // The exported pair feeds back into the solver via --node/--ele.
  const auto out = fresh_dir("mesh_roundtrip");
  const CliResult r3 = run_cli("solve --node " + prefix + ".node --ele " + prefix + ".ele" +
                               " --method lu --out " + out.string());
  CHECK(r3.code == 0);
}

TEST_CASE("solve writes the error report and echoes the resolved config") {
  const auto dir = fresh_dir("solve");
  const CliResult r =
      run_cli("solve --rings 2 --method lu --scheme reduced --out " + dir.string());
  CHECK(r.code == 0);
  CHECK(r.output.find("errors:") != std::string::npos);

  const auto csv = lines_of(read_file(dir / "solve.csv"));
  REQUIRE(csv.size() == 2);
  CHECK(csv[0] == "h,dof,eps,l2u,h1u,l2p,k_h,penetration,speed,iters,converged");
  CHECK(csv[1].substr(csv[1].size() - 2) == ",1");  // converged flag

  const auto run = nlohmann::json::parse(read_file(dir / "run.json"));
  CHECK(run.at("element") == "p1");
  CHECK(run.at("scheme") == "reduced");
  CHECK(run.at("mesh").at("rings") == 2);
  CHECK(run.at("solver").at("method") == "lu");
  CHECK(run.at("case") == "builtin_disk");
}

TEST_CASE("command-line flags override config file values") {
  const auto dir = fresh_dir("override");
  const auto cfg = dir / "base.json";
  {
    std::ofstream out(cfg);
    out << R"({"mesh": {"rings": 3}, "solver": {"method": "gmres"}, "levels": 9})";
  }
  const CliResult r = run_cli("solve --config " + cfg.string() + " --rings 2 --method lu --out " +
                              dir.string());
  CHECK(r.code == 0);
  const auto run = nlohmann::json::parse(read_file(dir / "run.json"));
  CHECK(run.at("mesh").at("rings") == 2);          // flag wins
  CHECK(run.at("solver").at("method") == "lu");    // flag wins
  CHECK(run.at("levels") == 9);                    // config file survives
}

TEST_CASE("an exhausted iteration budget exits with code 3") {
  const auto dir = fresh_dir("starved");
  const CliResult r = run_cli(
      "solve --rings 2 --eps 1e-8 --method gmres --restart 5 --max-iter 5 --precond none --out " +
      dir.string());
  CHECK(r.code == 3);
  const auto csv = lines_of(read_file(dir / "solve.csv"));
  REQUIRE(csv.size() == 2);
  CHECK(csv[1].substr(csv[1].size() - 2) == ",0");  // non-convergence is recorded, not hidden
}

TEST_CASE("repeated runs produce byte-identical artifacts") {
  const auto a = fresh_dir("det_a");
  const auto b = fresh_dir("det_b");
  const std::string args = "convergence --rings 1 --levels 3 --method lu --out ";
  CHECK(run_cli(args + a.string()).code == 0);
  CHECK(run_cli(args + b.string()).code == 0);
  CHECK(read_file(a / "convergence_reduced.csv") == read_file(b / "convergence_reduced.csv"));
  auto run_a = nlohmann::json::parse(read_file(a / "run.json"));
  auto run_b = nlohmann::json::parse(read_file(b / "run.json"));
  run_a.erase("output_dir");  // the only field that legitimately differs
  run_b.erase("output_dir");
  CHECK(run_a == run_b);
  CHECK(read_file(a / "report.md") == read_file(b / "report.md"));
  CHECK(read_file(a / "convergence.svg") == read_file(b / "convergence.svg"));
}

TEST_CASE("three-way comparison writes tables and plots for every scheme") {
  const auto dir = fresh_dir("compare");
  const CliResult r =
      run_cli("convergence --rings 1 --levels 2 --method lu --compare all --out " + dir.string());
  CHECK(r.code == 0);

  const std::string header = "level,h,dof,l2u,rate_l2u,h1u,rate_h1u,l2p,rate_l2p,iters,converged";
  for (const std::string label : {"reduced", "full", "dirichlet"}) {
    const auto csv = lines_of(read_file(dir / ("convergence_" + label + ".csv")));
    REQUIRE(csv.size() == 3);
    CHECK(csv[0] == header);
    CHECK(csv[1].find("nan") != std::string::npos);   // no rate at the first level
    CHECK(csv[2].find("nan") == std::string::npos);
  }

  const std::string md = read_file(dir / "report.md");
  CHECK(md.find("reduced") != std::string::npos);
  CHECK(md.find("dirichlet") != std::string::npos);

  const std::string svg = read_file(dir / "convergence.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(count_occurrences(svg, "<polyline") >= 3);  // one error curve per scheme
  CHECK(r.output.find("|") != std::string::npos);   // markdown table echoed to stdout
}

TEST_CASE("epsilon sweep covers eleven decades and always reports") {
  const auto dir = fresh_dir("sweep");
  const CliResult r = run_cli("epsilon-sweep --rings 3 --out " + dir.string());
  CHECK(r.code == 0);  // non-converged iterative rows are data, not failure

  const auto csv = lines_of(read_file(dir / "sweep.csv"));
  REQUIRE(csv.size() == 12);
  CHECK(csv[0] ==
        "eps,cond2,iters_gmres_r30,iters_gmres_r200,iters_bicgstab,conv_gmres,conv_bicgstab,"
        "lu_residual");
  CHECK(csv[1].rfind("100,", 0) == 0);
  CHECK(csv[11].rfind("1e-08,", 0) == 0);
  for (std::size_t i = 1; i < csv.size(); ++i) {  // direct solve stays accurate at every epsilon
    const auto pos = csv[i].rfind(',');
    CHECK(std::stod(csv[i].substr(pos + 1)) <= 1e-8);
  }
  CHECK(fs::exists(dir / "sweep.svg"));

  const auto run = nlohmann::json::parse(read_file(dir / "run.json"));
  CHECK(run.at("solver").at("precond") == "none");  // sweep default exposes raw Krylov behavior
  CHECK(run.at("mesh").at("rings") == 3);
}

TEST_CASE("geometry check reports defect rates for disk and ellipse") {
  const auto dir = fresh_dir("geom");
  const CliResult r = run_cli("geometry-check --rings 2 --levels 2 --out " + dir.string());
  CHECK(r.code == 0);

  const auto csv = lines_of(read_file(dir / "geometry.csv"));
  REQUIRE(csv.size() == 5);
  CHECK(csv[0] == "domain,level,h,max_d,normal_max,normal_mid,surf_f1,surf_fx2,injective");
  CHECK(csv[1].rfind("disk,0,", 0) == 0);
  CHECK(csv[2].rfind("disk,1,", 0) == 0);
  CHECK(csv[3].rfind("ellipse,0,", 0) == 0);
  CHECK(csv[4].rfind("ellipse,1,", 0) == 0);
  for (int i : {1, 2}) CHECK(csv[i].substr(csv[i].size() - 2) == ",1");   // projection injective
  for (int i : {3, 4}) CHECK(csv[i].substr(csv[i].size() - 3) == ",-1");  // not checked there

  CHECK(r.output.find("ellipse midpoint normal defect rate") != std::string::npos);
  CHECK(fs::exists(dir / "run.json"));
}
