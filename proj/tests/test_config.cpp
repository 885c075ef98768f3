#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "stokeslip/config.hpp"
#include "stokeslip/errors.hpp"

using namespace stokeslip;

namespace {

std::filesystem::path scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() / "stokeslip_config_tests";
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

void check_equal(const RunConfig& a, const RunConfig& b) {
  CHECK(a.element.kind == b.element.kind);
  CHECK(a.element.eta == b.element.eta);
  CHECK(a.scheme == b.scheme);
  CHECK(a.eps_rule.kind == b.eps_rule.kind);
  if (a.eps_rule.kind == EpsRule::Kind::Fixed) CHECK(a.eps_rule.value == b.eps_rule.value);
  CHECK(a.mesh.builtin == b.mesh.builtin);
  CHECK(a.mesh.rings == b.mesh.rings);
  CHECK(a.mesh.node_path == b.mesh.node_path);
  CHECK(a.mesh.ele_path == b.mesh.ele_path);
  CHECK(a.levels == b.levels);
  CHECK(a.solver.method == b.solver.method);
  CHECK(a.solver.restart == b.solver.restart);
  CHECK(a.solver.rel_tol == b.solver.rel_tol);
  CHECK(a.solver.abs_tol == b.solver.abs_tol);
  CHECK(a.solver.max_iter == b.solver.max_iter);
  CHECK(a.solver.precond == b.solver.precond);
  CHECK(a.solver.dense_cap == b.solver.dense_cap);
  CHECK(a.case_name == b.case_name);
  CHECK(a.output_dir == b.output_dir);
}

}  // namespace

TEST_CASE("empty config keeps the baseline defaults") {
  const RunConfig cfg = parse_config_json("{}");
  CHECK(cfg.element.kind == ElementKind::P1);
  CHECK(cfg.element.eta == 0.01);
  CHECK(cfg.scheme == PenaltyScheme::Reduced);
  CHECK(cfg.eps_rule.kind == EpsRule::Kind::PropH2);
  CHECK(cfg.mesh.builtin);
  CHECK(cfg.mesh.rings == 4);
  CHECK(cfg.levels == 4);
  CHECK(cfg.solver.method == SolveMethod::Gmres);
  CHECK(cfg.solver.restart == 200);
  CHECK(cfg.solver.rel_tol == 1e-8);
  CHECK(cfg.solver.abs_tol == 1e-10);
  CHECK(cfg.solver.max_iter == 0);
  CHECK(cfg.solver.precond == PrecondKind::Ilu0);
  CHECK(cfg.solver.dense_cap == 6000);
  CHECK(cfg.case_name == "builtin_disk");
  CHECK(cfg.output_dir == "out");
}

TEST_CASE("malformed documents are config errors") {
  CHECK_THROWS_AS(parse_config_json("not json"), ConfigError);
  CHECK_THROWS_AS(parse_config_json("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_config_json("\"p1\""), ConfigError);
}

TEST_CASE("unknown keys are rejected at every level") {
  CHECK_THROWS_AS(parse_config_json(R"({"elment": "p1"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"epsilon": {"rule": "0.1h", "value": 1.0}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"epsilon": {"rule": "0.1h2", "extra": 1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"mesh": {"rings": 4, "node": "m.node"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"solver": {"sweeps": 3}})"), ConfigError);
}

TEST_CASE("values are type- and range-checked") {
  CHECK_THROWS_AS(parse_config_json(R"({"element": 3})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"element": "p2"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"eta": "small"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"scheme": "nitsche"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"levels": 2.5})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"levels": 0})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"mesh": {"rings": "four"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"mesh": {"rings": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"mesh": {}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"mesh": {"node": "m.node"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"case": "lid_cavity"})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"solver": {"method": "cholesky"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"solver": {"restart": 0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"solver": {"rel_tol": 0.0}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"solver": {"abs_tol": -1e-10}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"solver": {"max_iter": -1}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"solver": {"precond": "jacobi"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"solver": {"dense_cap": 0}})"), ConfigError);
  CHECK_NOTHROW(parse_config_json(R"({"solver": {"abs_tol": 0.0}})"));
}

TEST_CASE("element and stabilization interact per the element rules") {
  CHECK(parse_config_json(R"({"eta": 0.5})").element.eta == 0.5);
  CHECK_THROWS_AS(parse_config_json(R"({"eta": 0.0})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"eta": -0.5})"), ConfigError);

  const RunConfig bub = parse_config_json(R"({"element": "p1b"})");
  CHECK(bub.element.bubbles());
  CHECK(bub.element.eta == 0.0);
  CHECK_NOTHROW(parse_config_json(R"({"element": "p1b", "eta": 0.0})"));
  CHECK_THROWS_AS(parse_config_json(R"({"element": "p1b", "eta": 0.01})"), ConfigError);

  // Switching back to p1 from a bubble base restores the default weight.
  RunConfig base;
  base.element = ElementChoice::p1b();
  const RunConfig back = parse_config_json(R"({"element": "p1"})", base);
  CHECK(back.element.kind == ElementKind::P1);
  CHECK(back.element.eta == 0.01);
  // A bubble base stays a bubble element when the file is silent.
  CHECK(parse_config_json("{}", base).element.bubbles());
}

TEST_CASE("epsilon rules parse and validate") {
  CHECK(parse_config_json(R"({"epsilon": {"rule": "0.1h"}})").eps_rule.kind ==
        EpsRule::Kind::PropH);
  CHECK(parse_config_json(R"({"epsilon": {"rule": "0.1h2"}})").eps_rule.kind ==
        EpsRule::Kind::PropH2);
  const RunConfig fixed = parse_config_json(R"({"epsilon": {"rule": "fixed", "value": 1e-6}})");
  CHECK(fixed.eps_rule.kind == EpsRule::Kind::Fixed);
  CHECK(fixed.eps_rule.value == 1e-6);
  CHECK_THROWS_AS(parse_config_json(R"({"epsilon": {"rule": "fixed"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"epsilon": {"rule": "fixed", "value": 0.0}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"epsilon": {"rule": "fixed", "value": -1e-8}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"epsilon": {"rule": "h"}})"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(R"({"epsilon": "0.1h"})"), ConfigError);
}

TEST_CASE("mesh sources are exclusive") {
  const RunConfig rings = parse_config_json(R"({"mesh": {"rings": 6}})");
  CHECK(rings.mesh.builtin);
  CHECK(rings.mesh.rings == 6);

  const RunConfig imported =
      parse_config_json(R"({"mesh": {"node": "m.node", "ele": "m.ele"}})");
  CHECK_FALSE(imported.mesh.builtin);
  CHECK(imported.mesh.node_path == "m.node");
  CHECK(imported.mesh.ele_path == "m.ele");
}

TEST_CASE("file keys override the base and silence preserves it") {
  RunConfig base;
  base.mesh.rings = 8;
  base.solver.rel_tol = 1e-6;
  base.scheme = PenaltyScheme::Full;

  const RunConfig kept = parse_config_json("{}", base);
  CHECK(kept.mesh.rings == 8);
  CHECK(kept.solver.rel_tol == 1e-6);
  CHECK(kept.scheme == PenaltyScheme::Full);

  const RunConfig overridden = parse_config_json(R"({"levels": 7, "scheme": "reduced"})", base);
  CHECK(overridden.levels == 7);
  CHECK(overridden.scheme == PenaltyScheme::Reduced);
  CHECK(overridden.mesh.rings == 8);  // untouched keys keep base values
  CHECK(overridden.solver.rel_tol == 1e-6);
}

TEST_CASE("config echo round-trips every field") {
  RunConfig cfg;
  cfg.element = ElementChoice::p1b();
  cfg.scheme = PenaltyScheme::Full;
  cfg.eps_rule = EpsRule::fixed(2e-5);
  cfg.mesh.builtin = false;
  cfg.mesh.node_path = "in/m.node";
  cfg.mesh.ele_path = "in/m.ele";
  cfg.levels = 6;
  cfg.solver.method = SolveMethod::Bicgstab;
  cfg.solver.restart = 77;
  cfg.solver.rel_tol = 1e-9;
  cfg.solver.abs_tol = 0.0;
  cfg.solver.max_iter = 123;
  cfg.solver.precond = PrecondKind::None;
  cfg.solver.dense_cap = 500;
  cfg.output_dir = "results";

  const std::string text = config_json(cfg);
  const RunConfig back = parse_config_json(text);
  check_equal(back, cfg);
  CHECK(config_json(back) == text);  // canonical form is a fixed point

  RunConfig plain;  // defaults round-trip too
  check_equal(parse_config_json(config_json(plain)), plain);
}

TEST_CASE("config files load through the same validation") {
  const auto good = scratch_dir() / "good.json";
  {
    std::ofstream out(good);
    out << R"({"mesh": {"rings": 2}, "levels": 3})";
  }
  const RunConfig cfg = load_config_file(good.string());
  CHECK(cfg.mesh.rings == 2);
  CHECK(cfg.levels == 3);

  CHECK_THROWS_AS(load_config_file((scratch_dir() / "absent.json").string()), IoError);

  const auto bad = scratch_dir() / "bad.json";
  {
    std::ofstream out(bad);
    out << R"({"mesh": {"rings": 2)";
  }
  CHECK_THROWS_AS(load_config_file(bad.string()), ConfigError);
}
