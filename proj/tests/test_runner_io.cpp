#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mclfem/config.hpp"
#include "mclfem/errors.hpp"
#include "mclfem/initial_conditions.hpp"
#include "mclfem/io.hpp"
#include "mclfem/runner.hpp"

using namespace mclfem;
namespace fs = std::filesystem;

namespace {

const double kPi = std::numbers::pi;

std::string error_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mclfem_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("minimal config fills defaults") {
  const RunConfig c = parse_config("model:\n  kind: advection\n");
  const RunConfig d;
  CHECK(c.mesh == d.mesh);
  CHECK(c.limiter.mode == LimiterMode::mcl);
  CHECK(c.integrator.cfl == 0.5);
  CHECK(c.integrator.method == TimeMethod::ssp_rk3);
  CHECK(c.initial_condition.name == "sine_wave");
  CHECK(c.initial_condition.params.at("amplitude") == 1.0);
  CHECK(c.threads == 1);
  CHECK(parse_config("").mesh == d.mesh);
}

TEST_CASE("config errors name the key or the line") {
  CHECK(error_of("limitter:\n  mode: mcl\n").find("limitter") != std::string::npos);
  CHECK(error_of("limiter:\n  mdoe: mcl\n").find("limiter.mdoe") != std::string::npos);
  CHECK(error_of("integrator:\n  cfl: 1.5\n").find("integrator.cfl") != std::string::npos);
  CHECK(error_of("limiter:\n  mode: banana\n").find("limiter.mode") != std::string::npos);
  CHECK(error_of("mesh:\n  cells: [1, 2\n").find("line") != std::string::npos);
  CHECK(error_of("initial_condition:\n  name: sod\n").find("sod") != std::string::npos);
  CHECK(error_of("initial_condition:\n  name: step\n  hieght: 2\n").find("hieght") !=
        std::string::npos);
  CHECK(error_of("mesh:\n  cells: many\n").find("mesh.cells") != std::string::npos);
}

TEST_CASE("config round trip through serialize_config") {
  RunConfig c = parse_config(R"(
mesh: {dim: 2, cells: 24, extent: [2.0, 1.0]}
model: {kind: euler, gamma: 1.4}
limiter: {mode: bv_entropy, entropy_margin: 0.002, bound_stencil: nodal}
integrator: {method: ssp_rk2, cfl: 0.3, t_end: 0.25, snapshots: [0.1, 0.2]}
initial_condition: {name: kelvin_helmholtz_2d, noise: 0.01}
admissibility: {rho_floor: 1.0e-8, energy_cap: 100}
assertions: {conservation: 1.0e-11, positivity: true}
study: {levels: [16, 32]}
seed: 42
threads: 2
)");
  CHECK(c.mesh.extent[0] == 2.0);
  CHECK(c.limiter.threads == 2);
  const RunConfig again = parse_config(serialize_config(c));
  CHECK(again == c);
  const RunConfig defaults = parse_config("");
  CHECK(parse_config(serialize_config(defaults)) == defaults);
}

TEST_CASE("initial conditions: constant, sine nodal values, Sod data") {
  const Mesh m = build_uniform_periodic_mesh(1, 16, {1.0, 0.0});
  InitialConditionConfig ic;
  ic.name = "constant";
  for (const auto& s : interpolate_initial_condition(m, ModelSpec::burgers(1), ic, {}).values)
    CHECK(s[0] == 0.5);

  ic.name = "sine_wave";
  const StateField s = interpolate_initial_condition(m, ModelSpec::burgers(1), ic, {});
  for (int i = 0; i < 16; ++i)
    CHECK(s.values[i][0] == doctest::Approx(std::sin(2 * kPi * m.node_coords[i][0])).epsilon(1e-15).scale(1e-15));

  ic.name = "sod";
  const ModelSpec e = ModelSpec::euler(1);
  const StateField sod = interpolate_initial_condition(m, e, ic, {});
  for (int i = 0; i < 16; ++i) {
    const Primitive w = primitive_from_conserved(e, sod.values[i]);
    const bool left = m.node_coords[i][0] < 0.5;
    CHECK(w.rho == doctest::Approx(left ? 1.0 : 0.125));
    CHECK(w.velocity[0] == 0.0);
    CHECK(w.pressure == doctest::Approx(left ? 1.0 : 0.1));
  }

  // Inadmissible nodal data report the node location.
  ic.name = "constant";
  ic.params = {{"rho", -1.0}};
  try {
    interpolate_initial_condition(m, e, ic, {});
    FAIL("expected an error");
  } catch (const Error& err) {
    CHECK(std::string(err.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("seeded perturbation is reproducible") {
  const Mesh m = build_uniform_periodic_mesh(2, 8, {1.0, 1.0});
  InitialConditionConfig ic;
  ic.name = "kelvin_helmholtz_2d";
  ic.params = {{"noise", 0.01}};
  const ModelSpec e = ModelSpec::euler(2);
  const StateField a = interpolate_initial_condition(m, e, ic, {}, 7);
  const StateField b = interpolate_initial_condition(m, e, ic, {}, 7);
  const StateField c = interpolate_initial_condition(m, e, ic, {}, 8);
  bool differs = false;
  for (int i = 0; i < m.num_nodes(); ++i) {
    CHECK(a.values[i] == b.values[i]);
    differs = differs || !(a.values[i] == c.values[i]);
  }
  CHECK(differs);
}

TEST_CASE("exact advection solution is a translation") {
  InitialConditionConfig ic;
  ic.name = "sine_wave";
  const auto ref = exact_solution(ModelSpec::advection(1, {1.0, 0.0}), ic, {1.0, 1.0}, 0.25);
  REQUIRE(ref);
  CHECK((*ref)({0.5, 0.0})[0] == doctest::Approx(std::sin(2 * kPi * 0.25)));
  CHECK_FALSE(exact_solution(ModelSpec::burgers(1), ic, {1.0, 1.0}, 0.25));
}

TEST_CASE("field CSV round trip and VTK layout") {
  const Mesh m = build_uniform_periodic_mesh(2, 4, {1.0, 1.0});
  const ModelSpec e = ModelSpec::euler(2);
  InitialConditionConfig ic;
  ic.name = "sine_wave";
  StateField u = interpolate_initial_condition(m, e, ic, {});
  u.time = 0.125;
  std::stringstream ss;
  write_field_csv(m, e, u, ss);
  const std::string text = ss.str();
  CHECK(text.find("node,x,y,rho,mx,my,E\n") != std::string::npos);
  const StateField back = read_field_csv(ss);
  CHECK(back.time == 0.125);
  REQUIRE(back.size() == u.size());
  for (int i = 0; i < u.size(); ++i) CHECK(back.values[i] == u.values[i]);

  std::istringstream bad("node,x\n0,1\n");
  CHECK_THROWS_AS(read_field_csv(bad), IoError);

  std::ostringstream vtk;
  write_field_vtk(m, e, u, vtk);
  const std::string v = vtk.str();
  CHECK(v.rfind("# vtk DataFile Version", 0) == 0);
  CHECK(v.find("DATASET UNSTRUCTURED_GRID") != std::string::npos);
  CHECK(v.find("POINTS 25 double") != std::string::npos);
  CHECK(v.find("CELLS 32 128") != std::string::npos);
  CHECK(v.find("SCALARS rho double") != std::string::npos);
  CHECK_THROWS_AS(write_field_snapshot(m, e, u, "/nonexistent/dir/x.csv", SnapshotFormat::csv),
                  IoError);
}

TEST_CASE("run driver writes snapshots, diagnostics and step log") {
  RunConfig cfg = parse_config(R"(
mesh: {dim: 1, cells: 32}
model: {kind: burgers}
limiter: {mode: bv_entropy}
integrator: {t_end: 0.1, snapshots: [0.05]}
output: {edges: true, vtk: true}
assertions: {conservation: 1.0e-11, bounds: [-1, 1], entropy_decay: 1.0e-10, entropy_residual: 1.0e-12}
)");
  const RunOutcome o = run_simulation(cfg);
  const auto results = evaluate_run_assertions(cfg, o);
  CHECK(results.size() == 4);
  for (const auto& r : results) CHECK_MESSAGE(r.passed, r.name << ": " << r.detail);
  const fs::path dir = scratch("run");
  write_run_outputs(cfg, o, dir.string());
  for (const char* f : {"snapshot_0000.csv", "snapshot_0001.csv", "snapshot_0001.vtk",
                        "diagnostics.csv", "steps.csv", "edges.csv"})
    CHECK_MESSAGE(fs::exists(dir / f), f);
  CHECK(slurp(dir / "steps.csv").rfind("step,t,dt,cfl_dt,retries,max_entropy_residual", 0) == 0);
}

TEST_CASE("convergence study on linear advection") {
  RunConfig cfg = parse_config(R"(
mesh: {dim: 1}
model: {kind: advection, velocity: [1.0]}
limiter: {mode: mcl}
integrator: {t_end: 0.5}
initial_condition: {name: sine_wave}
assertions: {min_eoc_l1: 1.5}
)");
  const std::vector<int> levels{32, 64, 128};
  const ConvergenceStudy s = run_convergence(cfg, levels);
  REQUIRE(s.table.rows.size() == 3);
  CHECK(s.table.rows[2].l1 < s.table.rows[0].l1);
  CHECK(all_passed(s.assertions));

  cfg.model = ModelSpec::burgers(1);
  CHECK_THROWS_AS(run_convergence(cfg, levels), ConfigError);
}

TEST_CASE("CLI: run, error reporting and exit codes") {
  const fs::path dir = scratch("cli");
  const fs::path cfg = dir / "sod.yaml";
  {
    std::ofstream out(cfg);
    out << "mesh: {dim: 1, cells: 64}\nmodel: {kind: euler}\nlimiter: {mode: mcl}\n"
           "integrator: {t_end: 0.1, snapshots: [0.05]}\ninitial_condition: {name: sod}\n"
           "assertions: {positivity: true, conservation: 1.0e-11}\n";
  }
  const std::string cli = MCLFEM_CLI_PATH;
  const std::string out_dir = (dir / "out").string();
  int rc = std::system((cli + " run --config " + cfg.string() + " --output-dir " + out_dir +
                        " > " + (dir / "stdout.txt").string())
                           .c_str());
  CHECK(rc == 0);
  CHECK(fs::exists(fs::path(out_dir) / "snapshot_0001.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "diagnostics.csv"));

  const fs::path bad = dir / "bad.yaml";
  {
    std::ofstream out(bad);
    out << "limitter:\n  mode: mcl\n";
  }
  const fs::path err = dir / "stderr.txt";
  rc = std::system((cli + " run --config " + bad.string() + " 2> " + err.string()).c_str());
  CHECK(WEXITSTATUS(rc) == 2);
  const std::string e = slurp(err);
  CHECK(e.find("\"error\":\"config\"") != std::string::npos);
  CHECK(e.find("limitter") != std::string::npos);

  rc = std::system((cli + " check-operators --dim 1 --cells 16 > /dev/null").c_str());
  CHECK(rc == 0);
}
