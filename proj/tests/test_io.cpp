#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>

#include "doctest.h"
#include "gravdisk/dynamics.hpp"
#include "gravdisk/errors.hpp"
#include "gravdisk/io.hpp"

using namespace gravdisk;

namespace {

std::string parse_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

// config_echo emits "# key = value" lines; strip the comment prefix so the
// parser can eat its own echo
std::string strip_echo(const std::string& echo) {
  std::istringstream in(echo);
  std::string line, out;
  while (std::getline(in, line)) {
    if (line.rfind("# warning:", 0) == 0) continue;
    if (line.rfind("# ", 0) == 0) out += line.substr(2) + "\n";
  }
  return out;
}

void check_equal(const Config& a, const Config& b) {
  CHECK(a.K == b.K);
  CHECK(a.M == b.M);
  CHECK(a.d0 == b.d0);
  CHECK(a.gravity_sign == b.gravity_sign);
  CHECK(a.init == b.init);
  CHECK(a.perturb_base == b.perturb_base);
  CHECK(a.omega == b.omega);
  CHECK(a.perturb_mode == b.perturb_mode);
  CHECK(a.perturb_amplitude == b.perturb_amplitude);
  CHECK(a.dt == b.dt);
  CHECK(a.t_end == b.t_end);
  CHECK(a.output_interval == b.output_interval);
  CHECK(a.project_divergence == b.project_divergence);
  CHECK(a.det_tolerance == b.det_tolerance);
  CHECK(a.solver_tol == b.solver_tol);
  CHECK(a.max_iter == b.max_iter);
  CHECK(a.taylor_policy == b.taylor_policy);
  CHECK(a.cfl_c == b.cfl_c);
  CHECK(a.seed == b.seed);
  CHECK(a.rate_poly_a == b.rate_poly_a);
  CHECK(a.rate_poly_b == b.rate_poly_b);
  CHECK(a.rate_poly_c == b.rate_poly_c);
  CHECK(a.output_path == b.output_path);
}

}  // namespace

TEST_CASE("config parsing and echo round trip") {
  const std::string text =
      "# full configuration\n"
      "K = 24\n"
      "M = 16\n"
      "d0 = 0.25\n"
      "gravity_sign = 1\n"
      "initial_condition = perturbed\n"
      "perturb_base = static\n"
      "omega = 0.25   # ignored for static base\n"
      "perturb_mode = 4\n"
      "perturb_amplitude = 2e-3\n"
      "dt = 5e-4\n"
      "t_end = 0.1\n"
      "output_interval = 1e-2\n"
      "project_divergence = false\n"
      "det_tolerance = 1e-5\n"
      "solver_tol = 1e-9\n"
      "max_iter = 500\n"
      "taylor_policy = abort\n"
      "cfl_c = 0.4\n"
      "seed = 999\n"
      "rate_poly_a = 0.5\n"
      "rate_poly_b = 2\n"
      "rate_poly_c = 3\n"
      "output_path = foo.csv\n";
  const Config cfg = parse_config(text);
  CHECK(cfg.K == 24);
  CHECK(cfg.M == 16);
  CHECK(cfg.init == InitKind::perturbed);
  CHECK(cfg.perturb_base == "static");
  CHECK(cfg.taylor_policy == TaylorPolicy::abort_run);
  CHECK(!cfg.project_divergence);
  CHECK(cfg.seed == 999ull);
  CHECK(cfg.warnings.empty());

  const Config again = parse_config(strip_echo(config_echo(cfg)));
  check_equal(cfg, again);

  // defaults survive a minimal file
  const Config min = parse_config("initial_condition = static\n");
  CHECK(min.K == 32);
  CHECK(min.M == 48);
  CHECK(min.dt == 1e-3);
  CHECK(min.solver_tol == 1e-10);
  CHECK(min.init == InitKind::statik);
}

TEST_CASE("config parse errors name the line") {
  CHECK(parse_error("junk\n") == "line 1: expected key = value");
  CHECK(parse_error("initial_condition = static\nbogus = 1\n") ==
        "line 2: unknown key 'bogus'");
  CHECK(parse_error("K = 15\n") == "line 1: K must be even ≥ 16");
  CHECK(parse_error("M = 3\n") == "line 1: M must be at least 4");
  CHECK(parse_error("dt = abc\n") == "line 1: invalid value for dt");
  CHECK(parse_error("d0 = 1.5\n") == "line 1: d0 must lie in (0, 1)");
  CHECK(parse_error("gravity_sign = 0\n") ==
        "line 1: gravity_sign must be -1 or 1");
  CHECK(parse_error("initial_condition = wobble\n") ==
        "line 1: initial_condition must be static, rotation or perturbed");
  CHECK(parse_error("taylor_policy = maybe\n") ==
        "line 1: taylor_policy must be warn or abort");
  CHECK(parse_error("seed = -1\n") == "line 1: seed must be nonnegative");
  CHECK(parse_error("perturb_mode = 0\n") ==
        "line 1: perturb_mode must be at least 1");
  CHECK(parse_error("output_path =\n") ==
        "line 1: output_path must not be empty");
  CHECK(parse_error("") == "missing required key: initial_condition");
  CHECK(parse_error("initial_condition = static\ndt = 3e-3\n") ==
        "output_interval must be an integer multiple of dt");

  bool caught = false;
  try {
    parse_config_file("definitely/not/here.cfg");
  } catch (const ConfigError& e) {
    caught = std::string(e.what()) == "cannot read 'definitely/not/here.cfg'";
  }
  CHECK(caught);
}

TEST_CASE("fast-spin warning trips exactly at the threshold") {
  const std::string base =
      "initial_condition = rotation\n"
      "omega = ";
  const Config safe = parse_config(base + "0.7\n");
  CHECK(safe.warnings.empty());
  const Config risky = parse_config(base + "0.71\n");
  REQUIRE(risky.warnings.size() == 1);
  CHECK(risky.warnings[0].find("nonpositive background Taylor sign") !=
        std::string::npos);

  // repulsive sign has no Taylor background to lose
  const Config rep =
      parse_config("initial_condition = rotation\nomega = 0.9\ngravity_sign = 1\n");
  CHECK(rep.warnings.empty());
}

TEST_CASE("records csv round trip is bit exact") {
  RunRecord rec;
  rec.echo = config_echo(parse_config("initial_condition = rotation\n"));
  rec.status = "aborted: Taylor sign nonpositive at t = 0.123";
  for (int i = 0; i < 3; ++i) {
    RunRow r;
    r.t = 1e-2 * i;
    r.E = std::numbers::pi * (i + 1);
    r.E1 = 0.1 + i;
    r.E2 = 1e-300;
    r.E3 = -2.5e-17;
    r.E4 = 0.0;
    r.c0 = 0.25;
    r.det_drift = 1e-15;
    r.vorticity_drift = 3.0;
    r.div_v = 1.0 / 3.0;
    r.x_bound = 384.845100064749753;
    rec.rows.push_back(r);
  }

  const std::string path = "tmp_records_roundtrip.csv";
  write_records(rec, path);
  const RunRecord back = read_records(path);
  std::remove(path.c_str());

  CHECK(back.echo == rec.echo);
  CHECK(back.status == rec.status);
  REQUIRE(back.rows.size() == rec.rows.size());
  for (size_t i = 0; i < rec.rows.size(); ++i) {
    CHECK(back.rows[i].t == rec.rows[i].t);
    CHECK(back.rows[i].E == rec.rows[i].E);
    CHECK(back.rows[i].E1 == rec.rows[i].E1);
    CHECK(back.rows[i].E2 == rec.rows[i].E2);
    CHECK(back.rows[i].E3 == rec.rows[i].E3);
    CHECK(back.rows[i].E4 == rec.rows[i].E4);
    CHECK(back.rows[i].c0 == rec.rows[i].c0);
    CHECK(back.rows[i].det_drift == rec.rows[i].det_drift);
    CHECK(back.rows[i].vorticity_drift == rec.rows[i].vorticity_drift);
    CHECK(back.rows[i].div_v == rec.rows[i].div_v);
    CHECK(back.rows[i].x_bound == rec.rows[i].x_bound);
  }

  const std::string csv = records_to_csv(rec);
  CHECK(csv.find("t,E,E1,E2,E3,E4,c0,det_drift,vorticity_drift,div_v,x_bound\n") !=
        std::string::npos);
  CHECK(csv.find("# status: aborted:") != std::string::npos);
}

TEST_CASE("records reader rejects malformed files") {
  const std::string path = "tmp_records_bad.csv";

  std::FILE* f = std::fopen(path.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs("t,E,WRONG\n1,2,3\n", f);
  std::fclose(f);
  bool caught = false;
  try {
    read_records(path);
  } catch (const ConfigError& e) {
    caught = std::string(e.what()).find("bad header") != std::string::npos;
  }
  CHECK(caught);

  f = std::fopen(path.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs(
      "t,E,E1,E2,E3,E4,c0,det_drift,vorticity_drift,div_v,x_bound\n1,2,3\n",
      f);
  std::fclose(f);
  caught = false;
  try {
    read_records(path);
  } catch (const ConfigError& e) {
    caught = std::string(e.what()).find("short row") != std::string::npos;
  }
  CHECK(caught);
  std::remove(path.c_str());

  caught = false;
  try {
    read_records("definitely/not/here.csv");
  } catch (const ConfigError&) {
    caught = true;
  }
  CHECK(caught);
}

TEST_CASE("snapshot round trip is bit exact") {
  const GridSpec g = make_grid(16, 6);
  FlowState s = perturbed_state(g, 3, 1e-3, "rotation", 0.5);
  s.t = 0.7718281828459045;

  const std::string path = "tmp_snapshot_roundtrip.txt";
  write_snapshot(g, s, path);
  GridSpec g2;
  const FlowState back = read_snapshot(path, g2);
  std::remove(path.c_str());

  CHECK(g2.K == g.K);
  CHECK(g2.M == g.M);
  CHECK(back.t == s.t);
  for (int i = 0; i < 2; ++i) {
    CHECK((back.x[i] - s.x[i]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.V[i] - s.V[i]).cwiseAbs().maxCoeff() == 0.0);
  }

  std::FILE* f = std::fopen(path.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fputs("gravdisk-snapshot 2\nK 16\n", f);
  std::fclose(f);
  bool caught = false;
  try {
    GridSpec gd;
    read_snapshot(path, gd);
  } catch (const ConfigError& e) {
    caught = std::string(e.what()).find("bad magic") != std::string::npos;
  }
  CHECK(caught);
  std::remove(path.c_str());
}
