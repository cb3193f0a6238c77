#include "gravdisk/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gravdisk/errors.hpp"
#include "gravdisk/grid.hpp"

namespace gravdisk {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double parse_double(int line, const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x = 0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    fail(line, "invalid value for " + key);
  }
  if (pos != v.size()) fail(line, "invalid value for " + key);
  return x;
}

long long parse_int(int line, const std::string& key, const std::string& v) {
  size_t pos = 0;
  long long x = 0;
  try {
    x = std::stoll(v, &pos);
  } catch (const std::exception&) {
    fail(line, "invalid value for " + key);
  }
  if (pos != v.size()) fail(line, "invalid value for " + key);
  return x;
}

bool parse_bool(int line, const std::string& key, const std::string& v) {
  if (v == "true" || v == "on" || v == "1") return true;
  if (v == "false" || v == "off" || v == "0") return false;
  fail(line, "invalid value for " + key);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Config parse_config(const std::string& text) {
  Config c;
  bool saw_init = false;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) fail(lineno, "expected key = value");

    if (key == "K") {
      long long k = parse_int(lineno, key, val);
      if (k < 16 || k % 2 != 0) fail(lineno, "K must be even ≥ 16");
      c.K = static_cast<int>(k);
    } else if (key == "M") {
      long long m = parse_int(lineno, key, val);
      if (m < 4) fail(lineno, "M must be at least 4");
      c.M = static_cast<int>(m);
    } else if (key == "d0") {
      c.d0 = parse_double(lineno, key, val);
      if (!(c.d0 > 0.0 && c.d0 < 1.0)) fail(lineno, "d0 must lie in (0, 1)");
    } else if (key == "gravity_sign") {
      long long s = parse_int(lineno, key, val);
      if (s != -1 && s != 1) fail(lineno, "gravity_sign must be -1 or 1");
      c.gravity_sign = static_cast<int>(s);
    } else if (key == "initial_condition") {
      if (val == "static")
        c.init = InitKind::statik;
      else if (val == "rotation")
        c.init = InitKind::rotation;
      else if (val == "perturbed")
        c.init = InitKind::perturbed;
      else
        fail(lineno, "initial_condition must be static, rotation or perturbed");
      saw_init = true;
    } else if (key == "perturb_base") {
      if (val != "static" && val != "rotation")
        fail(lineno, "perturb_base must be static or rotation");
      c.perturb_base = val;
    } else if (key == "omega") {
      c.omega = parse_double(lineno, key, val);
    } else if (key == "perturb_mode") {
      long long m = parse_int(lineno, key, val);
      if (m < 1) fail(lineno, "perturb_mode must be at least 1");
      c.perturb_mode = static_cast<int>(m);
    } else if (key == "perturb_amplitude") {
      c.perturb_amplitude = parse_double(lineno, key, val);
    } else if (key == "dt") {
      c.dt = parse_double(lineno, key, val);
      if (!(c.dt > 0.0)) fail(lineno, "dt must be positive");
    } else if (key == "t_end") {
      c.t_end = parse_double(lineno, key, val);
      if (c.t_end < 0.0) fail(lineno, "t_end must be nonnegative");
    } else if (key == "output_interval") {
      c.output_interval = parse_double(lineno, key, val);
      if (!(c.output_interval > 0.0))
        fail(lineno, "output_interval must be positive");
    } else if (key == "project_divergence") {
      c.project_divergence = parse_bool(lineno, key, val);
    } else if (key == "det_tolerance") {
      c.det_tolerance = parse_double(lineno, key, val);
      if (!(c.det_tolerance > 0.0))
        fail(lineno, "det_tolerance must be positive");
    } else if (key == "solver_tol") {
      c.solver_tol = parse_double(lineno, key, val);
      if (!(c.solver_tol > 0.0)) fail(lineno, "solver_tol must be positive");
    } else if (key == "max_iter") {
      long long m = parse_int(lineno, key, val);
      if (m < 1) fail(lineno, "max_iter must be at least 1");
      c.max_iter = static_cast<int>(m);
    } else if (key == "taylor_policy") {
      if (val == "warn")
        c.taylor_policy = TaylorPolicy::warn;
      else if (val == "abort")
        c.taylor_policy = TaylorPolicy::abort_run;
      else
        fail(lineno, "taylor_policy must be warn or abort");
    } else if (key == "cfl_c") {
      c.cfl_c = parse_double(lineno, key, val);
      if (!(c.cfl_c > 0.0)) fail(lineno, "cfl_c must be positive");
    } else if (key == "seed") {
      long long s = parse_int(lineno, key, val);
      if (s < 0) fail(lineno, "seed must be nonnegative");
      c.seed = static_cast<unsigned long long>(s);
    } else if (key == "rate_poly_a") {
      c.rate_poly_a = parse_double(lineno, key, val);
    } else if (key == "rate_poly_b") {
      c.rate_poly_b = parse_double(lineno, key, val);
    } else if (key == "rate_poly_c") {
      c.rate_poly_c = parse_double(lineno, key, val);
    } else if (key == "output_path") {
      if (val.empty()) fail(lineno, "output_path must not be empty");
      c.output_path = val;
    } else {
      fail(lineno, "unknown key '" + key + "'");
    }
  }

  if (!saw_init) throw ConfigError("missing required key: initial_condition");

  double steps = c.output_interval / c.dt;
  if (std::abs(steps - std::round(steps)) >
      1e-9 * std::max(1.0, std::abs(steps)))
    throw ConfigError("output_interval must be an integer multiple of dt");

  bool rotating = c.init == InitKind::rotation ||
                  (c.init == InitKind::perturbed && c.perturb_base == "rotation");
  if (rotating && c.gravity_sign == -1 && c.omega * c.omega >= 0.5)
    c.warnings.push_back(
        "omega = " + fmt(c.omega) +
        " gives a nonpositive background Taylor sign (1/2 - omega^2 <= 0)");

  return c;
}

Config parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_echo(const Config& c) {
  std::ostringstream o;
  auto kv = [&o](const std::string& k, const std::string& v) {
    o << "# " << k << " = " << v << "\n";
  };
  kv("K", std::to_string(c.K));
  kv("M", std::to_string(c.M));
  kv("d0", fmt(c.d0));
  kv("gravity_sign", std::to_string(c.gravity_sign));
  kv("initial_condition", c.init == InitKind::statik     ? "static"
                          : c.init == InitKind::rotation ? "rotation"
                                                         : "perturbed");
  kv("perturb_base", c.perturb_base);
  kv("omega", fmt(c.omega));
  kv("perturb_mode", std::to_string(c.perturb_mode));
  kv("perturb_amplitude", fmt(c.perturb_amplitude));
  kv("dt", fmt(c.dt));
  kv("t_end", fmt(c.t_end));
  kv("output_interval", fmt(c.output_interval));
  kv("project_divergence", c.project_divergence ? "true" : "false");
  kv("det_tolerance", fmt(c.det_tolerance));
  kv("solver_tol", fmt(c.solver_tol));
  kv("max_iter", std::to_string(c.max_iter));
  kv("taylor_policy",
     c.taylor_policy == TaylorPolicy::warn ? "warn" : "abort");
  kv("cfl_c", fmt(c.cfl_c));
  kv("seed", std::to_string(c.seed));
  kv("rate_poly_a", fmt(c.rate_poly_a));
  kv("rate_poly_b", fmt(c.rate_poly_b));
  kv("rate_poly_c", fmt(c.rate_poly_c));
  kv("output_path", c.output_path);
  for (const auto& w : c.warnings) o << "# warning: " << w << "\n";
  return o.str();
}

std::string records_to_csv(const RunRecord& rec) {
  std::ostringstream o;
  o << rec.echo;
  o << "t,E,E1,E2,E3,E4,c0,det_drift,vorticity_drift,div_v,x_bound\n";
  for (const auto& r : rec.rows) {
    const double v[11] = {r.t,  r.E,  r.E1, r.E2,        r.E3,   r.E4,
                          r.c0, r.det_drift, r.vorticity_drift, r.div_v,
                          r.x_bound};
    for (int i = 0; i < 11; ++i) o << (i ? "," : "") << fmt(v[i]);
    o << "\n";
  }
  o << "# status: " << rec.status << "\n";
  return o.str();
}

void write_records(const RunRecord& rec, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write to '" + path + "'");
  out << records_to_csv(rec);
  out.flush();
  if (!out) throw ConfigError("cannot write to '" + path + "'");
}

RunRecord read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  RunRecord rec;
  rec.status = "";
  std::string line;
  bool saw_header = false;
  const std::string header =
      "t,E,E1,E2,E3,E4,c0,det_drift,vorticity_drift,div_v,x_bound";
  const std::string status_tag = "# status: ";
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind(status_tag, 0) == 0) {
      rec.status = line.substr(status_tag.size());
      continue;
    }
    if (!line.empty() && line[0] == '#') {
      rec.echo += line + "\n";
      continue;
    }
    if (trim(line).empty()) continue;
    if (!saw_header) {
      if (line != header)
        throw ConfigError("malformed run file '" + path + "': bad header");
      saw_header = true;
      continue;
    }
    RunRow r;
    double* slot[11] = {&r.t,  &r.E,  &r.E1,        &r.E2,
                        &r.E3, &r.E4, &r.c0,        &r.det_drift,
                        &r.vorticity_drift, &r.div_v, &r.x_bound};
    std::istringstream ls(line);
    std::string cell;
    for (int i = 0; i < 11; ++i) {
      if (!std::getline(ls, cell, ','))
        throw ConfigError("malformed run file '" + path + "': short row");
      *slot[i] = parse_double(0, "row", trim(cell));
    }
    rec.rows.push_back(r);
  }
  if (!saw_header)
    throw ConfigError("malformed run file '" + path + "': bad header");
  return rec;
}

namespace {

void write_field(std::ostream& o, const std::string& name, const Field& f) {
  o << "field " << name << "\n";
  for (Eigen::Index j = 0; j < f.rows(); ++j) {
    for (Eigen::Index m = 0; m < f.cols(); ++m)
      o << (m ? " " : "") << fmt(f(j, m).real()) << " " << fmt(f(j, m).imag());
    o << "\n";
  }
}

Field read_field(std::istream& in, const std::string& name, int M, int K) {
  std::string tag, got;
  if (!(in >> tag >> got) || tag != "field" || got != name)
    throw ConfigError("malformed snapshot: expected field " + name);
  Field f(M, K);
  for (int j = 0; j < M; ++j)
    for (int m = 0; m < K; ++m) {
      double re, im;
      if (!(in >> re >> im))
        throw ConfigError("malformed snapshot: truncated field " + name);
      f(j, m) = {re, im};
    }
  return f;
}

}  // namespace

void write_snapshot(const GridSpec& g, const FlowState& s,
                    const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write to '" + path + "'");
  out << "gravdisk-snapshot 1\n";
  out << "K " << g.K << "\n";
  out << "M " << g.M << "\n";
  out << "t " << fmt(s.t) << "\n";
  write_field(out, "x1", s.x[0]);
  write_field(out, "x2", s.x[1]);
  write_field(out, "V1", s.V[0]);
  write_field(out, "V2", s.V[1]);
  out << "end\n";
  out.flush();
  if (!out) throw ConfigError("cannot write to '" + path + "'");
}

FlowState read_snapshot(const std::string& path, GridSpec& g_out) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "gravdisk-snapshot" ||
      version != 1)
    throw ConfigError("malformed snapshot '" + path + "': bad magic");
  std::string tag;
  int K = 0, M = 0;
  double t = 0;
  if (!(in >> tag >> K) || tag != "K")
    throw ConfigError("malformed snapshot '" + path + "': bad K line");
  if (!(in >> tag >> M) || tag != "M")
    throw ConfigError("malformed snapshot '" + path + "': bad M line");
  if (!(in >> tag >> t) || tag != "t")
    throw ConfigError("malformed snapshot '" + path + "': bad t line");
  g_out = make_grid(K, M);
  FlowState s;
  s.t = t;
  s.x[0] = read_field(in, "x1", M, K);
  s.x[1] = read_field(in, "x2", M, K);
  s.V[0] = read_field(in, "V1", M, K);
  s.V[1] = read_field(in, "V2", M, K);
  if (!(in >> tag) || tag != "end")
    throw ConfigError("malformed snapshot '" + path + "': missing end");
  return s;
}

}  // namespace gravdisk
