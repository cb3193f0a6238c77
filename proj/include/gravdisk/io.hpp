#pragma once
#include <string>
#include <vector>

#include "gravdisk/geometry.hpp"

namespace gravdisk {

enum class InitKind { statik, rotation, perturbed };
enum class TaylorPolicy { warn, abort_run };

// Line-based "key = value" configuration; '#' comments, unknown keys
// rejected, every parse error names the offending line.
struct Config {
  int K = 32, M = 48;
  double d0 = 0.5;
  int gravity_sign = -1;
  InitKind init = InitKind::statik;
  std::string perturb_base = "rotation";
  double omega = 0.5;
  int perturb_mode = 3;
  double perturb_amplitude = 1e-3;
  double dt = 1e-3;
  double t_end = 0.5;
  double output_interval = 1e-2;
  bool project_divergence = true;
  double det_tolerance = 1e-6;
  double solver_tol = 1e-10;
  int max_iter = 2000;
  TaylorPolicy taylor_policy = TaylorPolicy::warn;
  double cfl_c = 0.5;
  unsigned long long seed = 12345;
  double rate_poly_a = 1.0, rate_poly_b = 1.0, rate_poly_c = 1.0;
  std::string output_path = "run.csv";
  std::vector<std::string> warnings;  // accepted but flagged settings
};

Config parse_config(const std::string& text);
Config parse_config_file(const std::string& path);
std::string config_echo(const Config& c);  // '#'-prefixed block

struct RunRow {
  double t = 0, E = 0, E1 = 0, E2 = 0, E3 = 0, E4 = 0, c0 = 0;
  double det_drift = 0, vorticity_drift = 0, div_v = 0, x_bound = 0;
};

struct RunRecord {
  std::string echo;
  std::vector<RunRow> rows;
  std::string status = "completed";
};

// Column order is frozen:
// t,E,E1,E2,E3,E4,c0,det_drift,vorticity_drift,div_v,x_bound
std::string records_to_csv(const RunRecord& rec);
void write_records(const RunRecord& rec, const std::string& path);
RunRecord read_records(const std::string& path);

// Structured text snapshot of a state; %.17g round-trips doubles bit-exactly.
void write_snapshot(const GridSpec& g, const FlowState& s,
                    const std::string& path);
FlowState read_snapshot(const std::string& path, GridSpec& g_out);

}  // namespace gravdisk
