#include "mclfem/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "mclfem/errors.hpp"
#include "mclfem/initial_conditions.hpp"

namespace mclfem {

namespace {

std::string at_line(const YAML::Node& n) {
  const auto mark = n.Mark();
  if (mark.line < 0) return "";
  return " (line " + std::to_string(mark.line + 1) + ")";
}

// A mapping section whose keys are consumed one by one; leftovers are errors.
class Section {
 public:
  Section(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (node_ && !node_.IsMap())
      throw ConfigError(path_ + ": expected a mapping" + at_line(node_));
  }

  bool has(const std::string& key) const { return node_ && node_[key]; }

  YAML::Node take(const std::string& key) {
    seen_.insert(key);
    // A default-constructed YAML::Node is a defined null; absent keys must test false.
    return node_ ? node_[key] : YAML::Node(YAML::NodeType::Undefined);
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  template <class T>
  void read(const std::string& key, T& out) {
    const YAML::Node n = take(key);
    if (!n) return;
    out = convert<T>(n, key_path(key));
  }

  void read_bool(const std::string& key, bool& out) { read(key, out); }

  template <class T>
  static T convert(const YAML::Node& n, const std::string& path) {
    if (!n.IsScalar()) throw ConfigError(path + ": expected a scalar value" + at_line(n));
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(path + ": cannot interpret '" + n.Scalar() + "'" + at_line(n));
    }
  }

  static std::vector<double> numbers(const YAML::Node& n, const std::string& path) {
    if (!n.IsSequence()) throw ConfigError(path + ": expected a list" + at_line(n));
    std::vector<double> out;
    for (std::size_t k = 0; k < n.size(); ++k)
      out.push_back(convert<double>(n[k], path + "[" + std::to_string(k) + "]"));
    return out;
  }

  /// Rejects every key that was not consumed.
  void finish() const {
    if (!node_) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (seen_.count(key)) continue;
      std::string detail;
      if (kv.second.IsMap() && kv.second.size() > 0)
        detail = " (" + key_path(key) + "." + kv.second.begin()->first.as<std::string>() + ")";
      throw ConfigError("unknown key '" + key_path(key) + "'" + detail + at_line(kv.first));
    }
  }

  const YAML::Node& node() const { return node_; }

 private:
  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class E>
E parse_enum(const std::string& value, const std::string& path,
             const std::vector<std::pair<std::string, E>>& table) {
  for (const auto& [name, e] : table)
    if (name == value) return e;
  std::string allowed;
  for (const auto& [name, e] : table) allowed += (allowed.empty() ? "" : ", ") + name;
  throw ConfigError(path + ": '" + value + "' is not one of {" + allowed + "}");
}

const std::vector<std::pair<std::string, ModelKind>> kModelKinds{
    {"advection", ModelKind::advection}, {"burgers", ModelKind::burgers}, {"euler", ModelKind::euler}};
const std::vector<std::pair<std::string, LimiterMode>> kModes{
    {"target", LimiterMode::target},           {"low_order", LimiterMode::low_order},
    {"mcl", LimiterMode::mcl},                 {"mcl_entropy", LimiterMode::mcl_entropy},
    {"bv_entropy", LimiterMode::bv_entropy},   {"fixed_alpha", LimiterMode::fixed_alpha}};
const std::vector<std::pair<std::string, BoundStencil>> kStencils{
    {"nodal", BoundStencil::nodal}, {"nodal_plus_bar_states", BoundStencil::nodal_plus_bar_states}};
const std::vector<std::pair<std::string, TimeMethod>> kMethods{
    {"forward_euler", TimeMethod::forward_euler},
    {"ssp_rk2", TimeMethod::ssp_rk2},
    {"ssp_rk3", TimeMethod::ssp_rk3}};

void read_optional(Section& s, const std::string& key, std::optional<double>& out) {
  const YAML::Node n = s.take(key);
  if (n) out = Section::convert<double>(n, s.key_path(key));
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("syntax error at line " + std::to_string(e.mark.line + 1) + ", column " +
                      std::to_string(e.mark.column + 1) + ": " + e.msg);
  }
  if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  Section top(root, "");
  RunConfig cfg;

  // mesh first: the model dimension follows it.
  {
    Section s(top.take("mesh"), "mesh");
    s.read("dim", cfg.mesh.dim);
    s.read("cells", cfg.mesh.cells);
    if (const YAML::Node n = s.take("extent")) {
      const auto v = Section::numbers(n, "mesh.extent");
      if (static_cast<int>(v.size()) != cfg.mesh.dim)
        throw ConfigError("mesh.extent: expected " + std::to_string(cfg.mesh.dim) + " values");
      for (int k = 0; k < cfg.mesh.dim; ++k) cfg.mesh.extent[k] = v[k];
    }
    s.finish();
    if (cfg.mesh.dim != 1 && cfg.mesh.dim != 2) throw ConfigError("mesh.dim: must be 1 or 2");
    if (cfg.mesh.cells < 4) throw ConfigError("mesh.cells: must be >= 4");
    for (int k = 0; k < cfg.mesh.dim; ++k)
      if (!(cfg.mesh.extent[k] > 0.0)) throw ConfigError("mesh.extent: must be positive");
    if (cfg.mesh.dim == 1) cfg.mesh.extent[1] = 1.0;
  }
  {
    Section s(top.take("model"), "model");
    std::string kind = "advection";
    s.read("kind", kind);
    const ModelKind mk = parse_enum(kind, "model.kind", kModelKinds);
    cfg.model = mk == ModelKind::advection ? ModelSpec::advection(cfg.mesh.dim, {1.0, 1.0})
                : mk == ModelKind::burgers ? ModelSpec::burgers(cfg.mesh.dim)
                                           : ModelSpec::euler(cfg.mesh.dim);
    if (cfg.mesh.dim == 1) cfg.model.velocity = {1.0, 0.0};
    if (const YAML::Node n = s.take("velocity")) {
      if (mk != ModelKind::advection) throw ConfigError("model.velocity: only for advection");
      const auto v = Section::numbers(n, "model.velocity");
      if (static_cast<int>(v.size()) != cfg.mesh.dim)
        throw ConfigError("model.velocity: expected " + std::to_string(cfg.mesh.dim) + " values");
      for (int k = 0; k < cfg.mesh.dim; ++k) cfg.model.velocity[k] = v[k];
    }
    if (s.has("gamma") && mk != ModelKind::euler) throw ConfigError("model.gamma: only for euler");
    s.read("gamma", cfg.model.gamma);
    s.read("wave_speed_safety", cfg.model.wave_speed_safety);
    s.finish();
    cfg.model.validate();
  }
  {
    Section s(top.take("limiter"), "limiter");
    std::string mode = to_string(cfg.limiter.mode), stencil = to_string(cfg.limiter.bound_stencil);
    s.read("mode", mode);
    cfg.limiter.mode = parse_enum(mode, "limiter.mode", kModes);
    s.read("entropy_margin", cfg.limiter.entropy_margin);
    s.read("bound_stencil", stencil);
    cfg.limiter.bound_stencil = parse_enum(stencil, "limiter.bound_stencil", kStencils);
    s.read_bool("enforce_bounds", cfg.limiter.enforce_bounds);
    s.read("richardson_sweeps", cfg.limiter.richardson_sweeps);
    s.read("fixed_alpha", cfg.limiter.fixed_alpha);
    s.finish();
  }
  {
    Section s(top.take("integrator"), "integrator");
    auto& in = cfg.integrator;
    std::string method = to_string(in.method);
    s.read("method", method);
    in.method = parse_enum(method, "integrator.method", kMethods);
    s.read("cfl", in.cfl);
    s.read("t_end", in.t_end);
    if (const YAML::Node n = s.take("snapshots")) in.snapshot_times = Section::numbers(n, "integrator.snapshots");
    s.read("max_steps", in.max_steps);
    s.read_bool("stage_admissibility_check", in.stage_admissibility_check);
    s.read("max_dt", in.max_dt);
    s.read_bool("record_step_samples", in.record_step_samples);
    s.read("entropy_offset", in.entropy_offset);
    s.finish();
    if (!(in.cfl > 0.0 && in.cfl <= 1.0))
      throw ConfigError("integrator.cfl: " + std::to_string(in.cfl) + " outside (0, 1]");
    in.validate();
  }
  {
    const YAML::Node n = top.take("initial_condition");
    Section s(n, "initial_condition");
    s.read("name", cfg.initial_condition.name);
    auto defaults = initial_condition_defaults(cfg.initial_condition.name, cfg.model);
    if (n) {
      for (const auto& kv : n) {
        const std::string key = kv.first.as<std::string>();
        if (key == "name") continue;
        if (!defaults.count(key))
          throw ConfigError("unknown key 'initial_condition." + key + "' for '" +
                            cfg.initial_condition.name + "'" + at_line(kv.first));
        defaults[key] = Section::convert<double>(kv.second, "initial_condition." + key);
      }
    }
    cfg.initial_condition.params = defaults;
  }
  {
    Section s(top.take("admissibility"), "admissibility");
    auto& a = cfg.admissibility;
    s.read("rho_floor", a.rho_floor);
    s.read("pressure_floor", a.pressure_floor);
    s.read("energy_cap", a.energy_cap);
    s.read("scalar_min", a.scalar_min);
    s.read("scalar_max", a.scalar_max);
    s.finish();
    a.validate();
  }
  {
    Section s(top.take("output"), "output");
    s.read("directory", cfg.output.directory);
    s.read_bool("csv", cfg.output.csv);
    s.read_bool("vtk", cfg.output.vtk);
    s.read_bool("edges", cfg.output.edges);
    s.finish();
  }
  {
    Section s(top.take("assertions"), "assertions");
    auto& a = cfg.assertions;
    read_optional(s, "conservation", a.conservation);
    if (const YAML::Node n = s.take("bounds")) {
      a.bounds = Section::numbers(n, "assertions.bounds");
      if (a.bounds->size() != 2 || (*a.bounds)[0] > (*a.bounds)[1])
        throw ConfigError("assertions.bounds: expected [lo, hi] with lo <= hi");
    }
    read_optional(s, "entropy_decay", a.entropy_decay);
    read_optional(s, "entropy_residual", a.entropy_residual);
    s.read_bool("positivity", a.positivity);
    read_optional(s, "min_eoc_l1", a.min_eoc_l1);
    read_optional(s, "max_eoc_l1", a.max_eoc_l1);
    read_optional(s, "min_slope_r1", a.min_slope_r1);
    read_optional(s, "min_slope_r2", a.min_slope_r2);
    read_optional(s, "min_slope_r3", a.min_slope_r3);
    s.read_bool("cesaro_decreasing", a.cesaro_decreasing);
    s.finish();
  }
  {
    Section s(top.take("study"), "study");
    if (const YAML::Node n = s.take("levels")) {
      for (double v : Section::numbers(n, "study.levels")) {
        if (v < 4 || v != std::floor(v)) throw ConfigError("study.levels: integers >= 4 expected");
        cfg.study.levels.push_back(static_cast<int>(v));
      }
    }
    s.read("probe_points", cfg.study.probe_points);
    s.finish();
    if (cfg.study.probe_points < 1) throw ConfigError("study.probe_points: must be >= 1");
  }
  top.read("seed", cfg.seed);
  top.read("threads", cfg.threads);
  top.finish();
  if (cfg.threads < 1) throw ConfigError("threads: must be >= 1");
  cfg.limiter.threads = cfg.threads;
  cfg.limiter.validate();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  auto list = [&](const auto& values) {
    out << YAML::Flow << YAML::BeginSeq;
    for (const auto& v : values) out << v;
    out << YAML::EndSeq;
  };
  const int d = c.mesh.dim;
  out << YAML::BeginMap;
  out << YAML::Key << "mesh" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dim" << YAML::Value << d;
  out << YAML::Key << "cells" << YAML::Value << c.mesh.cells;
  out << YAML::Key << "extent" << YAML::Value;
  list(std::vector<double>(c.mesh.extent.begin(), c.mesh.extent.begin() + d));
  out << YAML::EndMap;

  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << to_string(c.model.kind);
  if (c.model.kind == ModelKind::advection) {
    out << YAML::Key << "velocity" << YAML::Value;
    list(std::vector<double>(c.model.velocity.begin(), c.model.velocity.begin() + d));
  }
  if (c.model.kind == ModelKind::euler) out << YAML::Key << "gamma" << YAML::Value << c.model.gamma;
  out << YAML::Key << "wave_speed_safety" << YAML::Value << c.model.wave_speed_safety;
  out << YAML::EndMap;

  out << YAML::Key << "limiter" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << to_string(c.limiter.mode);
  out << YAML::Key << "entropy_margin" << YAML::Value << c.limiter.entropy_margin;
  out << YAML::Key << "bound_stencil" << YAML::Value << to_string(c.limiter.bound_stencil);
  out << YAML::Key << "enforce_bounds" << YAML::Value << c.limiter.enforce_bounds;
  out << YAML::Key << "richardson_sweeps" << YAML::Value << c.limiter.richardson_sweeps;
  out << YAML::Key << "fixed_alpha" << YAML::Value << c.limiter.fixed_alpha;
  out << YAML::EndMap;

  const auto& in = c.integrator;
  out << YAML::Key << "integrator" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "method" << YAML::Value << to_string(in.method);
  out << YAML::Key << "cfl" << YAML::Value << in.cfl;
  out << YAML::Key << "t_end" << YAML::Value << in.t_end;
  out << YAML::Key << "snapshots" << YAML::Value;
  list(in.snapshot_times);
  out << YAML::Key << "max_steps" << YAML::Value << in.max_steps;
  out << YAML::Key << "stage_admissibility_check" << YAML::Value << in.stage_admissibility_check;
  out << YAML::Key << "max_dt" << YAML::Value << in.max_dt;
  out << YAML::Key << "record_step_samples" << YAML::Value << in.record_step_samples;
  out << YAML::Key << "entropy_offset" << YAML::Value << in.entropy_offset;
  out << YAML::EndMap;

  out << YAML::Key << "initial_condition" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.initial_condition.name;
  for (const auto& [k, v] : c.initial_condition.params) out << YAML::Key << k << YAML::Value << v;
  out << YAML::EndMap;

  const auto& a = c.admissibility;
  out << YAML::Key << "admissibility" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "rho_floor" << YAML::Value << a.rho_floor;
  out << YAML::Key << "pressure_floor" << YAML::Value << a.pressure_floor;
  out << YAML::Key << "energy_cap" << YAML::Value << a.energy_cap;
  out << YAML::Key << "scalar_min" << YAML::Value << a.scalar_min;
  out << YAML::Key << "scalar_max" << YAML::Value << a.scalar_max;
  out << YAML::EndMap;

  out << YAML::Key << "output" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "directory" << YAML::Value << YAML::DoubleQuoted << c.output.directory;
  out << YAML::Key << "csv" << YAML::Value << c.output.csv;
  out << YAML::Key << "vtk" << YAML::Value << c.output.vtk;
  out << YAML::Key << "edges" << YAML::Value << c.output.edges;
  out << YAML::EndMap;

  const auto& as = c.assertions;
  out << YAML::Key << "assertions" << YAML::Value << YAML::BeginMap;
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) out << YAML::Key << key << YAML::Value << *v;
  };
  opt("conservation", as.conservation);
  if (as.bounds) {
    out << YAML::Key << "bounds" << YAML::Value;
    list(*as.bounds);
  }
  opt("entropy_decay", as.entropy_decay);
  opt("entropy_residual", as.entropy_residual);
  out << YAML::Key << "positivity" << YAML::Value << as.positivity;
  opt("min_eoc_l1", as.min_eoc_l1);
  opt("max_eoc_l1", as.max_eoc_l1);
  opt("min_slope_r1", as.min_slope_r1);
  opt("min_slope_r2", as.min_slope_r2);
  opt("min_slope_r3", as.min_slope_r3);
  out << YAML::Key << "cesaro_decreasing" << YAML::Value << as.cesaro_decreasing;
  out << YAML::EndMap;

  out << YAML::Key << "study" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "levels" << YAML::Value;
  list(c.study.levels);
  out << YAML::Key << "probe_points" << YAML::Value << c.study.probe_points;
  out << YAML::EndMap;

  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "threads" << YAML::Value << c.threads;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace mclfem
