#include "slwave/config.hpp"

#include <cmath>
#include <fstream>
#include "json.hpp"
#include <set>
#include <sstream>

#include "slwave/errors.hpp"

namespace slwave {

using nlohmann::json;

namespace {

// Reads keys of one JSON section, rejecting anything not consumed.
class Section {
 public:
  Section(const json& root, std::string name) : name_(std::move(name)) {
    if (!root.contains(name_)) return;
    node_ = &root.at(name_);
    if (!node_->is_object()) throw ConfigError("section '" + name_ + "' must be an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!node_ || !node_->contains(key)) return;
    try {
      out = node_->at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("key '" + name_ + "." + key + "' has the wrong type");
    }
  }

  void finish() const {
    if (!node_) return;
    for (const auto& [key, value] : node_->items())
      if (!seen_.count(key)) throw ConfigError("unknown key '" + name_ + "." + key + "'");
  }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
};

json parse_json(const std::string& text) {
  try {
    return json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
}

const json& config_root(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (doc.contains("config") && doc.at("config").is_object()) return doc.at("config");
  return doc;
}

void check_sections(const json& root, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : root.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown section '" + key + "'");
  }
}

void read_material(const json& root, MaterialParams& m) {
  Section s(root, "material");
  s.read("rho", m.rho);
  s.read("b", m.b);
  s.read("a", m.a);
  s.read("reg_eta", m.reg_eta);
  s.finish();
}

void read_newton(const json& root, NewtonSettings& n) {
  Section s(root, "newton");
  s.read("tol", n.tol);
  s.read("abs_floor", n.abs_floor);
  s.read("roundoff_factor", n.roundoff_factor);
  s.read("k_max", n.k_max);
  s.finish();
}

// Rethrows bound violations from the owning modules as ConfigError.
template <typename Fn>
void revalidate(Fn&& fn) {
  try {
    fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
}

}  // namespace

void ScenarioConfig::validate() const {
  revalidate([&] {
    material.validate();
    HhtParams(time.alpha, time.dt);
    newton.validate();
  });
  auto fail = [](const std::string& msg) { throw ConfigError("invalid config: " + msg); };
  if (!(mesh.L > 0.0)) fail("mesh.L must be > 0");
  if (mesh.n_cells < 2) fail("mesh.n_cells must be >= 2");
  if (!(time.t_final > 0.0)) fail("time.t_final must be > 0");
  if (!std::isfinite(drive.amplitude)) fail("drive.A must be finite");
  if (!std::isfinite(drive.omega)) fail("drive.omega must be finite");
  if (output.samples < 1) fail("output.samples must be >= 1");
  if (output.directory.empty()) fail("output.directory must not be empty");
}

ScenarioConfig parse_config(const std::string& text) {
  const json doc = parse_json(text);
  const json& root = config_root(doc);
  check_sections(root, {"material", "mesh", "time", "drive", "newton", "output"});

  ScenarioConfig cfg;
  read_material(root, cfg.material);

  {
    Section s(root, "mesh");
    std::string policy = cfg.mesh.degree_policy.to_string();
    s.read("L", cfg.mesh.L);
    s.read("n_cells", cfg.mesh.n_cells);
    s.read("degree_policy", policy);
    s.finish();
    revalidate([&] { cfg.mesh.degree_policy = DegreePolicy::parse(policy); });
  }
  {
    Section s(root, "time");
    std::string init = "solve";
    s.read("dt", cfg.time.dt);
    s.read("t_final", cfg.time.t_final);
    s.read("alpha", cfg.time.alpha);
    s.read("initial_acceleration", init);
    s.finish();
    if (init == "solve") cfg.time.initial_acceleration = InitialAcceleration::solve;
    else if (init == "zero") cfg.time.initial_acceleration = InitialAcceleration::zero;
    else throw ConfigError("time.initial_acceleration must be 'solve' or 'zero'");
  }
  {
    Section s(root, "drive");
    s.read("A", cfg.drive.amplitude);
    s.read("omega", cfg.drive.omega);
    s.finish();
  }
  read_newton(root, cfg.newton);
  {
    Section s(root, "output");
    s.read("snapshot_interval", cfg.output.snapshot_interval);
    s.read("samples", cfg.output.samples);
    s.read("directory", cfg.output.directory);
    s.read("space_time", cfg.output.space_time);
    s.finish();
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_to_json(const ScenarioConfig& c) {
  json j;
  j["material"] = {{"rho", c.material.rho}, {"b", c.material.b}, {"a", c.material.a},
                   {"reg_eta", c.material.reg_eta}};
  j["mesh"] = {{"L", c.mesh.L}, {"n_cells", c.mesh.n_cells},
               {"degree_policy", c.mesh.degree_policy.to_string()}};
  j["time"] = {{"dt", c.time.dt},
               {"t_final", c.time.t_final},
               {"alpha", c.time.alpha},
               {"initial_acceleration",
                c.time.initial_acceleration == InitialAcceleration::solve ? "solve" : "zero"}};
  j["drive"] = {{"A", c.drive.amplitude}, {"omega", c.drive.omega}};
  j["newton"] = {{"tol", c.newton.tol},
                 {"abs_floor", c.newton.abs_floor},
                 {"roundoff_factor", c.newton.roundoff_factor},
                 {"k_max", c.newton.k_max}};
  j["output"] = {{"snapshot_interval", c.output.snapshot_interval},
                 {"samples", c.output.samples},
                 {"directory", c.output.directory},
                 {"space_time", c.output.space_time}};
  return j.dump(2);
}

SimulationSetup to_setup(const ScenarioConfig& c) {
  SimulationSetup s;
  s.material = c.material;
  s.length = c.mesh.L;
  s.n_cells = c.mesh.n_cells;
  s.degree_policy = c.mesh.degree_policy;
  s.dt = c.time.dt;
  s.t_final = c.time.t_final;
  s.alpha = c.time.alpha;
  s.initial_acceleration = c.time.initial_acceleration;
  s.drive = c.drive;
  s.newton = c.newton;
  s.output_interval = c.output.snapshot_interval;
  return s;
}

StudyConfig parse_study_config(const std::string& text) {
  StudyConfig cfg;
  if (text.empty()) return cfg;
  const json doc = parse_json(text);
  const json& root = config_root(doc);
  check_sections(root, {"material", "time", "newton", "study"});

  read_material(root, cfg.material);
  {
    Section s(root, "time");
    s.read("alpha", cfg.alpha);
    s.read("t_final", cfg.t_final);
    s.finish();
  }
  read_newton(root, cfg.newton);
  {
    Section s(root, "study");
    s.read("spatial_cells", cfg.spatial_cells);
    s.read("spatial_dt", cfg.spatial_dt);
    s.read("temporal_dts", cfg.temporal_dts);
    s.read("temporal_cells", cfg.temporal_cells);
    s.finish();
  }
  revalidate([&] {
    cfg.material.validate();
    cfg.newton.validate();
    HhtParams(cfg.alpha, cfg.spatial_dt);
    for (double dt : cfg.temporal_dts) HhtParams(cfg.alpha, dt);
  });
  if (!(cfg.t_final > 0.0)) throw ConfigError("invalid config: time.t_final must be > 0");
  if (cfg.temporal_cells < 2) throw ConfigError("invalid config: study.temporal_cells must be >= 2");
  for (int n : cfg.spatial_cells)
    if (n < 2) throw ConfigError("invalid config: study.spatial_cells entries must be >= 2");
  return cfg;
}

}  // namespace slwave
