#pragma once

#include <filesystem>
#include <string>

#include "slwave/constitutive.hpp"
#include "slwave/fe_space.hpp"
#include "slwave/integrator.hpp"
#include "slwave/verification.hpp"

namespace slwave {

/// Resolved settings of one run. Read from JSON with sections
/// material, mesh, time, drive, newton, output; missing keys take the defaults below.
struct ScenarioConfig {
  MaterialParams material{1.0, 0.0, 1.5, 1e-8};

  struct Mesh {
    double L = 1.0;
    int n_cells = 200;
    DegreePolicy degree_policy = DegreePolicy::uniform(1);
  } mesh;

  struct Time {
    double dt = 1e-3;
    double t_final = 1.0;
    double alpha = -0.05;
    InitialAcceleration initial_acceleration = InitialAcceleration::solve;
  } time;

  BoundaryDrive drive{0.02, 6.283185307179586};
  NewtonSettings newton;

  struct Output {
    double snapshot_interval = 0.1;  ///< <= 0 writes only t = 0 and t_final
    int samples = 256;
    std::string directory = "out";
    bool space_time = false;  ///< also write spacetime.csv
  } output;

  /// Re-checks every numeric bound; throws ConfigError naming the key.
  void validate() const;
};

/// Parses JSON config text. A run manifest (object with a "config" member) is also
/// accepted so that runs can be repeated from their manifest. Throws ConfigError with
/// line/column for syntax errors and the key name for unknown or invalid entries.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Fully resolved config as pretty-printed JSON (round-trips through parse_config).
std::string config_to_json(const ScenarioConfig& config);

SimulationSetup to_setup(const ScenarioConfig& config);

/// MMS study settings: the Table-style defaults of StudyConfig, overridden by the
/// material, time.alpha, time.t_final, newton and study sections of the JSON text.
StudyConfig parse_study_config(const std::string& text);

}  // namespace slwave
