#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hetfront/dde.hpp"
#include "hetfront/pde.hpp"

namespace hetfront {

/// JSON forms of the run configurations. The apply_* functions overwrite
/// only the keys present in the document (config-over-flags merging); the
/// *_from_json functions start from defaults.

nlohmann::json to_json(const ModelParams& p);
nlohmann::json to_json(const HeterogeneitySpec& f);
nlohmann::json to_json(const DdeConfig& cfg);
nlohmann::json to_json(const PdeConfig& cfg);

ModelParams params_from_json(const nlohmann::json& j);
HeterogeneitySpec heterogeneity_from_json(const nlohmann::json& j);

void apply_json(const nlohmann::json& j, ModelParams& p);
void apply_json(const nlohmann::json& j, DdeConfig& cfg);
void apply_json(const nlohmann::json& j, PdeConfig& cfg);

nlohmann::json load_json_file(const std::string& path);

/// Parameter bundle for one of the bundled experiments (ex0..ex3, fig1):
/// model constants, heterogeneities, the canonical initial front data and
/// ready-to-run solver configurations.
struct ExamplePreset {
    std::string id;
    ModelParams params;
    HeterogeneitySpec f1;
    HeterogeneitySpec f2;
    double z0 = 0.0;          // initial front position
    double c0 = 0.0;          // pre-history slope for the delay model
    double s_end = 10.0;      // default horizon
    double default_eps = 0.1; // default interface width for the full system
    DdeConfig dde;            // Algorithm 1 settings
    PdeConfig pde;            // at eps = default_eps
};

ExamplePreset example_preset(const std::string& id);
const std::vector<std::string>& example_ids();

} // namespace hetfront
