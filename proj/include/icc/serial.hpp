#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "icc/automaton.hpp"
#include "icc/certificate.hpp"
#include "icc/checker.hpp"
#include "icc/system.hpp"

namespace icc {

using nlohmann::json;

json poly_to_json(const Polynomial& p);
Polynomial poly_from_json(const json& j, int arity);

json box_to_json(const Box& b);
Box box_from_json(const json& j);

Nba nba_from_json(const json& j);
json nba_to_json(const Nba& nba);

json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const json& j);

// A full project configuration: system, specification kind, labeling/NBA
// for omega-regular specs, hyperparameters, template and epsilon.
struct ProjectConfig {
  int schema = 1;
  std::string name;
  System system;
  SpecKind kind = SpecKind::safety;
  std::optional<LabelingMap> labeling;
  std::optional<Nba> nba;
  Hyperparameters hp;
  int template_k = 0;
  int template_degree = 2;
  double epsilon = 0.1;
};

ProjectConfig config_from_json(const json& j, const std::string& base_dir);
ProjectConfig load_config(const std::string& path);

json report_to_json(const CheckReport& report);

json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

}  // namespace icc
