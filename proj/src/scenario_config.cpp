/*
 Copyright 2026 The ilqra Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

// JSON scenario configs. Schema (all angles in radians, distances in meters):
//
// {
//   "name": "...",
//   "system": {"dt": 0.1,
//              "subsystems": [{"type": "bicycle", "wheelbase": 4.0},
//                             {"type": "pedestrian", "speed_bound": 2.0}],
//              "allocation": [{"first_step": 0,
//                              "owners": [[[player, index], ...], ...]}]},
//   "players": [{"name": "ego", "control_dim": 2, "initial_control": [0, 0]}],
//   "margins": {"player_0": {"target": M, "failure": M}, ...},
//   "horizon": 80,
//   "initial_states": {"nominal": [...], "ring": {...}, "box": {...},
//                      "reject_failure": true},
//   "solver_overrides": {"subroutine": "tc", "max_iterations": 200, ...},
//   "initial_phases": [{"player": 1, "first_step": 14, "steps": 8,
//                       "control": [0.4, 0]}]
// }
//
// A margin M is {"kind": "target"|"failure", "name": "...", "expr": E} and an
// expression E is one of
//   {"type": "disk", "center": [x, y], "radius": r, "position": [ix, iy],
//    "sign": +1 | -1}
//   {"type": "halfplane", "normal": [nx, ny], "offset": c, "position": [..]}
//   {"type": "pairwise_distance", "first": [..], "second": [..],
//    "clearance": c}
//   {"type": "interval", "index": k, "lower": a, "upper": b}
//   {"type": "box", "lower": [x, y], "upper": [x, y], "position": [..]}
//   {"type": "quadratic", "M": [[..]], "a": [..], "b": c}
//   {"type": "time_table", "values": [..]}
//   {"type": "max" | "min", "terms": [E, ...]}
//   {"type": "negate", "term": E}
//   {"type": "time_window", "first_step": a, "last_step": b, "term": E}

#include "ilqra/scenarios.hpp"

#include <json.hpp>

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace ilqra {

using nlohmann::json;
namespace mn = margin_nodes;

namespace {

json vec_json(const Vec& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

json vec2_json(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }

Vec json_vec(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vec>(values.data(), static_cast<int>(values.size()));
}

Eigen::Vector2d json_vec2(const json& j) {
  const Vec v = json_vec(j);
  if (v.size() != 2) throw std::invalid_argument("expected a 2-vector");
  return v;
}

json pos_json(const PositionIndex& p) { return json::array({p.x, p.y}); }

PositionIndex json_pos(const json& j) {
  return {j.at(0).get<int>(), j.at(1).get<int>()};
}

json node_json(const mn::Node& node) {
  if (auto d = dynamic_cast<const mn::Disk*>(&node)) {
    return {{"type", "disk"}, {"center", vec2_json(d->center)},
            {"radius", d->radius}, {"position", pos_json(d->position)},
            {"sign", d->sign}};
  }
  if (auto h = dynamic_cast<const mn::HalfPlane*>(&node)) {
    return {{"type", "halfplane"}, {"normal", vec2_json(h->normal)},
            {"offset", h->offset}, {"position", pos_json(h->position)}};
  }
  if (auto p = dynamic_cast<const mn::PairwiseDistance*>(&node)) {
    return {{"type", "pairwise_distance"}, {"first", pos_json(p->first)},
            {"second", pos_json(p->second)}, {"clearance", p->clearance}};
  }
  if (auto i = dynamic_cast<const mn::Interval*>(&node)) {
    return {{"type", "interval"}, {"index", i->index}, {"lower", i->lower},
            {"upper", i->upper}};
  }
  if (auto b = dynamic_cast<const mn::Box*>(&node)) {
    return {{"type", "box"}, {"lower", vec2_json(b->lower)},
            {"upper", vec2_json(b->upper)}, {"position", pos_json(b->position)}};
  }
  if (auto q = dynamic_cast<const mn::Quadratic*>(&node)) {
    json rows = json::array();
    for (int r = 0; r < q->M.rows(); ++r) rows.push_back(vec_json(q->M.row(r).transpose()));
    return {{"type", "quadratic"}, {"M", rows}, {"a", vec_json(q->a)}, {"b", q->b}};
  }
  if (auto t = dynamic_cast<const mn::TimeTable*>(&node)) {
    return {{"type", "time_table"}, {"values", t->values}};
  }
  if (auto e = dynamic_cast<const mn::Extremum*>(&node)) {
    json terms = json::array();
    for (const auto& term : e->terms) terms.push_back(node_json(*term));
    return {{"type", e->is_max ? "max" : "min"}, {"terms", terms}};
  }
  if (auto n = dynamic_cast<const mn::Negate*>(&node)) {
    return {{"type", "negate"}, {"term", node_json(*n->term)}};
  }
  if (auto w = dynamic_cast<const mn::TimeWindow*>(&node)) {
    return {{"type", "time_window"}, {"first_step", w->first_step},
            {"last_step", w->last_step}, {"term", node_json(*w->term)}};
  }
  throw std::invalid_argument("margin node type cannot be serialized");
}

mn::NodePtr json_node(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "disk") {
    const double sign = j.value("sign", 1.0);
    if (sign != 1.0 && sign != -1.0)
      throw std::invalid_argument("disk sign must be +1 or -1");
    return std::make_shared<mn::Disk>(json_vec2(j.at("center")),
                                      j.at("radius").get<double>(),
                                      json_pos(j.at("position")), sign);
  }
  if (type == "halfplane")
    return halfplane_failure(json_vec2(j.at("normal")), j.at("offset").get<double>(),
                             json_pos(j.at("position")))
        .node();
  if (type == "pairwise_distance")
    return pairwise_distance_failure(json_pos(j.at("first")),
                                     json_pos(j.at("second")),
                                     j.at("clearance").get<double>())
        .node();
  if (type == "interval")
    return box_interval_failure(j.at("index").get<int>(),
                                j.at("lower").get<double>(),
                                j.at("upper").get<double>())
        .node();
  if (type == "box")
    return box_target(json_vec2(j.at("lower")), json_vec2(j.at("upper")),
                      json_pos(j.at("position")))
        .node();
  if (type == "quadratic") {
    const json& rows = j.at("M");
    const Vec a = json_vec(j.at("a"));
    Mat M(a.size(), a.size());
    if (static_cast<int>(rows.size()) != a.size())
      throw std::invalid_argument("quadratic margin: M must be square like a");
    for (int r = 0; r < a.size(); ++r) M.row(r) = json_vec(rows.at(r)).transpose();
    return quadratic_margin(M, a, j.value("b", 0.0), MarginKind::kTarget).node();
  }
  if (type == "time_table")
    return std::make_shared<mn::TimeTable>(j.at("values").get<std::vector<double>>());
  if (type == "max" || type == "min") {
    std::vector<mn::NodePtr> terms;
    for (const auto& t : j.at("terms")) terms.push_back(json_node(t));
    if (terms.empty()) throw std::invalid_argument(type + " needs terms");
    return std::make_shared<mn::Extremum>(std::move(terms), type == "max");
  }
  if (type == "negate") return std::make_shared<mn::Negate>(json_node(j.at("term")));
  if (type == "time_window")
    return std::make_shared<mn::TimeWindow>(
        json_node(j.at("term")), j.value("first_step", 0),
        j.value("last_step", std::numeric_limits<int>::max()));
  throw std::invalid_argument("unknown margin expression type '" + type + "'");
}

MarginKind kind_from_string(const std::string& s) {
  if (s == "target") return MarginKind::kTarget;
  if (s == "failure") return MarginKind::kFailure;
  throw std::invalid_argument("unknown margin kind '" + s + "'");
}

json margin_json(const MarginFn& m) {
  return {{"kind", to_string(m.kind())}, {"name", m.name()},
          {"expr", node_json(*m.node())}};
}

MarginFn json_margin(const json& j, MarginKind default_kind) {
  const MarginKind kind = j.contains("kind")
                              ? kind_from_string(j.at("kind").get<std::string>())
                              : default_kind;
  return {json_node(j.at("expr")), kind, j.value("name", std::string{})};
}

json system_json(const SystemSpec& system) {
  json subsystems = json::array();
  for (int s = 0; s < system.num_subsystems(); ++s) {
    const Subsystem& sub = system.subsystem(s);
    if (auto b = dynamic_cast<const Bicycle*>(&sub)) {
      subsystems.push_back({{"type", "bicycle"}, {"wheelbase", b->wheelbase()}});
    } else if (auto p = dynamic_cast<const Pedestrian*>(&sub)) {
      subsystems.push_back(
          {{"type", "pedestrian"}, {"speed_bound", p->speed_bound()}});
    } else {
      throw std::invalid_argument("subsystem type cannot be serialized");
    }
  }
  json allocation = json::array();
  for (const auto& phase : system.schedule()) {
    json owners = json::array();
    for (const auto& sub : phase.owners) {
      json inputs = json::array();
      for (const auto& o : sub) inputs.push_back(json::array({o.player, o.index}));
      owners.push_back(inputs);
    }
    allocation.push_back({{"first_step", phase.first_step}, {"owners", owners}});
  }
  return {{"dt", system.dt()}, {"subsystems", subsystems},
          {"allocation", allocation}};
}

SystemSpec json_system(const json& j, const std::vector<int>& control_dims) {
  std::vector<std::shared_ptr<const Subsystem>> subsystems;
  for (const auto& sub : j.at("subsystems")) {
    const std::string type = sub.at("type").get<std::string>();
    if (type == "bicycle") {
      subsystems.push_back(
          std::make_shared<Bicycle>(sub.value("wheelbase", kDefaultWheelbase)));
    } else if (type == "pedestrian") {
      subsystems.push_back(
          std::make_shared<Pedestrian>(sub.at("speed_bound").get<double>()));
    } else {
      throw std::invalid_argument("unknown subsystem type '" + type + "'");
    }
  }
  std::vector<AllocationPhase> schedule;
  if (j.contains("allocation")) {
    for (const auto& phase : j.at("allocation")) {
      AllocationPhase p;
      p.first_step = phase.value("first_step", 0);
      for (const auto& sub : phase.at("owners")) {
        std::vector<InputOwner> inputs;
        for (const auto& o : sub)
          inputs.push_back({o.at(0).get<int>(), o.at(1).get<int>()});
        p.owners.push_back(std::move(inputs));
      }
      schedule.push_back(std::move(p));
    }
  }
  return SystemSpec(j.value("dt", kDefaultTimeStep), std::move(subsystems),
                    control_dims, std::move(schedule));
}

json overrides_json(const SolverOverrides& o) {
  json j = json::object();
  if (o.subroutine) j["subroutine"] = to_string(*o.subroutine);
  if (o.control_weight) j["control_weight"] = *o.control_weight;
  if (o.max_iterations) j["max_iterations"] = *o.max_iterations;
  if (o.convergence_tolerance) j["convergence_tolerance"] = *o.convergence_tolerance;
  if (o.initial_step) j["initial_step"] = *o.initial_step;
  if (o.step_shrink) j["step_shrink"] = *o.step_shrink;
  if (o.max_backtracks) j["max_backtracks"] = *o.max_backtracks;
  if (o.hessian_regularization) j["hessian_regularization"] = *o.hessian_regularization;
  if (o.early_stop) j["early_stop"] = *o.early_stop;
  return j;
}

SolverOverrides json_overrides(const json& j) {
  SolverOverrides o;
  if (j.contains("subroutine"))
    o.subroutine = subroutine_from_string(j.at("subroutine").get<std::string>());
  if (j.contains("control_weight")) o.control_weight = j.at("control_weight").get<double>();
  if (j.contains("max_iterations")) o.max_iterations = j.at("max_iterations").get<int>();
  if (j.contains("convergence_tolerance"))
    o.convergence_tolerance = j.at("convergence_tolerance").get<double>();
  if (j.contains("initial_step")) o.initial_step = j.at("initial_step").get<double>();
  if (j.contains("step_shrink")) o.step_shrink = j.at("step_shrink").get<double>();
  if (j.contains("max_backtracks")) o.max_backtracks = j.at("max_backtracks").get<int>();
  if (j.contains("hessian_regularization"))
    o.hessian_regularization = j.at("hessian_regularization").get<double>();
  if (j.contains("early_stop")) o.early_stop = j.at("early_stop").get<bool>();
  return o;
}

}  // namespace

std::string scenario_to_json(const Scenario& s, int indent) {
  json players = json::array();
  json margins = json::object();
  for (int i = 0; i < s.num_players(); ++i) {
    json p = {{"name", i < static_cast<int>(s.player_names.size())
                           ? s.player_names[i]
                           : "player_" + std::to_string(i)},
              {"control_dim", s.system.control_dim(i)}};
    if (i < static_cast<int>(s.initial_controls.size()))
      p["initial_control"] = vec_json(s.initial_controls[i]);
    players.push_back(p);
    margins["player_" + std::to_string(i)] = {
        {"target", margin_json(s.objectives[i].target)},
        {"failure", margin_json(s.objectives[i].failure)}};
  }

  json initial = {{"nominal", vec_json(s.initial.nominal)},
                  {"reject_failure", s.initial.reject_failure},
                  {"max_attempts", s.initial.max_attempts}};
  if (s.initial.ring) {
    const RingSampler& r = *s.initial.ring;
    initial["ring"] = {{"center", vec2_json(r.center)},
                       {"min_radius", r.min_radius},
                       {"max_radius", r.max_radius},
                       {"heading_spread", r.heading_spread},
                       {"speed", r.speed},
                       {"offset", r.offset}};
  }
  if (s.initial.box) {
    initial["box"] = {{"lower", vec_json(s.initial.box->lower)},
                      {"upper", vec_json(s.initial.box->upper)}};
  }

  json j = {{"name", s.name},
            {"system", system_json(s.system)},
            {"players", players},
            {"margins", margins},
            {"horizon", s.horizon},
            {"initial_states", initial},
            {"solver_overrides", overrides_json(s.solver_overrides)}};
  if (!s.initial_phases.empty()) {
    json phases = json::array();
    for (const auto& ph : s.initial_phases)
      phases.push_back({{"player", ph.player},
                        {"first_step", ph.first_step},
                        {"steps", ph.steps},
                        {"control", vec_json(ph.control)}});
    j["initial_phases"] = phases;
  }
  return j.dump(indent);
}

Scenario scenario_from_json(const std::string& text) {
  const json j = json::parse(text);

  std::vector<int> control_dims;
  std::vector<std::string> names;
  PerPlayer<Vec> initial_controls;
  for (const auto& p : j.at("players")) {
    const int m = p.at("control_dim").get<int>();
    control_dims.push_back(m);
    names.push_back(p.value("name", "player_" + std::to_string(names.size())));
    initial_controls.push_back(p.contains("initial_control")
                                   ? json_vec(p.at("initial_control"))
                                   : Vec::Zero(m));
  }

  Scenario s{j.value("name", std::string("custom")),
             json_system(j.at("system"), control_dims),
             names,
             {},
             j.at("horizon").get<int>(),
             {},
             initial_controls,
             {},
             {}};

  const json& margins = j.at("margins");
  for (int i = 0; i < s.num_players(); ++i) {
    const std::string key = "player_" + std::to_string(i);
    if (!margins.contains(key))
      throw std::invalid_argument("margins section lacks " + key);
    s.objectives.push_back(
        {json_margin(margins.at(key).at("target"), MarginKind::kTarget),
         json_margin(margins.at(key).at("failure"), MarginKind::kFailure)});
  }

  const json& init = j.at("initial_states");
  s.initial.nominal = json_vec(init.at("nominal"));
  s.initial.reject_failure = init.value("reject_failure", true);
  s.initial.max_attempts = init.value("max_attempts", 10000);
  if (init.contains("ring")) {
    const json& r = init.at("ring");
    s.initial.ring = RingSampler{json_vec2(r.at("center")),
                                 r.at("min_radius").get<double>(),
                                 r.at("max_radius").get<double>(),
                                 r.value("heading_spread", 0.0),
                                 r.value("speed", 0.0),
                                 r.value("offset", 0)};
  }
  if (init.contains("box")) {
    s.initial.box = BoxSampler{json_vec(init.at("box").at("lower")),
                               json_vec(init.at("box").at("upper"))};
  }
  if (j.contains("solver_overrides"))
    s.solver_overrides = json_overrides(j.at("solver_overrides"));
  if (j.contains("initial_phases")) {
    for (const auto& ph : j.at("initial_phases"))
      s.initial_phases.push_back({ph.at("player").get<int>(),
                                  ph.at("first_step").get<int>(),
                                  ph.at("steps").get<int>(),
                                  json_vec(ph.at("control"))});
  }
  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return scenario_from_json(buffer.str());
  } catch (const std::exception& e) {
    throw std::runtime_error("invalid scenario config '" + path + "': " + e.what());
  }
}

Scenario resolve_scenario(const std::string& id_or_path) {
  if (id_or_path.find(".json") != std::string::npos ||
      id_or_path.find('/') != std::string::npos)
    return load_scenario_file(id_or_path);
  return builtin_scenario(id_or_path);
}

}  // namespace ilqra
