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

#include "ilqra/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ilqra {

using json = nlohmann::json;

namespace {

json vec_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v[k]);
  return out;
}

Vec json_vec(const json& j) {
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (size_t k = 0; k < j.size(); ++k)
    v[static_cast<Eigen::Index>(k)] =
        j[k].is_null() ? std::nan("") : j[k].get<double>();
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    if (s == "nan") return std::nan("");
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    throw std::invalid_argument("bad number '" + s + "'");
  }
  return x;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string trajectory_to_json(const Trajectory& traj, int indent) {
  json states = json::array();
  for (const auto& x : traj.states) states.push_back(vec_json(x));
  json controls = json::object();
  for (int i = 0; i < traj.num_players(); ++i) {
    json ui = json::array();
    for (const auto& u : traj.controls[i]) ui.push_back(vec_json(u));
    controls["player_" + std::to_string(i)] = ui;
  }
  return json{{"dt", traj.dt}, {"states", states}, {"controls", controls}}
      .dump(indent);
}

Trajectory trajectory_from_json(const std::string& text) {
  const json j = json::parse(text);
  Trajectory traj;
  traj.dt = j.at("dt").get<double>();
  for (const auto& x : j.at("states")) traj.states.push_back(json_vec(x));
  const json& controls = j.at("controls");
  for (size_t i = 0; i < controls.size(); ++i) {
    const std::string key = "player_" + std::to_string(i);
    if (!controls.contains(key))
      throw std::invalid_argument("controls section lacks " + key);
    TimeSeries<Vec> ui;
    for (const auto& u : controls.at(key)) ui.push_back(json_vec(u));
    traj.controls.push_back(std::move(ui));
  }
  if (!traj.is_well_formed())
    throw DimensionError("trajectory lengths or dimensions are inconsistent");
  return traj;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::ostringstream out;
  const int n = traj.state_dim();
  const int T = traj.horizon();
  out << "step,time";
  for (int k = 0; k < n; ++k) out << ",x_" << k;
  for (int i = 0; i < traj.num_players(); ++i) {
    const int m = traj.controls[i].empty()
                      ? 0
                      : static_cast<int>(traj.controls[i].front().size());
    for (int k = 0; k < m; ++k) out << ",u" << i << "_" << k;
  }
  out << "\n";
  for (int t = 0; t <= T; ++t) {
    out << t << "," << format_double(t * traj.dt);
    for (int k = 0; k < n; ++k) out << "," << format_double(traj.states[t][k]);
    for (int i = 0; i < traj.num_players(); ++i) {
      const int m = traj.controls[i].empty()
                        ? 0
                        : static_cast<int>(traj.controls[i].front().size());
      for (int k = 0; k < m; ++k) {
        out << ",";
        if (t < T) out << format_double(traj.controls[i][t][k]);
      }
    }
    out << "\n";
  }
  return out.str();
}

Trajectory trajectory_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
  const auto header = split(line, ',');
  if (header.size() < 2 || header[0] != "step" || header[1] != "time")
    throw std::invalid_argument("CSV header must start with step,time");

  int n = 0;
  std::vector<int> dims;  // controls per player, in column order
  for (size_t c = 2; c < header.size(); ++c) {
    const std::string& h = header[c];
    if (h.rfind("x_", 0) == 0) {
      ++n;
    } else if (!h.empty() && h[0] == 'u') {
      const int player = std::stoi(h.substr(1, h.find('_') - 1));
      if (player >= static_cast<int>(dims.size())) dims.resize(player + 1, 0);
      ++dims[player];
    } else {
      throw std::invalid_argument("unknown CSV column '" + h + "'");
    }
  }

  Trajectory traj;
  traj.controls.resize(dims.size());
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line))
    if (!line.empty()) rows.push_back(split(line, ','));
  for (size_t r = 0; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    if (cells.size() != header.size())
      throw std::invalid_argument("CSV row " + std::to_string(r + 1) +
                                  " has the wrong number of cells");
    Vec x(n);
    for (int k = 0; k < n; ++k) x[k] = parse_double(cells[2 + k]);
    traj.states.push_back(x);
    if (r + 1 == rows.size()) break;
    size_t c = 2 + n;
    for (size_t i = 0; i < dims.size(); ++i) {
      Vec u(dims[i]);
      for (int k = 0; k < dims[i]; ++k) u[k] = parse_double(cells[c++]);
      traj.controls[i].push_back(u);
    }
  }
  if (rows.size() >= 2)
    traj.dt = parse_double(rows[1][1]) - parse_double(rows[0][1]);
  if (!traj.is_well_formed())
    throw DimensionError("trajectory lengths or dimensions are inconsistent");
  return traj;
}

std::string iteration_log_jsonl(const std::vector<IterationRecord>& log) {
  std::string out;
  for (const auto& rec : log) {
    json critical = json::object();
    for (size_t i = 0; i < rec.critical.size(); ++i) {
      json times = json::array();
      for (const auto& c : rec.critical[i])
        times.push_back({{"time", c.time}, {"kind", to_string(c.kind)}});
      critical["player_" + std::to_string(i)] = times;
    }
    json line = {{"iter", rec.iteration},
                 {"objectives", rec.objectives},
                 {"alpha", rec.alpha},
                 {"max_deviation", rec.max_deviation},
                 {"critical", critical}};
    out += line.dump();
    out += "\n";
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("error writing '" + path + "'");
}

void save_trajectory(const std::string& path, const Trajectory& traj) {
  write_text_file(path, ends_with(path, ".csv") ? trajectory_to_csv(traj)
                                                : trajectory_to_json(traj));
}

Trajectory load_trajectory(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return ends_with(path, ".csv") ? trajectory_from_csv(text)
                                   : trajectory_from_json(text);
  } catch (const std::exception& e) {
    throw std::runtime_error("'" + path + "': " + e.what());
  }
}

}  // namespace ilqra
