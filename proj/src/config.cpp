#include "nehari/config.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace nehari {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    size_t pos;
    double x = std::stod(v, &pos);
    if (trim(v.substr(pos)).empty()) return x;
  } catch (...) {
  }
  throw std::runtime_error("config: bad number for " + key + ": '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  double x = to_double(key, v);
  int i = static_cast<int>(x);
  if (i != x) throw std::runtime_error("config: integer expected for " + key);
  return i;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::runtime_error("config: boolean expected for " + key);
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw std::runtime_error("config: empty list for " + key);
  return out;
}

// "row_3" -> 3; throws otherwise.
int row_index(const std::string& key, const std::string& tail) {
  if (tail.rfind("row_", 0) != 0)
    throw std::runtime_error("config: unknown key " + key);
  return to_int(key, tail.substr(4));
}

SweepEntry parse_sweep_target(const std::string& key, const std::string& v) {
  SweepEntry e;
  std::stringstream ss(v);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(ss, part, '.')) parts.push_back(trim(part));
  if (parts.size() == 2 && parts[0] == "lambda") {
    e.target = SweepEntry::Target::Lambda;
    e.i = to_int(key, parts[1]) - 1;
    return e;
  }
  if (parts.size() == 3 && parts[0] == "beta") {
    e.target = SweepEntry::Target::Beta;
    e.i = to_int(key, parts[1]) - 1;
    e.j = to_int(key, parts[2]) - 1;
    return e;
  }
  throw std::runtime_error("config: sweep parameter must be beta.i.j or lambda.i, got '" +
                           v + "'");
}

}  // namespace

RunConfig parse_config(std::istream& in) {
  RunConfig c;
  std::map<int, std::vector<double>> beta_rows;
  std::map<int, SweepEntry> sweep_params;
  std::map<int, std::vector<double>> sweep_values;
  std::vector<int> dec_a;
  bool have_a = false;
  int d = 0;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: line " + std::to_string(lineno) +
                               ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw std::runtime_error("config: line " + std::to_string(lineno) +
                               ": empty key or value");

    if (key == "domain.kind") c.kind = grid_kind_from_string(val);
    else if (key == "domain.n") c.n = to_int(key, val);
    else if (key == "domain.side") c.side = to_double(key, val);
    else if (key == "domain.centered") c.centered = to_bool(key, val);
    else if (key == "domain.radius") c.radius = to_double(key, val);
    else if (key == "domain.r_in") c.r_in = to_double(key, val);
    else if (key == "domain.r_out") c.r_out = to_double(key, val);
    else if (key == "domain.space_dim") c.space_dim = to_int(key, val);
    else if (key == "domain.r_max") c.r_max = to_double(key, val);
    else if (key == "system.d") d = to_int(key, val);
    else if (key == "system.lambda") c.spec.lambda = to_list(key, val);
    else if (key.rfind("system.beta.", 0) == 0)
      beta_rows[row_index(key, key.substr(12))] = to_list(key, val);
    else if (key == "decomposition.a") {
      for (double x : to_list(key, val)) {
        int i = static_cast<int>(x);
        if (i != x) throw std::runtime_error("config: decomposition.a must be integers");
        dec_a.push_back(i);
      }
      have_a = true;
    } else if (key == "solver.max_iter") c.solver.max_iter = to_int(key, val);
    else if (key == "solver.tol_grad") c.solver.tol_grad = to_double(key, val);
    else if (key == "solver.tol_energy") c.solver.tol_energy = to_double(key, val);
    else if (key == "solver.step") c.solver.step = val == "auto" ? 0.0 : to_double(key, val);
    else if (key == "solver.precondition") c.solver.precondition = to_bool(key, val);
    else if (key == "solver.seed") c.solver.seed = to_int(key, val);
    else if (key == "solver.init") {
      if (val == "bumps") c.solver.init = InitKind::Bumps;
      else if (val == "groupSeparatedBumps") c.solver.init = InitKind::GroupSeparatedBumps;
      else if (val == "fromFile") c.solver.init = InitKind::FromField;
      else throw std::runtime_error("config: unknown init '" + val + "'");
    } else if (key == "solver.init_file") c.init_file = val;
    else if (key == "task.theorem") c.theorem = val;
    else if (key == "task.alpha") c.alpha = to_double(key, val);
    else if (key == "task.macro_split") c.macro_split = to_int(key, val);
    else if (key == "task.radii") c.radii = to_list(key, val);
    else if (key == "task.beta_fraction") c.beta_fraction = to_double(key, val);
    else if (key == "task.planar_n") c.planar_n = to_int(key, val);
    else if (key == "task.planar_side") c.planar_side = to_double(key, val);
    else if (key == "task.radial_n") c.radial_n = to_int(key, val);
    else if (key.rfind("sweep.param_", 0) == 0)
      sweep_params[to_int(key, key.substr(12))] = parse_sweep_target(key, val);
    else if (key.rfind("sweep.values_", 0) == 0)
      sweep_values[to_int(key, key.substr(13))] = to_list(key, val);
    else
      throw std::runtime_error("config: unknown key " + key);
  }

  if (d < 1) throw std::runtime_error("config: system.d missing");
  if (d > 16) throw std::runtime_error("config: d <= 16 required");
  c.spec.d = d;
  if (static_cast<int>(c.spec.lambda.size()) != d)
    throw std::runtime_error("config: system.lambda must have d entries");
  c.spec.beta.assign(d, std::vector<double>(d, 0.0));
  for (int i = 1; i <= d; ++i) {
    auto it = beta_rows.find(i);
    if (it == beta_rows.end())
      throw std::runtime_error("config: system.beta.row_" + std::to_string(i) + " missing");
    if (static_cast<int>(it->second.size()) != d)
      throw std::runtime_error("config: beta row " + std::to_string(i) +
                               " must have d entries");
    c.spec.beta[i - 1] = it->second;
  }
  if (static_cast<int>(beta_rows.size()) != d)
    throw std::runtime_error("config: unexpected beta rows");
  c.spec.validate();

  if (!have_a) dec_a = {0, d};
  c.dec = Decomposition::make(dec_a);
  if (c.dec.d() != d) throw std::runtime_error("config: decomposition.a must end at d");

  if (c.macro_split == 0) c.macro_split = d;
  if (c.macro_split < 1 || c.macro_split > d)
    throw std::runtime_error("config: task.macro_split out of range");
  if (c.solver.init == InitKind::FromField && c.init_file.empty())
    throw std::runtime_error("config: solver.init_file missing for init = fromFile");
  if (c.solver.max_iter < 1 || !(c.solver.tol_grad > 0.0) || !(c.solver.tol_energy > 0.0))
    throw std::runtime_error("config: solver tolerances/max_iter invalid");

  for (auto& [k, e] : sweep_params) {
    auto it = sweep_values.find(k);
    if (it == sweep_values.end())
      throw std::runtime_error("config: sweep.values_" + std::to_string(k) + " missing");
    if (e.i < 0 || e.i >= d || e.j < 0 || e.j >= d)
      throw std::runtime_error("config: sweep parameter index out of range");
    e.values = it->second;
    c.sweep_entries.push_back(e);
  }
  if (sweep_values.size() != sweep_params.size())
    throw std::runtime_error("config: sweep values without matching parameter");

  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  return parse_config(in);
}

Grid RunConfig::make_grid() const {
  switch (kind) {
    case GridKind::Rectangle2D:
      if (side <= 0.0 || n < 3) throw std::runtime_error("config: domain.side/n invalid");
      return Grid::square(side, n, centered);
    case GridKind::Disk2D:
      if (radius <= 0.0 || n < 5) throw std::runtime_error("config: domain.radius/n invalid");
      return Grid::disk(radius, n);
    case GridKind::Annulus2D:
      if (!(0 < r_in && r_in < r_out) || n < 5)
        throw std::runtime_error("config: domain.r_in/r_out/n invalid");
      return Grid::annulus(r_in, r_out, n);
    case GridKind::RadialLine:
      return make_radial_grid();
  }
  throw std::runtime_error("config: bad grid kind");
}

Grid RunConfig::make_radial_grid() const {
  double rm = r_max > 0.0 ? r_max : default_r_max(spec);
  int nn = kind == GridKind::RadialLine && n >= 3 ? n : radial_n;
  return Grid::radial_line(space_dim, rm, nn);
}

}  // namespace nehari
