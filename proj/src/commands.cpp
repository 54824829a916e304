#include "nehari/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "nehari/config.hpp"
#include "nehari/io.hpp"
#include "nehari/symmetry.hpp"

namespace nehari {

namespace {

namespace fs = std::filesystem;

int config_error(const std::exception& ex) {
  std::cerr << "error: " << ex.what() << "\n";
  return 1;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

Theorem config_theorem(const RunConfig& c) {
  return c.theorem.empty() ? Theorem::Existence : theorem_from_string(c.theorem);
}

// Loads the initial field when init = fromFile; keeps the dump alive via the
// returned Field.
std::optional<Field> load_init(const RunConfig& c, const Grid& g) {
  if (c.solver.init != InitKind::FromField) return std::nullopt;
  return field_from_dump(g, c.spec, read_field_dump(c.init_file));
}

void append_result_kv(std::vector<std::pair<std::string, std::string>>& kv,
                      const SolveResult& r, const RegimeVerdict& rv) {
  kv.emplace_back("energy", format_g17(r.energy));
  kv.emplace_back("gradResidual", format_g17(r.grad_residual));
  kv.emplace_back("iterations", std::to_string(r.iterations));
  kv.emplace_back("converged", r.converged ? "true" : "false");
  kv.emplace_back("semiTrivial", r.semi_trivial ? "true" : "false");
  kv.emplace_back("groupRestarts", std::to_string(r.group_restarts));
  for (size_t h = 0; h < r.nehari_residual.size(); ++h)
    kv.emplace_back("G_" + std::to_string(h + 1), format_g17(r.nehari_residual[h]));
  for (size_t i = 0; i < r.component_l4.size(); ++i)
    kv.emplace_back("l4_" + std::to_string(i + 1), format_g17(r.component_l4[i]));
  kv.emplace_back("theorem", to_string(rv.theorem));
  kv.emplace_back("regimeOk", rv.ok ? "true" : "false");
  for (const auto& h : rv.hypotheses)
    kv.emplace_back("hypothesis[" + h.name + "]", h.holds ? "true" : "false");
  kv.emplace_back("S", format_g17(r.constants.S));
  kv.emplace_back("Cbar", format_g17(r.constants.Cbar));
  kv.emplace_back("K", format_g17(r.constants.K));
  kv.emplace_back("delta", format_g17(r.constants.delta));
}

}  // namespace

int cmd_solve(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override) {
  RunConfig c;
  Grid g;
  std::optional<Field> init;
  try {
    c = parse_config_file(config_path);
    if (seed_override) c.solver.seed = *seed_override;
    g = c.make_grid();
    c.spec.validate_lambda(g);
    init = load_init(c, g);
    if (init) c.solver.init_field = &*init;
    ensure_dir(out_dir);
  } catch (const std::exception& ex) {
    return config_error(ex);
  }

  ConstantsReport constants = constants_report(g, c.dec, c.spec);
  RegimeVerdict rv = validate_regime(c.dec, c.spec, constants, config_theorem(c), c.alpha);
  SolveResult res = minimize(g, c.dec, c.spec, c.solver, constants);
  AuditVerdict audit = positivity_audit(res, c.dec, c.spec, constants);

  std::vector<std::pair<std::string, std::string>> kv;
  append_result_kv(kv, res, rv);
  kv.emplace_back("positivityAllComponents", audit.all_positive ? "true" : "false");
  kv.emplace_back("groupMassBound", audit.all_groups_bounded ? "true" : "false");

  std::vector<std::string> header = {"component", "l4", "interiorMin", "positive"};
  std::vector<std::vector<std::string>> rows;
  bool radial_domain = g.kind == GridKind::Disk2D || g.kind == GridKind::Annulus2D;
  std::optional<SymmetryReport> sym;
  if (radial_domain && res.converged) {
    sym = antipodal_audit(res, c.dec, c.macro_split);
    kv.emplace_back("symmetryPairingOk", sym->pairing_ok ? "true" : "false");
    kv.emplace_back("symmetryPairingScore", format_g17(sym->pairing_score));
    kv.emplace_back("symmetryPairedAngle", format_g17(sym->paired_angle));
    header.push_back("axis");
    header.push_back("violation");
  }
  for (int i = 0; i < c.spec.d; ++i) {
    std::vector<std::string> row = {std::to_string(i + 1),
                                    format_g17(audit.components[i].l4),
                                    format_g17(audit.components[i].interior_min),
                                    audit.components[i].positive ? "true" : "false"};
    if (sym) {
      row.push_back(format_g17(sym->per_component_axis[i]));
      row.push_back(format_g17(sym->per_component_violation[i]));
    }
    rows.push_back(std::move(row));
  }

  write_key_values(join(out_dir, "summary.txt"), kv);
  write_field_dump(join(out_dir, "field.dump"), res.field);
  write_csv(join(out_dir, "components.csv"), header, rows);
  write_slice(join(out_dir, "slice.dat"), res.field);
  {
    std::ostringstream os;
    os << "# iteration energy\n";
    for (size_t k = 0; k < res.energy_trace.size(); ++k)
      os << k << " " << format_g17(res.energy_trace[k]) << "\n";
    atomic_write(join(out_dir, "energy_trace.dat"), os.str());
  }

  if (!res.converged) {
    std::cerr << "error: solver did not converge (gradResidual = "
              << format_g17(res.grad_residual) << ")\n";
    return 2;
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              std::optional<std::uint64_t> seed_override) {
  RunConfig c;
  Grid g;
  try {
    c = parse_config_file(config_path);
    if (seed_override) c.solver.seed = *seed_override;
    if (c.solver.init == InitKind::FromField)
      throw std::runtime_error("config: sweep does not support init = fromFile");
    g = c.make_grid();
    c.spec.validate_lambda(g);
    ensure_dir(out_dir);
  } catch (const std::exception& ex) {
    return config_error(ex);
  }

  std::vector<SweepRow> rows = sweep(g, c.dec, c.spec, c.sweep_entries, c.solver);

  std::vector<std::string> header = {"row"};
  for (const auto& e : c.sweep_entries) header.push_back(e.name());
  header.insert(header.end(), {"energy", "gradResidual", "iterations", "semiTrivial"});
  for (int i = 0; i < c.spec.d; ++i) header.push_back("l4_" + std::to_string(i + 1));
  header.push_back("regimeVerdict");
  header.push_back("error");

  std::vector<std::vector<std::string>> csv;
  nlohmann::json manifest;
  manifest["rows"] = nlohmann::json::array();
  for (const auto& row : rows) {
    std::vector<std::string> out = {std::to_string(row.row)};
    for (double p : row.params) out.push_back(format_g17(p));
    nlohmann::json jrow;
    jrow["row"] = row.row;
    jrow["failed"] = row.failed;
    if (row.failed) {
      out.insert(out.end(), {"", "", "", ""});
      for (int i = 0; i < c.spec.d; ++i) out.push_back("");
      out.push_back("");
      out.push_back(row.error);
      jrow["error"] = row.error;
    } else {
      out.push_back(format_g17(row.result.energy));
      out.push_back(format_g17(row.result.grad_residual));
      out.push_back(std::to_string(row.result.iterations));
      out.push_back(row.result.semi_trivial ? "true" : "false");
      for (int i = 0; i < c.spec.d; ++i) out.push_back(format_g17(row.result.component_l4[i]));
      out.push_back(row.regime.ok ? "true" : "false");
      out.push_back("");
      std::string dump = "row_" + std::to_string(row.row) + "_field.dump";
      write_field_dump(join(out_dir, dump), row.result.field);
      jrow["field"] = dump;
      jrow["converged"] = row.result.converged;
    }
    csv.push_back(std::move(out));
    manifest["rows"].push_back(std::move(jrow));
  }
  manifest["csv"] = "sweep.csv";
  write_csv(join(out_dir, "sweep.csv"), header, csv);
  atomic_write(join(out_dir, "manifest.json"), manifest.dump(2) + "\n");
  return 0;
}

int cmd_constants(const std::string& config_path) {
  try {
    RunConfig c = parse_config_file(config_path);
    Grid g = c.make_grid();
    c.spec.validate_lambda(g);
    ConstantsReport r = constants_report(g, c.dec, c.spec);
    std::cout << format_constants(r);
    if (!c.theorem.empty()) {
      RegimeVerdict rv = validate_regime(c.dec, c.spec, r, config_theorem(c), c.alpha);
      std::cout << "theorem = " << to_string(rv.theorem) << "\n";
      std::cout << "regimeOk = " << (rv.ok ? "true" : "false") << "\n";
      for (const auto& h : rv.hypotheses)
        std::cout << "hypothesis[" << h.name << "] = " << (h.holds ? "true" : "false")
                  << "\n";
    }
    return 0;
  } catch (const std::exception& ex) {
    return config_error(ex);
  }
}

int cmd_radial(const std::string& config_path, const std::string& out_dir,
               std::optional<std::uint64_t> seed_override) {
  RunConfig c;
  Grid rg;
  try {
    c = parse_config_file(config_path);
    if (seed_override) c.solver.seed = *seed_override;
    if (c.kind != GridKind::RadialLine)
      throw std::runtime_error("config: radial command needs domain.kind = radialLine");
    rg = c.make_radial_grid();
    c.spec.validate_lambda(rg);
    ensure_dir(out_dir);
  } catch (const std::exception& ex) {
    return config_error(ex);
  }

  std::vector<SubsystemLevel> levels;
  std::vector<std::pair<std::string, std::string>> kv;
  double sum = 0.0;
  bool all_conv = true;
  for (int h = 0; h < c.dec.m(); ++h) {
    SubsystemLevel lev = subsystem_level(c.spec, c.dec, h, rg, c.solver);
    DecayFit fit = decay_audit(lev, c.beta_fraction);
    std::string p = "group_" + std::to_string(h + 1) + ".";
    kv.emplace_back(p + "level", format_g17(lev.level));
    kv.emplace_back(p + "converged", lev.converged ? "true" : "false");
    kv.emplace_back(p + "decaySlope", format_g17(fit.slope));
    kv.emplace_back(p + "decayRequired", format_g17(fit.required));
    kv.emplace_back(p + "decayPass", fit.pass ? "true" : "false");
    write_slice(join(out_dir, "profile_" + std::to_string(h + 1) + ".dat"), lev.profile);
    sum += lev.level;
    all_conv = all_conv && lev.converged;
    levels.push_back(std::move(lev));
  }
  kv.emplace_back("sumLevels", format_g17(sum));
  write_key_values(join(out_dir, "levels.txt"), kv);
  if (!all_conv) {
    std::cerr << "error: a sub-system solve did not converge\n";
    return 2;
  }

  if (c.dec.m() >= 2) {
    RegimeVerdict rv =
        validate_regime(c.dec, c.spec, ConstantsReport{}, Theorem::NonexistenceRN);
    if (!rv.ok) {
      std::cerr << "error: splitting experiment requires the competitive regime:";
      for (const auto& h : rv.hypotheses)
        if (!h.holds) std::cerr << " [" << h.name << "]";
      std::cerr << "\n";
      return 3;
    }
    std::vector<double> radii = c.radii;
    if (radii.empty()) {
      double lmin = *std::min_element(c.spec.lambda.begin(), c.spec.lambda.end());
      for (double r : {4.0, 6.0, 8.0, 10.0, 12.0}) radii.push_back(r / std::sqrt(lmin));
    }
    Grid pg = Grid::square(c.planar_side, c.planar_n, true);
    SplittingTable tab = splitting_experiment(c.spec, c.dec, radii, pg, rg, c.solver);

    std::vector<std::string> header = {"R", "J", "sumLh", "decoupledJ", "offDiagMass"};
    for (int h = 0; h < c.dec.m(); ++h) header.push_back("t_" + std::to_string(h + 1));
    std::vector<std::vector<std::string>> rows;
    for (const auto& p : tab.points) {
      std::vector<std::string> row = {format_g17(p.R), format_g17(p.energy),
                                      format_g17(tab.sum_levels),
                                      format_g17(p.decoupled_energy),
                                      format_g17(p.offdiag_mass)};
      for (double t : p.t) row.push_back(format_g17(t));
      rows.push_back(std::move(row));
    }
    write_csv(join(out_dir, "splitting.csv"), header, rows);
  }
  return 0;
}

}  // namespace nehari
