#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nehari/energy.hpp"

namespace nehari {

/// Shortest decimal with 17 significant digits (round-trips doubles).
std::string format_g17(double x);

/// Whole-file atomic write: temp file in the same directory, then rename.
void atomic_write(const std::string& path, const std::string& content);

/// Field dump: header "# kind n h d", then one "ix iy v1 ... vd" line per
/// node (iy = 0 on radial lines).
void write_field_dump(const std::string& path, const Field& u);

struct FieldDump {
  std::string kind;
  int n = 0;
  double h = 0.0;
  int d = 0;
  std::vector<std::vector<double>> values;  // per component, node-ordered
};

FieldDump read_field_dump(const std::string& path);

/// Attach a dump to a grid; throws if kind/n/h/d do not match.
Field field_from_dump(const Grid& g, const CouplingSpec& spec, const FieldDump& dump);

void write_key_values(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& kv);

/// Strict comma-separated output, header row first, no quoting (values must
/// not contain commas).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Gnuplot-ready columnar slice: x (or r) against the component values along
/// the horizontal center line of a planar grid, or the whole radial line.
void write_slice(const std::string& path, const Field& u);

}  // namespace nehari
