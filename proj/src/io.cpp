#include "nehari/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nehari {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

void write_field_dump(const std::string& path, const Field& u) {
  const Grid& g = *u.grid;
  std::ostringstream os;
  os << "# " << to_string(g.kind) << " " << g.n << " " << format_g17(g.h) << " " << u.d()
     << "\n";
  const int ny = g.planar() ? g.n : 1;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < g.n; ++ix) {
      int q = g.planar() ? g.idx(ix, iy) : ix;
      os << ix << " " << iy;
      for (int i = 0; i < u.d(); ++i) os << " " << format_g17(u.comp[i].v[q]);
      os << "\n";
    }
  atomic_write(path, os.str());
}

FieldDump read_field_dump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string hash;
  FieldDump d;
  if (!(in >> hash >> d.kind >> d.n >> d.h >> d.d) || hash != "#")
    throw std::runtime_error("bad field dump header in " + path);
  bool planar = d.kind != "radialLine";
  const int nodes = planar ? d.n * d.n : d.n;
  d.values.assign(d.d, std::vector<double>(nodes, 0.0));
  for (int k = 0; k < nodes; ++k) {
    int ix, iy;
    if (!(in >> ix >> iy)) throw std::runtime_error("truncated field dump " + path);
    int q = planar ? iy * d.n + ix : ix;
    if (q < 0 || q >= nodes) throw std::runtime_error("bad node index in " + path);
    for (int i = 0; i < d.d; ++i)
      if (!(in >> d.values[i][q])) throw std::runtime_error("truncated field dump " + path);
  }
  return d;
}

Field field_from_dump(const Grid& g, const CouplingSpec& spec, const FieldDump& dump) {
  if (dump.kind != to_string(g.kind) || dump.n != g.n || dump.d != spec.d ||
      std::abs(dump.h - g.h) > 1e-12 * g.h)
    throw std::runtime_error("field dump does not match the configured grid");
  Field u(g, spec.d);
  for (int i = 0; i < spec.d; ++i) {
    u.comp[i].v = dump.values[i];
    u.comp[i].zero_masked();
  }
  return u;
}

void write_key_values(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& kv) {
  std::ostringstream os;
  for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
  atomic_write(path, os.str());
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::runtime_error("csv row width does not match header");
    for (size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  atomic_write(path, os.str());
}

void write_slice(const std::string& path, const Field& u) {
  const Grid& g = *u.grid;
  std::ostringstream os;
  os << "# " << (g.planar() ? "x" : "r");
  for (int i = 0; i < u.d(); ++i) os << " u" << (i + 1);
  os << "\n";
  if (g.planar()) {
    const int iy = (g.n - 1) / 2;
    for (int ix = 0; ix < g.n; ++ix) {
      os << format_g17(g.x(ix));
      for (int i = 0; i < u.d(); ++i) os << " " << format_g17(u.comp[i].v[g.idx(ix, iy)]);
      os << "\n";
    }
  } else {
    for (int ix = 0; ix < g.n; ++ix) {
      os << format_g17(ix * g.h);
      for (int i = 0; i < u.d(); ++i) os << " " << format_g17(u.comp[i].v[ix]);
      os << "\n";
    }
  }
  atomic_write(path, os.str());
}

}  // namespace nehari
