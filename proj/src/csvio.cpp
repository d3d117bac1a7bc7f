#include "sddesim/csvio.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sddesim/errors.hpp"

namespace sdde {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

void write_means_csv(const std::string& path, const EnsembleResults& r) {
  auto out = open_out(path);
  out << kMeansHeader << "\n";
  const std::string dt = format_double(r.grid.dt);
  for (std::size_t ii = 0; ii < r.initial_labels.size(); ++ii)
    for (std::size_t pp = 0; pp < r.psi_labels.size(); ++pp)
      for (std::size_t oo = 0; oo < r.mean_steps.size(); ++oo) {
        const MeanResult& m = r.means[ii][pp][oo];
        out << format_double(r.grid.time_at(r.mean_steps[oo])) << ','
            << r.psi_labels[pp] << ',' << r.initial_labels[ii] << ',' << dt
            << ',' << format_double(m.mean) << ',' << format_double(m.stderr_)
            << "\n";
      }
}

void write_ecdf_csv(const std::string& path, const EnsembleResults& r) {
  auto out = open_out(path);
  out << kEcdfHeader << "\n";
  const std::string dt = format_double(r.grid.dt);
  for (std::size_t ii = 0; ii < r.initial_labels.size(); ++ii)
    for (std::size_t pp = 0; pp < r.psi_labels.size(); ++pp) {
      const Ecdf e = empirical_cdf(r.ecdf_values[ii][pp]);
      const double n = static_cast<double>(e.size());
      for (std::size_t k = 0; k < e.sorted_values.size(); ++k)
        out << r.psi_labels[pp] << ',' << r.initial_labels[ii] << ',' << dt
            << ',' << format_double(e.sorted_values[k]) << ','
            << format_double(static_cast<double>(k + 1) / n) << "\n";
    }
}

void write_distances_csv(const std::string& path, const EnsembleResults& r) {
  auto out = open_out(path);
  out << kDistancesHeader << "\n";
  for (std::size_t j = 0; j < r.distances.size(); ++j) {
    const auto& row = r.distances[j];
    const bool entropic = row.dist.method == TransportMethod::Entropic;
    out << format_double(row.t) << ','
        << (entropic ? "entropic" : "exact") << ','
        << format_double(row.dist.value) << ',' << row.dist.n << ','
        << (entropic ? format_double(row.dist.epsilon) : "") << "\n";
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path);
  out << "k,t";
  for (int c = 1; c <= traj.d; ++c) out << ",x_" << c;
  out << "\n";
  for (std::int64_t k = -traj.grid.N; k <= traj.grid.n_steps; ++k) {
    out << k << ',' << format_double(traj.grid.time_at(k));
    for (double v : traj.at(k)) out << ',' << format_double(v);
    out << "\n";
  }
}

void write_segment_csv(const std::string& path, const Segment& seg) {
  auto out = open_out(path);
  out << "j,theta";
  for (int c = 1; c <= seg.d; ++c) out << ",x_" << c;
  out << "\n";
  for (std::int64_t j = 0; j <= seg.N; ++j) {
    out << j << ',' << format_double(static_cast<double>(j - seg.N) * seg.dt);
    for (double v : seg.node(j)) out << ',' << format_double(v);
    out << "\n";
  }
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) return c;
  throw ParseError("csv: missing column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  CsvTable table;
  std::string line;
  long lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : s) {
      if (ch == ',') {
        cells.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    cells.push_back(cur);
    return cells;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (lineno == 1) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size())
      throw ParseError(path, lineno,
                       "expected " + std::to_string(table.header.size()) +
                           " cells, got " + std::to_string(cells.size()));
    table.rows.push_back(std::move(cells));
  }
  if (table.header.empty()) throw ParseError(path, 1, "missing header row");
  return table;
}

std::string fnv1a_file_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "' for checksumming");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
    if (got < static_cast<std::streamsize>(sizeof(buf))) break;
  }
  char hex[17];
  std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

}  // namespace sdde
