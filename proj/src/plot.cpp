#include "sddesim/plot.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "sddesim/csvio.hpp"
#include "sddesim/errors.hpp"

namespace sdde {

namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 62, kRight = 18, kTop = 22, kBottom = 42;

const char* kColors[] = {"#d62728", "#1f77b4", "#2ca02c",
                         "#9467bd", "#8c564b", "#e377c2"};
const char* kDashes[] = {"5 4", "9 4 2 4", "", "2 3", "12 4", "1 3"};

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double parse_num(const std::string& cell, const std::string& file, long line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(cell, &pos);
    if (pos != cell.size()) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ParseError(file, line, "cannot parse number '" + cell + "'");
  }
}

// A linear-axes panel with polyline series. Pure function of its inputs.
std::string render_panel(const std::string& title, const std::string& x_label,
                         const std::string& y_label,
                         const std::vector<Series>& series, bool staircase) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (xmax <= xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax <= ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double ypad = 0.05 * (ymax - ymin);
  ymin -= ypad;
  ymax += ypad;

  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
      << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"14\" font-size=\"13\" "
      << "text-anchor=\"middle\" font-family=\"sans-serif\">" << title
      << "</text>\n";

  for (int i = 0; i <= 4; ++i) {
    const double fx = xmin + (xmax - xmin) * i / 4.0;
    const double fy = ymin + (ymax - ymin) * i / 4.0;
    out << "<line x1=\"" << fmt(sx(fx)) << "\" y1=\"" << kTop + ph << "\" x2=\""
        << fmt(sx(fx)) << "\" y2=\"" << kTop + ph + 4 << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << fmt(sx(fx)) << "\" y=\"" << kTop + ph + 16
        << "\" font-size=\"10\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << fmt(fx) << "</text>\n";
    out << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << fmt(sy(fy)) << "\" x2=\""
        << kLeft << "\" y2=\"" << fmt(sy(fy)) << "\" stroke=\"#444\"/>\n";
    out << "<text x=\"" << kLeft - 7 << "\" y=\"" << fmt(sy(fy) + 3)
        << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">"
        << fmt(fy) << "</text>\n";
  }
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 6
      << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << x_label << "</text>\n";
  out << "<text x=\"14\" y=\"" << kHeight / 2
      << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "transform=\"rotate(-90 14 " << kHeight / 2 << ")\">" << y_label
      << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 6];
    const char* dash = kDashes[s % 6];
    const auto& pts = series[s].points;
    if (pts.size() == 1) {
      out << "<circle cx=\"" << fmt(sx(pts[0].first)) << "\" cy=\""
          << fmt(sy(pts[0].second)) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    } else {
      out << "<polyline fill=\"none\" stroke=\"" << color << "\"";
      if (*dash) out << " stroke-dasharray=\"" << dash << "\"";
      out << " stroke-width=\"1.5\" points=\"";
      double prev_y = 0.0;
      for (std::size_t p = 0; p < pts.size(); ++p) {
        if (staircase && p > 0)
          out << fmt(sx(pts[p].first)) << "," << fmt(sy(prev_y)) << " ";
        out << fmt(sx(pts[p].first)) << "," << fmt(sy(pts[p].second));
        if (p + 1 < pts.size()) out << " ";
        prev_y = pts[p].second;
      }
      out << "\"/>\n";
    }
    const double ly = kTop + 14 + 16 * static_cast<double>(s);
    out << "<line x1=\"" << kLeft + pw - 120 << "\" y1=\"" << ly - 4 << "\" x2=\""
        << kLeft + pw - 96 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
        << "\"";
    if (*dash) out << " stroke-dasharray=\"" << dash << "\"";
    out << " stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << kLeft + pw - 90 << "\" y=\"" << ly
        << "\" font-size=\"11\" font-family=\"sans-serif\">" << series[s].label
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << content;
}

}  // namespace

std::vector<std::string> emit_means_plots(const std::string& means_csv,
                                          const std::string& out_dir) {
  const CsvTable table = read_csv(means_csv);
  if (table.rows.empty()) throw ParseError(means_csv, 2, "no data rows");
  const std::size_t ct = table.column("t"), cp = table.column("psi"),
                    ci = table.column("initial"), cd = table.column("dt"),
                    cm = table.column("mean");
  // Group by (psi, dt), one series per initial; preserve file order.
  std::vector<std::pair<std::string, std::string>> group_keys;
  std::map<std::pair<std::string, std::string>, std::vector<Series>> groups;
  long line = 1;
  for (const auto& row : table.rows) {
    ++line;
    const auto key = std::make_pair(row[cp], row[cd]);
    auto& series = groups[key];
    if (series.empty()) group_keys.push_back(key);
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.label == row[ci]; });
    if (it == series.end()) {
      series.push_back({row[ci], {}});
      it = series.end() - 1;
    }
    it->points.emplace_back(parse_num(row[ct], means_csv, line),
                            parse_num(row[cm], means_csv, line));
  }
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  for (const auto& key : group_keys) {
    const std::string path =
        out_dir + "/means_" + key.first + "_dt" + key.second + ".svg";
    write_file(path, render_panel("mean of " + key.first + " vs t (dt=" + key.second + ")",
                                  "t", "mean", groups[key], false));
    written.push_back(path);
  }
  return written;
}

std::vector<std::string> emit_ecdf_plots(const std::string& ecdf_csv,
                                         const std::string& out_dir) {
  const CsvTable table = read_csv(ecdf_csv);
  if (table.rows.empty()) throw ParseError(ecdf_csv, 2, "no data rows");
  const std::size_t cp = table.column("psi"), ci = table.column("initial"),
                    cd = table.column("dt"), cv = table.column("value"),
                    cc = table.column("cdf");
  std::vector<std::pair<std::string, std::string>> group_keys;
  std::map<std::pair<std::string, std::string>, std::vector<Series>> groups;
  long line = 1;
  for (const auto& row : table.rows) {
    ++line;
    const auto key = std::make_pair(row[cp], row[cd]);
    auto& series = groups[key];
    if (series.empty()) group_keys.push_back(key);
    auto it = std::find_if(series.begin(), series.end(),
                           [&](const Series& s) { return s.label == row[ci]; });
    if (it == series.end()) {
      series.push_back({row[ci], {}});
      it = series.end() - 1;
    }
    it->points.emplace_back(parse_num(row[cv], ecdf_csv, line),
                            parse_num(row[cc], ecdf_csv, line));
  }
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  for (const auto& key : group_keys) {
    const std::string path =
        out_dir + "/ecdf_" + key.first + "_dt" + key.second + ".svg";
    write_file(path, render_panel("empirical CDF of " + key.first + " (dt=" + key.second + ")",
                                  key.first, "F", groups[key], true));
    written.push_back(path);
  }
  return written;
}

}  // namespace sdde
