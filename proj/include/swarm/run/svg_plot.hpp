#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace swarm::run {

namespace detail {

struct plot_series {
  std::string label;
  std::vector<std::pair<long, double>> points;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return std::string(buf);
}

inline std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return std::string(buf);
}

}  // namespace detail

// Renders every run's series for one metric from a metrics.csv into a
// standalone SVG line chart.  Unknown metric names fail loudly with the
// list of metrics the file actually contains.
inline void plot_metric(const std::string& csv_path, const std::string& metric,
                        const std::string& svg_path) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + csv_path);

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + csv_path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "run_id,seed,step,metric,value")
    throw std::runtime_error("unexpected csv header in " + csv_path + ": " + line);

  std::vector<detail::plot_series> series;
  std::map<std::string, std::size_t> index;
  std::set<std::string> seen_metrics;

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != 5) throw std::runtime_error("malformed csv row: " + line);
    seen_metrics.insert(fields[3]);
    if (fields[3] != metric) continue;
    auto [it, fresh] = index.try_emplace(fields[0], series.size());
    if (fresh) series.push_back({fields[0], {}});
    series[it->second].points.emplace_back(std::stol(fields[2]), std::stod(fields[4]));
  }

  if (series.empty()) {
    std::string msg = "metric '" + metric + "' not found in " + csv_path + "; available:";
    for (const auto& m : seen_metrics) msg += " " + m;
    throw std::runtime_error(msg);
  }

  long x_min = series[0].points.front().first, x_max = x_min;
  double y_min = series[0].points.front().second, y_max = y_min;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      x_min = std::min(x_min, x);
      x_max = std::max(x_max, x);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  }
  if (x_min == x_max) ++x_max;
  if (y_max - y_min < 1e-12) {
    y_min -= 0.5;
    y_max += 0.5;
  } else {
    const double pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;
  }

  const double width = 960, height = 540;
  const double ml = 80, mr = 24, mt = 48, mb = 56;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const auto sx = [&](double x) { return ml + (x - x_min) / double(x_max - x_min) * pw; };
  const auto sy = [&](double y) { return mt + (y_max - y) / (y_max - y_min) * ph; };

  static const char* palette[] = {"#4477aa", "#cc3344", "#228833", "#ee7733",
                                  "#aa55aa", "#11999e", "#b8860b", "#777777"};
  const std::size_t n_colors = sizeof(palette) / sizeof(palette[0]);

  std::ofstream out(svg_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + svg_path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"18\">" << metric << "</text>\n";

  // Axes with five ticks each.
  out << "<g stroke=\"#333\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\"/>\n";
  out << "</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = x_min + (x_max - x_min) * i / 4.0;
    const double fy = y_min + (y_max - y_min) * i / 4.0;
    out << "<line x1=\"" << detail::svg_num(sx(fx)) << "\" y1=\"" << mt + ph << "\" x2=\""
        << detail::svg_num(sx(fx)) << "\" y2=\"" << mt + ph + 5
        << "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << detail::svg_num(sx(fx)) << "\" y=\"" << mt + ph + 20
        << "\" text-anchor=\"middle\">" << detail::tick_label(fx) << "</text>\n";
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << detail::svg_num(sy(fy)) << "\" x2=\"" << ml
        << "\" y2=\"" << detail::svg_num(sy(fy)) << "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
    out << "<text x=\"" << ml - 9 << "\" y=\"" << detail::svg_num(sy(fy) + 4)
        << "\" text-anchor=\"end\">" << detail::tick_label(fy) << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\">step</text>\n";
  out << "</g>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = palette[i % n_colors];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& [x, y] : series[i].points)
      out << detail::svg_num(sx(double(x))) << ',' << detail::svg_num(sy(y)) << ' ';
    out << "\"/>\n";
  }

  // Legend, capped so huge sweeps stay readable.
  const std::size_t legend_n = std::min<std::size_t>(series.size(), 10);
  out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";
  for (std::size_t i = 0; i < legend_n; ++i) {
    const double ly = mt + 8 + 16 * double(i);
    out << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 130
        << "\" y2=\"" << ly << "\" stroke=\"" << palette[i % n_colors]
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << ml + pw - 124 << "\" y=\"" << ly + 4 << "\">" << series[i].label
        << "</text>\n";
  }
  if (series.size() > legend_n)
    out << "<text x=\"" << ml + pw - 150 << "\" y=\"" << mt + 8 + 16 * double(legend_n) + 4
        << "\">+" << series.size() - legend_n << " more</text>\n";
  out << "</g>\n";
  out << "</svg>\n";
}

}  // namespace swarm::run
