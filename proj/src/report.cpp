#include "netcon/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace netcon {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::size_t> unflatten(const GridReport& report, std::size_t flat) {
  std::vector<std::size_t> idx(report.axes.size(), 0);
  for (std::size_t k = report.axes.size(); k-- > 0;) {
    std::size_t len = report.axes[k].values.size();
    idx[k] = flat % len;
    flat /= len;
  }
  return idx;
}

}  // namespace

void write_grid_csv(std::ostream& os, const GridReport& report) {
  for (const GridAxis& axis : report.axes) os << axis.param << ",";
  os << "classical_ok,sublinear,gamma_star,margin,note\n";
  for (std::size_t flat = 0; flat < report.cells.size(); ++flat) {
    const GridCell& cell = report.cells[flat];
    std::vector<std::size_t> idx = unflatten(report, flat);
    for (std::size_t k = 0; k < idx.size(); ++k)
      os << num(report.axes[k].values[idx[k]]) << ",";
    os << (cell.classical_ok ? 1 : 0) << "," << (cell.certified_sublinear ? 1 : 0)
       << ",";
    if (cell.gamma_star) os << num(*cell.gamma_star);
    os << "," << num(cell.margin) << "," << csv_escape(cell.note) << "\n";
  }
}

void write_grid_svg(std::ostream& os, const GridReport& report) {
  if (report.axes.empty() || report.axes.size() > 2)
    throw InvalidParameter("heat map needs one or two axes");
  const GridAxis& ax = report.axes[0];
  const std::size_t n0 = ax.values.size();
  const std::size_t n1 = report.axes.size() == 2 ? report.axes[1].values.size() : 1;

  const int cs = 14;  // cell size in px
  const int left = 64, top = 16, right = 16, bottom = 64;
  const int w = left + int(n0) * cs + right;
  const int h = top + int(n1) * cs + bottom;

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";

  auto cell_at = [&](std::size_t i0, std::size_t i1) -> const GridCell& {
    return report.cells[report.axes.size() == 2 ? i0 * n1 + i1 : i0];
  };

  for (std::size_t i0 = 0; i0 < n0; ++i0) {
    for (std::size_t i1 = 0; i1 < n1; ++i1) {
      const GridCell& cell = cell_at(i0, i1);
      const int x = left + int(i0) * cs;
      const int y = top + int(n1 - 1 - i1) * cs;
      const char* fill = "white";
      if (cell.certified_sublinear)
        fill = cell.gamma_star ? "#0b5394" : "#1f77b4";
      os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cs
         << "\" height=\"" << cs << "\" fill=\"" << fill
         << "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
      if (cell.classical_ok)
        os << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cs
           << "\" height=\"" << cs << "\" fill=\"#555555\" fill-opacity=\"0.45\"/>\n";
    }
  }

  const std::size_t step0 = std::max<std::size_t>(1, n0 / 8);
  for (std::size_t i0 = 0; i0 < n0; i0 += step0) {
    const int x = left + int(i0) * cs + cs / 2;
    os << "<text x=\"" << x << "\" y=\"" << top + int(n1) * cs + 14
       << "\" font-size=\"9\" text-anchor=\"middle\" font-family=\"sans-serif\">"
       << num(ax.values[i0]) << "</text>\n";
  }
  os << "<text x=\"" << left + int(n0) * cs / 2 << "\" y=\"" << top + int(n1) * cs + 30
     << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
     << ax.param << "</text>\n";
  if (report.axes.size() == 2) {
    const GridAxis& ay = report.axes[1];
    const std::size_t step1 = std::max<std::size_t>(1, n1 / 8);
    for (std::size_t i1 = 0; i1 < n1; i1 += step1) {
      const int y = top + int(n1 - 1 - i1) * cs + cs / 2 + 3;
      os << "<text x=\"" << left - 6 << "\" y=\"" << y
         << "\" font-size=\"9\" text-anchor=\"end\" font-family=\"sans-serif\">"
         << num(ay.values[i1]) << "</text>\n";
    }
    os << "<text x=\"14\" y=\"" << top + int(n1) * cs / 2
       << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "transform=\"rotate(-90 14 "
       << top + int(n1) * cs / 2 << ")\">" << ay.param << "</text>\n";
  }

  const int ly = top + int(n1) * cs + 44;
  os << "<rect x=\"" << left << "\" y=\"" << ly
     << "\" width=\"10\" height=\"10\" fill=\"#1f77b4\"/>\n"
     << "<text x=\"" << left + 14 << "\" y=\"" << ly + 9
     << "\" font-size=\"10\" font-family=\"sans-serif\">certified</text>\n";
  os << "<rect x=\"" << left + 80 << "\" y=\"" << ly
     << "\" width=\"10\" height=\"10\" fill=\"#0b5394\"/>\n"
     << "<text x=\"" << left + 94 << "\" y=\"" << ly + 9
     << "\" font-size=\"10\" font-family=\"sans-serif\">with rate</text>\n";
  os << "<rect x=\"" << left + 160 << "\" y=\"" << ly
     << "\" width=\"10\" height=\"10\" fill=\"#555555\" fill-opacity=\"0.45\"/>\n"
     << "<text x=\"" << left + 174 << "\" y=\"" << ly + 9
     << "\" font-size=\"10\" font-family=\"sans-serif\">classical rules hold</text>\n";
  os << "</svg>\n";
}

void write_series_csv(std::ostream& os, const std::vector<Series>& series) {
  if (series.empty()) throw EmptyInput("no series to write");
  os << "step";
  std::size_t horizon = 0;
  for (const Series& s : series) {
    os << "," << csv_escape(s.label);
    horizon = std::max(horizon, s.values.size());
  }
  os << "\n";
  for (std::size_t k = 0; k < horizon; ++k) {
    os << k;
    for (const Series& s : series) {
      os << ",";
      if (k < s.values.size()) os << num(s.values[k]);
    }
    os << "\n";
  }
}

void write_series_svg(std::ostream& os, const std::vector<Series>& series,
                      const std::string& y_label) {
  if (series.empty()) throw EmptyInput("no series to plot");
  static const char* kColors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b"};
  const int w = 640, h = 360, left = 60, right = 16, top = 24, bottom = 40;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  std::size_t horizon = 0;
  for (const Series& s : series) {
    horizon = std::max(horizon, s.values.size());
    for (double v : s.values) {
      if (!std::isfinite(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi >= lo)) throw InvalidParameter("series have no finite values");
  if (hi == lo) {
    hi += 1.0;
    lo -= 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const double xmax = horizon > 1 ? double(horizon - 1) : 1.0;

  auto px = [&](double step) { return left + step / xmax * (w - left - right); };
  auto py = [&](double v) {
    return top + (hi - v) / (hi - lo) * (h - top - bottom);
  };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right
     << "\" y2=\"" << h - bottom << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
     << "\" y2=\"" << h - bottom << "\" stroke=\"black\"/>\n";

  for (int tick = 0; tick <= 4; ++tick) {
    double v = lo + (hi - lo) * tick / 4.0;
    double y = py(v);
    os << "<line x1=\"" << left - 4 << "\" y1=\"" << y << "\" x2=\"" << left
       << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << left - 7 << "\" y=\"" << y + 3
       << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">"
       << num(v) << "</text>\n";
    double xstep = xmax * tick / 4.0;
    double x = px(xstep);
    os << "<line x1=\"" << x << "\" y1=\"" << h - bottom << "\" x2=\"" << x
       << "\" y2=\"" << h - bottom + 4 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << x << "\" y=\"" << h - bottom + 16
       << "\" font-size=\"10\" text-anchor=\"middle\" font-family=\"sans-serif\">"
       << num(std::round(xstep)) << "</text>\n";
  }
  os << "<text x=\"" << (left + w - right) / 2 << "\" y=\"" << h - 8
     << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\">"
     << "step</text>\n";
  os << "<text x=\"14\" y=\"" << (top + h - bottom) / 2
     << "\" font-size=\"11\" text-anchor=\"middle\" font-family=\"sans-serif\" "
        "transform=\"rotate(-90 14 "
     << (top + h - bottom) / 2 << ")\">" << y_label << "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* color = kColors[s % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t k = 0; k < series[s].values.size(); ++k) {
      double v = series[s].values[k];
      if (!std::isfinite(v)) continue;
      os << px(double(k)) << "," << py(v) << " ";
    }
    os << "\"/>\n";
    os << "<rect x=\"" << left + 10 + int(s) * 150 << "\" y=\"" << top - 16
       << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n";
    os << "<text x=\"" << left + 24 + int(s) * 150 << "\" y=\"" << top - 7
       << "\" font-size=\"10\" font-family=\"sans-serif\">"
       << series[s].label << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace netcon
