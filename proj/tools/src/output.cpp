#include "shapegeo/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <stdexcept>
#include <system_error>

#include <unistd.h>

namespace shapegeo::cli {

ResultTable::ResultTable(std::vector<std::string> columns, std::string note)
    : columns_(std::move(columns)), note_(std::move(note)) {}

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns_.size()) {
    throw std::invalid_argument("ResultTable: row has " + std::to_string(row.size()) +
                                " entries, expected " + std::to_string(columns_.size()));
  }
  for (double v : row) {
    if (!std::isfinite(v)) throw std::invalid_argument("ResultTable: non-finite entry");
  }
  rows_.push_back(std::move(row));
}

std::size_t ResultTable::column(const std::string& name) const {
  const auto it = std::find(columns_.begin(), columns_.end(), name);
  if (it == columns_.end()) throw std::invalid_argument("no column named '" + name + "'");
  return static_cast<std::size_t>(it - columns_.begin());
}

std::vector<double> ResultTable::column_values(const std::string& name) const {
  const auto j = column(name);
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto& r : rows_) out.push_back(r[j]);
  return out;
}

std::string format_number(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_csv(const ResultTable& table) {
  std::string s;
  for (std::size_t j = 0; j < table.columns().size(); ++j) {
    if (j) s += ',';
    s += table.columns()[j];
  }
  s += '\n';
  for (const auto& row : table.rows()) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) s += ',';
      s += format_number(row[j]);
    }
    s += '\n';
  }
  return s;
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, const char* f = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string tick_label(double v) {
  if (v == 0.0) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};

}  // namespace

std::string render_svg(const ResultTable& table, const PlotSpec& spec) {
  const auto xj = table.column(spec.x);
  std::vector<std::size_t> yj;
  for (const auto& y : spec.y) yj.push_back(table.column(y));
  const bool grouped = !spec.group.empty();
  const std::size_t gj = grouped ? table.column(spec.group) : 0;

  auto ymap = [&](double v) { return spec.log_y ? std::log10(v) : v; };

  std::vector<Series> series;
  for (std::size_t s = 0; s < yj.size(); ++s) {
    std::map<double, Series> groups;  // ordered by group value
    for (const auto& row : table.rows()) {
      const double v = row[yj[s]];
      if (spec.log_y && !(v > 0.0)) continue;
      const double g = grouped ? row[gj] : 0.0;
      auto& ser = groups[g];
      if (ser.label.empty()) {
        ser.label = spec.y[s] + (grouped ? " (" + spec.group + " = " + tick_label(g) + ")" : "");
      }
      ser.points.emplace_back(row[xj], ymap(v));
    }
    for (auto& [g, ser] : groups) series.push_back(std::move(ser));
  }

  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0;
  double y0 = x0, y1 = -x0;
  for (const auto& ser : series) {
    for (const auto& [x, y] : ser.points) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  for (const auto& [level, label] : spec.hlines) {
    if (spec.log_y && !(level > 0.0)) continue;
    y0 = std::min(y0, ymap(level));
    y1 = std::max(y1, ymap(level));
  }
  if (!(x1 >= x0)) x0 = 0.0, x1 = 1.0;
  if (!(y1 >= y0)) y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad;
  y1 += pad;

  const double W = 720, H = 450, left = 80, right = 200, top = 40, bottom = 60;
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (1.0 - (y - y0) / (y1 - y0)) * ph; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(W, "%.0f") + "\" height=\"" +
       fmt(H, "%.0f") + "\" viewBox=\"0 0 " + fmt(W, "%.0f") + " " + fmt(H, "%.0f") + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + fmt(W, "%.0f") + "\" height=\"" + fmt(H, "%.0f") +
       "\" fill=\"white\"/>\n";
  s += "<text x=\"" + fmt(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"15\">" + escape_xml(spec.title) + "</text>\n";

  // axes box and ticks
  s += "<polyline fill=\"none\" stroke=\"black\" points=\"" + fmt(left) + "," + fmt(top) + " " +
       fmt(left) + "," + fmt(top + ph) + " " + fmt(left + pw) + "," + fmt(top + ph) + "\"/>\n";
  constexpr int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    const double xv = x0 + (x1 - x0) * i / ticks;
    const double yv = y0 + (y1 - y0) * i / ticks;
    s += "<polyline stroke=\"black\" points=\"" + fmt(px(xv)) + "," + fmt(top + ph) + " " +
         fmt(px(xv)) + "," + fmt(top + ph + 5) + "\"/>\n";
    s += "<text x=\"" + fmt(px(xv)) + "\" y=\"" + fmt(top + ph + 20) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
         escape_xml(tick_label(xv)) + "</text>\n";
    s += "<polyline stroke=\"black\" points=\"" + fmt(left - 5) + "," + fmt(py(yv)) + " " +
         fmt(left) + "," + fmt(py(yv)) + "\"/>\n";
    const std::string ylab = spec.log_y ? "1e" + tick_label(yv) : tick_label(yv);
    s += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(py(yv) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
         escape_xml(ylab) + "</text>\n";
  }
  s += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(H - 15) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
       escape_xml(spec.x_label.empty() ? spec.x : spec.x_label) + "</text>\n";
  s += "<text x=\"18\" y=\"" + fmt(top + ph / 2) + "\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
       fmt(top + ph / 2) + ")\">" +
       escape_xml((spec.log_y ? "log10 " : "") + spec.y_label) + "</text>\n";

  for (const auto& [level, label] : spec.hlines) {
    if (spec.log_y && !(level > 0.0)) continue;
    const double y = py(ymap(level));
    s += "<polyline fill=\"none\" stroke=\"gray\" stroke-dasharray=\"6,4\" points=\"" +
         fmt(left) + "," + fmt(y) + " " + fmt(left + pw) + "," + fmt(y) + "\"/>\n";
    s += "<text x=\"" + fmt(left + pw + 4) + "\" y=\"" + fmt(y + 4) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"gray\">" + escape_xml(label) +
         "</text>\n";
  }

  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* colour = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
    const auto& ser = series[i];
    if (!ser.points.empty()) {
      s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
           "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t k = 0; k < ser.points.size(); ++k) {
        if (k) s += ' ';
        s += fmt(px(ser.points[k].first)) + "," + fmt(py(ser.points[k].second));
      }
      s += "\"/>\n";
      if (spec.markers) {
        // short crosses, to stay within polylines and text
        for (const auto& [x, y] : ser.points) {
          const double cx = px(x), cy = py(y);
          s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" points=\"" +
               fmt(cx - 3) + "," + fmt(cy) + " " + fmt(cx + 3) + "," + fmt(cy) + "\"/>\n";
          s += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" points=\"" +
               fmt(cx) + "," + fmt(cy - 3) + " " + fmt(cx) + "," + fmt(cy + 3) + "\"/>\n";
        }
      }
    }
    const double ly = top + 14.0 * (i + 1) + 40.0 + 14.0 * spec.hlines.size();
    s += "<polyline stroke=\"" + std::string(colour) + "\" stroke-width=\"2\" points=\"" +
         fmt(left + pw + 8) + "," + fmt(ly - 4) + " " + fmt(left + pw + 24) + "," +
         fmt(ly - 4) + "\"/>\n";
    s += "<text x=\"" + fmt(left + pw + 28) + "\" y=\"" + fmt(ly) +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + escape_xml(ser.label) + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

}  // namespace shapegeo::cli
