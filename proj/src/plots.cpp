#include "nsgal/plots.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace nsgal {

namespace fs = std::filesystem;

namespace {

struct Table {
  std::string text;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<Table> read_table(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  Table t;
  t.text.assign(std::istreambuf_iterator<char>(in), {});
  std::istringstream ss(t.text);
  std::string line;
  if (std::getline(ss, line)) t.header = split(line);
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    auto row = split(line);
    if (row.size() != t.header.size()) throw std::runtime_error(file.string() + ": ragged row");
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::optional<double> number(const std::string& s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

struct Point {
  std::string x_text, y_text;
  double x, y;
  bool marked = false;
  std::string label;
};

constexpr double kWidth = 640, kHeight = 400, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;

void write_svg(const fs::path& file, const std::string& title, const std::string& xlabel, const std::string& ylabel,
               const std::vector<Point>& points, const std::string& source) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
    xmin = std::min(xmin, p.x), xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y), ymax = std::max(ymax, p.y);
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<metadata><![CDATA[\n" << source << "]]></metadata>\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw << "\" y2=\"" << kTop + ph
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + ph
      << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << fmt(xmin)
      << "</text>\n";
  out << "<text x=\"" << kLeft + pw << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << fmt(xmax)
      << "</text>\n";
  out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + ph << "\" text-anchor=\"end\">" << fmt(ymin) << "</text>\n";
  out << "<text x=\"" << kLeft - 6 << "\" y=\"" << kTop + 4 << "\" text-anchor=\"end\">" << fmt(ymax) << "</text>\n";
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">" << xlabel
      << "</text>\n";
  out << "<text x=\"16\" y=\"" << kTop + ph / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << kTop + ph / 2 << ")\">" << ylabel << "</text>\n";

  out << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  bool first = true;
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
    out << (first ? "" : " ") << sx(p.x) << ',' << sy(p.y);
    first = false;
  }
  out << "\"/>\n<g class=\"data\">\n";
  for (const auto& p : points) {
    const double cx = std::isfinite(p.x) ? sx(p.x) : kLeft;
    const double cy = std::isfinite(p.y) ? sy(p.y) : kTop;
    out << "<circle cx=\"" << cx << "\" cy=\"" << cy << "\" r=\"" << (p.marked ? 5 : 1.5) << "\" fill=\""
        << (p.marked ? "crimson" : "steelblue") << "\" data-x=\"" << p.x_text << "\" data-y=\"" << p.y_text
        << "\"/>\n";
    if (p.marked) {
      out << "<line x1=\"" << cx << "\" y1=\"" << kTop << "\" x2=\"" << cx << "\" y2=\"" << kTop + ph
          << "\" stroke=\"crimson\" stroke-dasharray=\"4 3\"/>\n";
      out << "<text x=\"" << cx + 4 << "\" y=\"" << kTop + 12 << "\" fill=\"crimson\">" << p.label << "</text>\n";
    }
  }
  out << "</g>\n</svg>\n";
}

int plot_norms(const Table& t, const fs::path& dir, std::ostream& log) {
  if (t.header.empty() || t.header.front() != "t") {
    log << "error: norms.csv has no t column\n";
    return 1;
  }
  if (t.rows.empty()) {
    log << "warning: norms.csv has no rows, no plot written\n";
    return 0;
  }
  for (std::size_t col = 1; col < t.header.size(); ++col) {
    std::vector<Point> pts;
    for (const auto& row : t.rows) {
      const auto x = number(row[0]), y = number(row[col]);
      if (!x || !y) {
        log << "error: norms.csv has a non-numeric entry\n";
        return 1;
      }
      pts.push_back({row[0], row[col], *x, *y, false, {}});
    }
    write_svg(dir / (t.header[col] + ".svg"), t.header[col] + " against t", "t", t.header[col], pts, t.text);
  }
  return 0;
}

int plot_sweep(const Table& t, const fs::path& dir, std::ostream& log) {
  const std::vector<std::string> expected{"lambda", "status", "t_star", "serrin", "sup_V"};
  if (t.rows.empty()) {
    log << "warning: sweep.csv has an empty lambda grid, no plot written\n";
    return 0;
  }
  if (t.header != expected) {
    log << "error: sweep.csv has an unexpected header\n";
    return 1;
  }
  std::vector<Point> pts;
  for (const auto& row : t.rows) {
    const auto x = number(row[0]), y = number(row[3]);
    if (!x || !y) {
      log << "error: sweep.csv has a non-numeric entry\n";
      return 1;
    }
    Point p{row[0], row[3], *x, *y, false, {}};
    if (row[1] == "blow_up") {
      p.marked = true;
      p.label = "blow-up at lambda " + row[0] + (row[2].empty() ? "" : ", t* " + row[2]);
    }
    pts.push_back(std::move(p));
  }
  write_svg(dir / "sweep_serrin.svg", "Serrin norm against lambda", "lambda", "serrin", pts, t.text);
  return 0;
}

}  // namespace

int emit_plots(const fs::path& run_dir, std::ostream& log) {
  try {
    const auto norms = read_table(run_dir / "norms.csv");
    const auto sweep = read_table(run_dir / "sweep.csv");
    if (!norms && !sweep) {
      log << "error: " << run_dir.string() << " contains neither norms.csv nor sweep.csv\n";
      return 1;
    }
    int code = 0;
    if (norms) code = std::max(code, plot_norms(*norms, run_dir, log));
    if (sweep) code = std::max(code, plot_sweep(*sweep, run_dir, log));
    return code;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace nsgal
