#include <cstdio>
#include <limits>

#include "qclab/lab.hpp"

namespace qclab::lab {
namespace {

constexpr double kWidth = 480.0, kHeight = 480.0, kMargin = 48.0;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Frame {
  double x0, x1, y0, y1;
  double sx(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kWidth - 2 * kMargin); }
  double sy(double y) const { return kHeight - kMargin - (y - y0) / (y1 - y0) * (kHeight - 2 * kMargin); }
};

Frame fit(const std::vector<std::pair<double, double>>& pts, bool equal_aspect) {
  Frame f{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
          std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (auto [x, y] : pts) {
    f.x0 = std::min(f.x0, x);
    f.x1 = std::max(f.x1, x);
    f.y0 = std::min(f.y0, y);
    f.y1 = std::max(f.y1, y);
  }
  if (equal_aspect) {
    const double cx = 0.5 * (f.x0 + f.x1), cy = 0.5 * (f.y0 + f.y1);
    const double half = 0.5 * std::max(f.x1 - f.x0, f.y1 - f.y0);
    f = {cx - half, cx + half, cy - half, cy + half};
  }
  if (!(f.x1 > f.x0)) f.x1 = f.x0 + 1.0;
  if (!(f.y1 > f.y0)) f.y1 = f.y0 + 1.0;
  return f;
}

std::string polyline(const Frame& f, const std::vector<std::pair<double, double>>& pts, const char* colour,
                     bool closed) {
  std::string d;
  for (std::size_t i = 0; i < pts.size(); ++i)
    d += (i ? " L" : "M") + fmt(f.sx(pts[i].first)) + " " + fmt(f.sy(pts[i].second));
  if (closed) d += " Z";
  return "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + colour + "\" stroke-width=\"1.5\"/>\n";
}

std::string document(const std::string& title, const Frame& f, const std::string& body, const std::string& ylabel) {
  std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" viewBox=\"0 0 480 480\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"480\" height=\"480\" fill=\"white\"/>\n";
  s += "<rect x=\"48\" y=\"48\" width=\"384\" height=\"384\" fill=\"none\" stroke=\"#888\"/>\n";
  s += "<text x=\"240\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" + title + "</text>\n";
  auto text = [&](double x, double y, const std::string& t, const char* anchor) {
    s += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" text-anchor=\"" + anchor +
         "\" font-family=\"sans-serif\" font-size=\"11\">" + t + "</text>\n";
  };
  text(48, 448, label(f.x0), "start");
  text(432, 448, label(f.x1), "end");
  text(44, 432, ylabel + label(f.y0), "end");
  text(44, 56, ylabel + label(f.y1), "end");
  return s + body + "</svg>\n";
}

std::vector<std::pair<double, double>> read_series(const json& record, const char* name) {
  if (!record.contains("series") || !record.at("series").contains(name))
    throw Error("missing_series", std::string("record has no '") + name + "' series");
  std::vector<std::pair<double, double>> pts;
  for (const auto& p : record.at("series").at(name)) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  if (pts.size() < 2) throw Error("missing_series", std::string("series '") + name + "' is too short");
  return pts;
}

const char* kColours[] = {"#1f5fa8", "#c2452d", "#2d8a4e", "#7a4fb0", "#b08a1f", "#333333"};

}  // namespace

std::vector<std::string> plot_kinds() { return {"curve", "lift", "decay"}; }

std::string emit_plot(const json& record, const std::string& kind) {
  const std::string title = record.value("experiment", std::string("record")) + ": " + kind;
  if (kind == "curve") {
    const auto pts = read_series(record, "curve");
    const Frame f = fit(pts, true);
    return document(title, f, polyline(f, pts, kColours[0], true), "");
  }
  if (kind == "lift") {
    const auto pts = read_series(record, "lift");
    const Frame f = fit(pts, false);
    const std::vector<std::pair<double, double>> diag = {{f.x0, f.x0}, {f.x1, f.x1}};
    return document(title, f, polyline(f, diag, "#bbbbbb", false) + polyline(f, pts, kColours[0], false), "");
  }
  if (kind == "decay") {
    if (!record.contains("tables") || !record.at("tables").contains("decay"))
      throw Error("missing_series", "record has no 'decay' table");
    const json& t = record.at("tables").at("decay");
    const auto& rows = t.at("rows");
    const std::size_t ncol = t.at("columns").size();
    if (rows.empty() || ncol < 2) throw Error("missing_series", "decay table is empty");
    std::vector<std::vector<std::pair<double, double>>> lines(ncol - 1);
    std::vector<std::pair<double, double>> all;
    for (const auto& row : rows)
      for (std::size_t c = 1; c < ncol; ++c) {
        const double v = row.at(c).is_number() ? row.at(c).get<double>() : 0.0;
        const std::pair<double, double> pt(row.at(0).get<double>(), std::log10(std::max(v, 1e-16)));
        lines[c - 1].push_back(pt);
        all.push_back(pt);
      }
    const Frame f = fit(all, false);
    std::string body;
    for (std::size_t c = 0; c < lines.size(); ++c) {
      body += polyline(f, lines[c], kColours[c % 6], false);
      body += "<text x=\"" + fmt(440.0) + "\" y=\"" + fmt(64.0 + 14.0 * static_cast<double>(c)) +
              "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" + kColours[c % 6] + "\">" +
              t.at("columns").at(c + 1).get<std::string>() + "</text>\n";
    }
    return document(title, f, body, "1e");
  }
  throw Error("invalid_argument", "unknown plot kind '" + kind + "'");
}

}  // namespace qclab::lab
