#include "polarity/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "polarity/error.hpp"

namespace polarity {

namespace {

constexpr double kWidth = 760, kHeight = 480;
constexpr double kLeft = 70, kRight = 720, kTop = 50, kBottom = 420;

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// round a raw tick spacing to 1/2/5 * 10^k
double nice_step(double span) {
  if (span <= 0) return 1.0;
  const double raw = span / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double frac = raw / mag;
  double nice = 10.0;
  if (frac <= 1.5) nice = 1.0;
  else if (frac <= 3.5) nice = 2.0;
  else if (frac <= 7.5) nice = 5.0;
  return nice * mag;
}

}  // namespace

SvgPlot::SvgPlot(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void SvgPlot::add_line(const std::string& name, const std::vector<double>& xs,
                       const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw ArgumentError("SvgPlot: xs/ys size mismatch");
  series_.push_back(Series{name, xs, ys, {}, true, false, 0, 0});
}

void SvgPlot::add_points(const std::string& name, const std::vector<double>& xs,
                         const std::vector<double>& ys, const std::vector<std::string>& labels) {
  if (xs.size() != ys.size()) throw ArgumentError("SvgPlot: xs/ys size mismatch");
  series_.push_back(Series{name, xs, ys, labels, false, false, 0, 0});
}

void SvgPlot::add_fit_line(const std::string& name, double intercept, double slope) {
  Series s;
  s.name = name;
  s.fit = true;
  s.intercept = intercept;
  s.slope = slope;
  series_.push_back(std::move(s));
}

void SvgPlot::set_comment(std::string comment) { comment_ = std::move(comment); }

void SvgPlot::render(std::ostream& out) const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const Series& s : series_) {
    for (double v : s.xs) {
      xmin = std::min(xmin, v);
      xmax = std::max(xmax, v);
    }
    for (double v : s.ys) {
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0; xmax = 1; ymin = 0; ymax = 1;
  }
  for (const Series& s : series_) {
    if (s.fit) {
      ymin = std::min({ymin, s.intercept + s.slope * xmin, s.intercept + s.slope * xmax});
      ymax = std::max({ymax, s.intercept + s.slope * xmin, s.intercept + s.slope * xmax});
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  const double xpad = 0.03 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
  xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

  auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft); };
  auto sy = [&](double y) { return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  if (!comment_.empty()) out << "<!-- " << comment_ << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"28\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"16\">" << escape(title_) << "</text>\n";

  // axes
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kBottom << "\" stroke=\"black\"/>\n";

  const double xstep = nice_step(xmax - xmin);
  for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-12; t += xstep) {
    out << "<line x1=\"" << sx(t) << "\" y1=\"" << kBottom << "\" x2=\"" << sx(t) << "\" y2=\""
        << kBottom + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << sx(t) << "\" y=\"" << kBottom + 20
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(t)
        << "</text>\n";
  }
  const double ystep = nice_step(ymax - ymin);
  for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-12; t += ystep) {
    out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << sy(t) << "\" x2=\"" << kLeft << "\" y2=\""
        << sy(t) << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft - 9 << "\" y=\"" << sy(t) + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(t)
        << "</text>\n";
  }
  out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 14
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
      << escape(x_label_) << "</text>\n";
  out << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
      << "transform=\"rotate(-90 18 " << (kTop + kBottom) / 2 << ")\">" << escape(y_label_)
      << "</text>\n";

  std::size_t color = 0;
  double legend_y = kTop + 4;
  for (const Series& s : series_) {
    const std::string stroke = kPalette[color % 10];
    ++color;
    if (s.fit) {
      out << "<line x1=\"" << sx(xmin) << "\" y1=\"" << sy(s.intercept + s.slope * xmin)
          << "\" x2=\"" << sx(xmax) << "\" y2=\"" << sy(s.intercept + s.slope * xmax)
          << "\" stroke=\"" << stroke << "\" stroke-dasharray=\"6 4\"/>\n";
    } else if (s.line) {
      out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        out << sx(s.xs[i]) << ',' << sy(s.ys[i]) << ' ';
      }
      out << "\"/>\n";
    } else {
      for (std::size_t i = 0; i < s.xs.size(); ++i) {
        out << "<circle cx=\"" << sx(s.xs[i]) << "\" cy=\"" << sy(s.ys[i])
            << "\" r=\"4\" fill=\"" << stroke << "\"/>\n";
        if (i < s.labels.size() && !s.labels[i].empty()) {
          out << "<text x=\"" << sx(s.xs[i]) + 6 << "\" y=\"" << sy(s.ys[i]) - 6
              << "\" font-family=\"sans-serif\" font-size=\"10\">" << escape(s.labels[i])
              << "</text>\n";
        }
      }
    }
    if (!s.name.empty()) {
      out << "<rect x=\"" << kRight - 150 << "\" y=\"" << legend_y << "\" width=\"12\" height=\"4\" fill=\""
          << stroke << "\"/>\n";
      out << "<text x=\"" << kRight - 132 << "\" y=\"" << legend_y + 6
          << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.name) << "</text>\n";
      legend_y += 16;
    }
  }
  out << "</svg>\n";
}

void SvgPlot::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write SVG: " + path);
  render(out);
}

}  // namespace polarity
