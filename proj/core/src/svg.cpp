#include <cstdio>
#include <string>

#include "omicsprep/powersim.hpp"

namespace omicsprep {
namespace {

constexpr double kWidth = 640, kHeight = 420;
constexpr double kLeft = 60, kRight = 180, kTop = 40, kBottom = 50;

// Fixed-point formatting keeps the SVG byte-stable and compact.
std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                          "#66a61e", "#e6ab02", "#a6761d", "#666666"};

}  // namespace

std::string curves_to_svg(const std::vector<PowerCurve>& curves, std::string_view title) {
  double x_min = 0.0, x_max = 0.0;
  bool first = true;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      x_min = first ? p.effect : std::min(x_min, p.effect);
      x_max = first ? p.effect : std::max(x_max, p.effect);
      first = false;
    }
  }
  if (x_max <= x_min) x_max = x_min + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * plot_w; };
  auto sy = [&](double y) { return kTop + (1.0 - y) * plot_h; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) +
         "\" height=\"" + num(kHeight) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out += "<text x=\"" + num(kLeft) + "\" y=\"24\" font-size=\"14\">" + xml_escape(title) +
         "</text>\n";

  // Axes, ticks and grid.
  out += "<g stroke=\"#999\" stroke-width=\"1\">\n";
  out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" +
         num(kLeft + plot_w) + "\" y2=\"" + num(sy(0)) + "\"/>\n";
  out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(sy(0)) + "\" x2=\"" + num(kLeft) +
         "\" y2=\"" + num(sy(1)) + "\"/>\n";
  out += "</g>\n<g fill=\"#333\">\n";
  for (int k = 0; k <= 5; ++k) {
    const double y = k / 5.0;
    out += "<text x=\"" + num(kLeft - 8) + "\" y=\"" + num(sy(y) + 4) +
           "\" text-anchor=\"end\">" + num(y).substr(0, 3) + "</text>\n";
    const double x = x_min + (x_max - x_min) * k / 5.0;
    out += "<text x=\"" + num(sx(x)) + "\" y=\"" + num(sy(0) + 18) +
           "\" text-anchor=\"middle\">" + num(x) + "</text>\n";
  }
  out += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 10) +
         "\" text-anchor=\"middle\">effect size</text>\n";
  out += "<text x=\"16\" y=\"" + num(kTop + plot_h / 2) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + num(kTop + plot_h / 2) +
         ")\">power</text>\n</g>\n";

  for (std::size_t k = 0; k < curves.size(); ++k) {
    const auto& c = curves[k];
    const char* colour = kPalette[k % std::size(kPalette)];
    std::string points;
    for (const auto& p : c.points) {
      if (!points.empty()) points.push_back(' ');
      points += num(sx(p.effect)) + "," + num(sy(p.power));
    }
    out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) +
           "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
    const double ly = kTop + 16.0 * static_cast<double>(k);
    const double lx = kWidth - kRight + 12;
    out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 20) +
           "\" y2=\"" + num(ly) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(lx + 26) + "\" y=\"" + num(ly + 4) + "\">" +
           xml_escape(c.scenario) + " sB=" + num(c.sigma_b) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace omicsprep
