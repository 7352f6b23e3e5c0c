#pragma once

#include <cstdio>
#include <string>

#include "omax/boundary.hpp"

namespace omax {

/// CSV for a boundary sweep: theta, support_value, point_re, point_im,
/// multiplicity. %.17g keeps the output byte-stable across runs.
inline std::string boundary_to_csv(const NRBoundary& b) {
    std::string out = "theta,support_value,point_re,point_im,multiplicity\n";
    char line[196];
    for (size_t k = 0; k < b.samples.size(); ++k) {
        const SupportSample& s = b.samples[k];
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g,%d\n", b.thetas[k], s.value,
                      s.point[0], s.point[1], s.multiplicity);
        out += line;
    }
    return out;
}

/// Minimal SVG: the support polyline, with detected flat portions drawn in a
/// second stroke.
inline std::string boundary_to_svg(const NRBoundary& b, const std::vector<FlatPortion>& flats) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : b.samples) {
        xmin = std::min(xmin, s.point[0]);
        xmax = std::max(xmax, s.point[0]);
        ymin = std::min(ymin, s.point[1]);
        ymax = std::max(ymax, s.point[1]);
    }
    const double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    const double pad = 0.08 * span;
    const double scale = 560.0 / (span + 2 * pad);
    auto tx = [&](double x) { return (x - xmin + pad) * scale + 20; };
    auto ty = [&](double y) { return 580.0 - ((y - ymin + pad) * scale + 20); };

    char buf[160];
    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" height=\"600\" "
                      "viewBox=\"0 0 600 600\">\n";
    svg += "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
    for (const auto& s : b.samples) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f ", tx(s.point[0]), ty(s.point[1]));
        svg += buf;
    }
    if (!b.samples.empty()) {
        std::snprintf(buf, sizeof(buf), "%.6f,%.6f", tx(b.samples[0].point[0]),
                      ty(b.samples[0].point[1]));
        svg += buf;
    }
    svg += "\"/>\n";
    for (const auto& f : flats) {
        std::snprintf(buf, sizeof(buf),
                      "<line x1=\"%.6f\" y1=\"%.6f\" x2=\"%.6f\" y2=\"%.6f\" stroke=\"#d1495b\" "
                      "stroke-width=\"3\"/>\n",
                      tx(f.a.real()), ty(f.a.imag()), tx(f.b.real()), ty(f.b.imag()));
        svg += buf;
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace omax
