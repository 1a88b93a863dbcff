#include "billiard/render.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace billiard {

namespace {

struct Frame {
    double xmin, xmax, ymin, ymax;
    int width, height;
    double margin = 30.0;

    double sx(double x) const { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); }
    double sy(double y) const { return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin); }
};

void header(std::ostringstream& o, const RenderSpec& spec) {
    o << std::fixed << std::setprecision(3);
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n";
    o << "<rect x=\"0\" y=\"0\" width=\"" << spec.width << "\" height=\"" << spec.height << "\" fill=\"#ffffff\"/>\n";
}

void polyline(std::ostringstream& o, const std::vector<std::pair<double, double>>& pts, const std::string& stroke,
              double width, const std::string& extra = "") {
    o << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width << "\"" << extra
      << " points=\"";
    for (const auto& [x, y] : pts) o << x << ',' << y << ' ';
    o << "\"/>\n";
}

}  // namespace

std::vector<std::pair<Vec2, Vec2>> orbit_chords(const Boundary& b, const PeriodicLift& lift) {
    std::vector<std::pair<Vec2, Vec2>> out;
    for (int i = 1; i <= lift.p(); ++i) out.emplace_back(b.gamma(lift.at(i)), b.gamma(lift.at(i + 1)));
    return out;
}

std::string render_orbit_svg(const Boundary& b, const PeriodicLift& lift, const RenderSpec& spec) {
    const int samples = 720;
    std::vector<Vec2> outline(samples + 1);
    Frame f{std::numeric_limits<double>::max(), -std::numeric_limits<double>::max(),
            std::numeric_limits<double>::max(), -std::numeric_limits<double>::max(), spec.width, spec.height};
    for (int i = 0; i <= samples; ++i) {
        outline[i] = b.gamma(static_cast<double>(i) / samples);
        f.xmin = std::min(f.xmin, outline[i].x());
        f.xmax = std::max(f.xmax, outline[i].x());
        f.ymin = std::min(f.ymin, outline[i].y());
        f.ymax = std::max(f.ymax, outline[i].y());
    }
    // equal aspect
    const double span = std::max(f.xmax - f.xmin, f.ymax - f.ymin);
    const double cx = 0.5 * (f.xmin + f.xmax), cy = 0.5 * (f.ymin + f.ymax);
    f.xmin = cx - 0.5 * span, f.xmax = cx + 0.5 * span;
    f.ymin = cy - 0.5 * span, f.ymax = cy + 0.5 * span;

    std::ostringstream o;
    header(o, spec);
    std::vector<std::pair<double, double>> pts;
    for (const auto& v : outline) pts.emplace_back(f.sx(v.x()), f.sy(v.y()));
    polyline(o, pts, spec.boundary_stroke, spec.stroke_width);

    auto draw_lift = [&](const PeriodicLift& l, const std::string& stroke, double w) {
        std::vector<std::pair<double, double>> path;
        for (int i = 1; i <= l.p() + 1; ++i) {
            const Vec2 z = b.gamma(l.at(i));
            path.emplace_back(f.sx(z.x()), f.sy(z.y()));
        }
        polyline(o, path, stroke, w, " stroke-linejoin=\"round\"");
    };
    if (spec.overlay_birkhoff && spec.birkhoff_n >= 2) {
        draw_lift(symmetric_birkhoff(spec.birkhoff_n, spec.birkhoff_m, 1), "#d62728", 1.0);
        draw_lift(symmetric_birkhoff(spec.birkhoff_n, spec.birkhoff_m, 0), "#17becf", 1.0);
    }
    draw_lift(lift, spec.orbit_stroke, spec.stroke_width);

    for (int i = 1; i <= lift.p(); ++i) {
        const Vec2 z = b.gamma(lift.at(i));
        o << "<circle cx=\"" << f.sx(z.x()) << "\" cy=\"" << f.sy(z.y()) << "\" r=\"3\" fill=\"" << spec.orbit_stroke
          << "\"/>\n";
        if (spec.label_points) {
            const double r = z.norm() > 0 ? 1.0 + 14.0 / (spec.width - 60.0) * span : 1.0;
            o << "<text x=\"" << f.sx(cx + (z.x() - cx) * r) << "\" y=\"" << f.sy(cy + (z.y() - cy) * r)
              << "\" font-size=\"11\" text-anchor=\"middle\" dominant-baseline=\"middle\">" << i << "</text>\n";
        }
    }
    o << "</svg>\n";
    return o.str();
}

std::string render_aubry_svg(const PeriodicLift& lift, const RenderSpec& spec) {
    const auto base = aubry_diagram(lift);
    Frame f{1.0, static_cast<double>(lift.p() + 1), std::numeric_limits<double>::max(),
            -std::numeric_limits<double>::max(), spec.width, spec.height};
    for (int t = 0; t <= spec.translates; ++t) {
        for (const auto& [i, x] : base.vertices) {
            f.ymin = std::min(f.ymin, x + t);
            f.ymax = std::max(f.ymax, x + t);
        }
    }
    if (f.ymax - f.ymin < 1e-12) f.ymax = f.ymin + 1.0;

    std::ostringstream o;
    header(o, spec);
    o << "<line x1=\"" << f.margin << "\" y1=\"" << spec.height - f.margin << "\" x2=\"" << spec.width - f.margin
      << "\" y2=\"" << spec.height - f.margin << "\" stroke=\"#888888\" stroke-width=\"1\"/>\n";
    for (int t = 0; t <= spec.translates; ++t) {
        std::vector<std::pair<double, double>> pts;
        for (const auto& [i, x] : aubry_diagram(lift, t).vertices) pts.emplace_back(f.sx(i), f.sy(x));
        polyline(o, pts, spec.orbit_stroke, spec.stroke_width, t == 0 ? "" : " stroke-dasharray=\"5,4\"");
    }
    o << "</svg>\n";
    return o.str();
}

}  // namespace billiard
