#pragma once

#include "billiard/geometry.hpp"
#include "billiard/sequences.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace billiard {

enum class RenderMode { OrbitFigure, AubryDiagram };

struct RenderSpec {
    RenderMode mode = RenderMode::OrbitFigure;
    int width = 600;
    int height = 600;
    std::string boundary_stroke = "#000000";
    std::string orbit_stroke = "#1f3fbf";
    double stroke_width = 1.5;
    bool label_points = true;
    // red = short (A odd), cyan = long (A even) symmetric Birkhoff orbits
    bool overlay_birkhoff = false;
    int birkhoff_n = 0;
    int birkhoff_m = 0;
    int translates = 0;
};

// Chords in traversal order: gamma(x_1) -> ... -> gamma(x_p) -> gamma(x_1 + q).
std::vector<std::pair<Vec2, Vec2>> orbit_chords(const Boundary& b, const PeriodicLift& lift);

std::string render_orbit_svg(const Boundary& b, const PeriodicLift& lift, const RenderSpec& spec);
std::string render_aubry_svg(const PeriodicLift& lift, const RenderSpec& spec);

}  // namespace billiard
