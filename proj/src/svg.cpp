#include "cpforge/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cpforge {

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    std::string s = buf;
    while (s.size() > 1 && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    if (s == "-0") s = "0";
    return s;
}

struct Box {
    double min_x = 0, min_y = 0, max_x = 1, max_y = 1;
    void grow(double x, double y) {
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
        max_x = std::max(max_x, x);
        max_y = std::max(max_y, y);
    }
};

std::string svg_open(const Box& b) {
    const double pad = 0.05 * std::max(b.max_x - b.min_x, b.max_y - b.min_y) + 0.02;
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"";
    out += num(b.min_x - pad) + " " + num(b.min_y - pad) + " " +
           num(b.max_x - b.min_x + 2 * pad) + " " + num(b.max_y - b.min_y + 2 * pad) + "\">\n";
    // Flip the y axis so CP coordinates read the usual way.
    out += "<g transform=\"translate(0 " + num(b.max_y + b.min_y) + ") scale(1 -1)\">\n";
    return out;
}

const char* style_of(Assignment a) {
    switch (a) {
        case Assignment::B:
            return "stroke=\"#000000\" stroke-width=\"0.012\"";
        case Assignment::M:
            return "stroke=\"#d62728\" stroke-width=\"0.008\" "
                   "stroke-dasharray=\"0.03 0.01 0.006 0.01\"";
        case Assignment::V:
            return "stroke=\"#1f77b4\" stroke-width=\"0.008\" stroke-dasharray=\"0.02 0.02\"";
        case Assignment::F:
            return "stroke=\"#999999\" stroke-width=\"0.004\"";
        case Assignment::U:
            return "stroke=\"#2ca02c\" stroke-width=\"0.008\" stroke-dasharray=\"0.006 0.012\"";
    }
    return "stroke=\"#000000\" stroke-width=\"0.012\"";
}

}  // namespace

std::string render_cp_svg(const CreasePattern& cp) {
    Box box;
    for (const auto& p : cp.vertices_coords) box.grow(p.x, p.y);
    std::string out = svg_open(box);
    for (int e = 0; e < cp.edge_count(); ++e) {
        const auto& [a, b] = cp.edges_vertices[static_cast<size_t>(e)];
        const geom::Vec2 pa = cp.vertices_coords[static_cast<size_t>(a)];
        const geom::Vec2 pb = cp.vertices_coords[static_cast<size_t>(b)];
        out += "<line x1=\"" + num(pa.x) + "\" y1=\"" + num(pa.y) + "\" x2=\"" + num(pb.x) +
               "\" y2=\"" + num(pb.y) + "\" " + style_of(cp.assignment_of(e)) + " data-edge=\"" +
               std::to_string(e) + "\"/>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

std::string render_folded_svg(const nlohmann::ordered_json& doc) {
    Box box;
    if (doc.contains("P")) {
        for (const auto& p : doc.at("P")) box.grow(p[0].get<double>(), p[1].get<double>());
    }
    if (doc.contains("CF")) {
        for (const auto& cell : doc.at("CF")) {
            for (const auto& p : cell.at("polygon")) {
                box.grow(p[0].get<double>(), p[1].get<double>());
            }
        }
    }
    std::string out = svg_open(box);

    // Cell stacks, bottom of each stack first, offset and shaded per layer.
    if (doc.contains("CF")) {
        const double step = 0.015 * std::max(box.max_x - box.min_x, box.max_y - box.min_y);
        for (const auto& cell : doc.at("CF")) {
            const auto& faces = cell.at("faces");
            const size_t depth = faces.size();
            for (size_t i = depth; i-- > 0;) {  // bottom first
                const size_t layer = depth - 1 - i;
                const double off = step * static_cast<double>(layer);
                const int shade = 235 - static_cast<int>(std::min<size_t>(layer, 9) * 18);
                std::string points;
                for (const auto& p : cell.at("polygon")) {
                    points += num(p[0].get<double>() + off) + "," +
                              num(p[1].get<double>() + off) + " ";
                }
                out += "<polygon points=\"" + points + "\" fill=\"rgb(" +
                       std::to_string(shade) + "," + std::to_string(shade) + "," +
                       std::to_string(shade) +
                       ")\" stroke=\"#333333\" stroke-width=\"0.004\" data-face=\"" +
                       faces[i].dump() + "\"/>\n";
            }
        }
    }
    // Crease marks with their source edge ids.
    if (doc.contains("SP") && doc.contains("P")) {
        const auto& points = doc.at("P");
        for (const auto& seg : doc.at("SP")) {
            const auto& pa = points[seg[0].get<size_t>()];
            const auto& pb = points[seg[1].get<size_t>()];
            out += "<line x1=\"" + num(pa[0].get<double>()) + "\" y1=\"" +
                   num(pa[1].get<double>()) + "\" x2=\"" + num(pb[0].get<double>()) +
                   "\" y2=\"" + num(pb[1].get<double>()) +
                   "\" stroke=\"#d62728\" stroke-width=\"0.006\" data-source-edge=\"" +
                   seg[2].dump() + "\"><title>edge " + seg[2].dump() + "</title></line>\n";
        }
    }
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace cpforge
