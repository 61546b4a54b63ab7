#include "rcm/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_set>

namespace rcm {

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

std::string render_svg(const Complex& cx, const RenderStyle& style, const ExplorationTrace* trace) {
  if (cx.grid.d != 2) throw std::invalid_argument("render_svg: rendering is 2-D only");
  const CubeGrid& grid = cx.grid;

  double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
  bool first = true;
  for (const std::int64_t cube : cx.window.cubes) {
    const Vec lo = grid.cube_low(cube);
    if (first) {
      xmin = lo[0]; ymin = lo[1];
      xmax = lo[0] + grid.side(); ymax = lo[1] + grid.side();
      first = false;
    } else {
      xmin = std::min(xmin, lo[0]);
      ymin = std::min(ymin, lo[1]);
      xmax = std::max(xmax, lo[0] + grid.side());
      ymax = std::max(ymax, lo[1] + grid.side());
    }
  }
  const double pad = 0.25 * grid.side();
  xmin -= pad; ymin -= pad; xmax += pad; ymax += pad;
  const double scale = style.pixels_per_unit;
  const double width = (xmax - xmin) * scale;
  const double height = (ymax - ymin) * scale;
  const auto px = [&](double x) { return (x - xmin) * scale; };
  const auto py = [&](double y) { return (ymax - y) * scale; };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" +
         num(height) + "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

  // revealed cubes shaded first, beneath everything else
  if (trace) {
    std::unordered_set<std::int64_t> revealed(trace->revealed.begin(), trace->revealed.end());
    for (const std::int64_t cube : trace->revealed) {
      const Vec lo = grid.cube_low(cube);
      svg += "<rect x=\"" + num(px(lo[0])) + "\" y=\"" + num(py(lo[1] + grid.side())) +
             "\" width=\"" + num(grid.side() * scale) + "\" height=\"" + num(grid.side() * scale) +
             "\" fill=\"#e8e8e8\"/>\n";
    }
  }

  // cube grid
  svg += "<g stroke=\"#cccccc\" stroke-width=\"0.5\" fill=\"none\">\n";
  for (const std::int64_t cube : cx.window.cubes) {
    const Vec lo = grid.cube_low(cube);
    svg += "<rect x=\"" + num(px(lo[0])) + "\" y=\"" + num(py(lo[1] + grid.side())) +
           "\" width=\"" + num(grid.side() * scale) + "\" height=\"" + num(grid.side() * scale) +
           "\"/>\n";
  }
  svg += "</g>\n";

  // components of G_q touching the sphere of radius s are drawn in blue
  std::vector<std::uint8_t> blue_vertex(cx.verts.size(), 0);
  if (style.s > 0.0 && cx.alpha >= 1 && style.q < cx.alpha) {
    const QGraph g = up_graph(cx, style.q);
    std::unordered_set<std::uint32_t> in_roots, out_roots;
    for (std::uint32_t i = 0; i < g.vertices.size(); ++i) {
      const Simplex& sim = g.vertices[i];
      bool inside = false, outside = false;
      for (int k = 0; k < sim.n; ++k) {
        const double rad = norm(cx.verts[sim[k]].pos);
        if (rad <= style.s) inside = true;
        if (rad >= style.s) outside = true;
      }
      if (inside) in_roots.insert(g.component[i]);
      if (outside) out_roots.insert(g.component[i]);
    }
    for (std::uint32_t i = 0; i < g.vertices.size(); ++i) {
      const std::uint32_t root = g.component[i];
      if (in_roots.count(root) && out_roots.count(root))
        for (int k = 0; k < g.vertices[i].n; ++k) blue_vertex[g.vertices[i][k]] = 1;
    }
  }

  // filled 2-simplices
  if (cx.alpha >= 2) {
    svg += "<g stroke=\"none\">\n";
    for (const Simplex& s2 : cx.faces(2)) {
      const bool blue = blue_vertex[s2[0]] && blue_vertex[s2[1]] && blue_vertex[s2[2]];
      svg += "<polygon points=\"";
      for (int k = 0; k < 3; ++k) {
        const Vec& p = cx.verts[s2[k]].pos;
        svg += num(px(p[0])) + "," + num(py(p[1]));
        if (k < 2) svg += " ";
      }
      svg += std::string("\" fill=\"") + (blue ? "#1f77b4" : "#999999") + "\" fill-opacity=\"0.35\"/>\n";
    }
    svg += "</g>\n";
  }

  // edges
  svg += "<g stroke-width=\"1\">\n";
  for (const Simplex& e : cx.faces(1)) {
    const Vec& a = cx.verts[e[0]].pos;
    const Vec& b = cx.verts[e[1]].pos;
    const bool blue = blue_vertex[e[0]] && blue_vertex[e[1]];
    svg += "<line x1=\"" + num(px(a[0])) + "\" y1=\"" + num(py(a[1])) + "\" x2=\"" +
           num(px(b[0])) + "\" y2=\"" + num(py(b[1])) + "\" stroke=\"" +
           (blue ? "#1f77b4" : "#555555") + "\"/>\n";
  }
  svg += "</g>\n";

  // points
  svg += "<g stroke=\"none\">\n";
  for (std::uint32_t i = 0; i < cx.verts.size(); ++i) {
    const Vec& p = cx.verts[i].pos;
    const char* fill = cx.verts[i].is_origin ? "#d62728" : (blue_vertex[i] ? "#1f77b4" : "#222222");
    svg += "<circle cx=\"" + num(px(p[0])) + "\" cy=\"" + num(py(p[1])) + "\" r=\"" +
           num(cx.verts[i].is_origin ? 3.0 : 1.8) + "\" fill=\"" + fill + "\"/>\n";
  }
  svg += "</g>\n";

  // circles of radius s and r
  const auto circle = [&](double radius, const char* color) {
    svg += "<circle cx=\"" + num(px(0.0)) + "\" cy=\"" + num(py(0.0)) + "\" r=\"" +
           num(radius * scale) + "\" fill=\"none\" stroke=\"" + color +
           "\" stroke-width=\"1.2\" stroke-dasharray=\"6,4\"/>\n";
  };
  if (style.s > 0.0) circle(style.s, "#1f77b4");
  if (style.r > 0.0) circle(style.r, "#d62728");

  svg += "</svg>\n";
  return svg;
}

}  // namespace rcm
