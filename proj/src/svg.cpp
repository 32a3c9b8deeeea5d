#include "layoutforge/svg.hpp"

#include <cstdio>
#include <numbers>
#include <sstream>

namespace layoutforge {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
                          "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac"};

}  // namespace

std::string render_svg(const Scene& scene, const std::vector<std::size_t>& group_of,
                       const SvgOptions& options) {
  const Bounds2<double> box = scene.room.bounds();
  const double s = options.pixels_per_meter;
  const double x0 = box.min.x() - options.margin;
  const double z1 = box.max.y() + options.margin;
  auto px = [&](const Vec2d& p) { return num((p.x() - x0) * s) + "," + num((z1 - p.y()) * s); };
  auto polygon = [&](const auto& points, const std::string& cls) {
    std::string pts;
    for (const auto& p : points) pts += (pts.empty() ? "" : " ") + px(p);
    return "  <polygon class=\"" + cls + "\" points=\"" + pts + "\"/>\n";
  };

  const Vec2d size = box.size() + Vec2d::Constant(2 * options.margin);
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(size.x() * s)
      << "\" height=\"" << num(size.y() * s) << "\" viewBox=\"0 0 " << num(size.x() * s) << " "
      << num(size.y() * s) << "\">\n"
      << "  <title>" << escape(scene.id) << "</title>\n"
      << "  <style>.room{fill:#f7f7f2;stroke:#333;stroke-width:3}"
      << ".door{fill:#8c6d46}.door-clearance{fill:#8c6d46;fill-opacity:0.15;stroke:#8c6d46;"
      << "stroke-dasharray:4 3}.window{fill:#9ecae1}.object{fill-opacity:0.75;stroke:#222}</style>\n";
  out << polygon(scene.room.floor, "room");
  for (const auto& door : scene.room.doors) {
    if (options.show_clearance) {
      out << polygon(door_clearance(scene.room.floor, door, options.door_clearance_scale).corners(),
                     "door-clearance");
    }
    out << polygon(door.rect.corners(), "door");
  }
  for (const auto& window : scene.room.windows) out << polygon(window.rect.corners(), "window");

  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    const auto& o = scene.objects[i];
    if (!o.transform) continue;
    const std::size_t g = i < group_of.size() ? group_of[i] : 0;
    const double cx = (o.transform->x - x0) * s;
    const double cy = (z1 - o.transform->z) * s;
    const double w = o.instance.width * s;
    const double d = o.instance.depth * s;
    const double degrees = -o.transform->theta * 180 / std::numbers::pi;
    out << "  <rect class=\"object group-" << g << "\" data-instance=\""
        << escape(o.instance.instance_id) << "\" x=\"" << num(cx - w / 2) << "\" y=\""
        << num(cy - d / 2) << "\" width=\"" << num(w) << "\" height=\"" << num(d)
        << "\" fill=\"" << kPalette[g % std::size(kPalette)] << "\" transform=\"rotate("
        << num(degrees) << " " << num(cx) << " " << num(cy) << ")\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::string render_svg(const LayoutResult& result, const SvgOptions& options) {
  std::vector<std::size_t> group_of(result.scene.objects.size(), 0);
  for (const auto& g : result.grouping.groups) {
    for (const auto& m : g.members) group_of.at(m.vertex) = g.id;
  }
  return render_svg(result.scene, group_of, options);
}

}  // namespace layoutforge
