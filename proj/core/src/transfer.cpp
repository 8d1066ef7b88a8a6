#include "frf/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <unordered_map>

#include "frf/error.hpp"

namespace frf {

namespace {

constexpr const char* kStage = "transfer";
constexpr double kInsideTol = -1e-12;

void require_same_template(const std::string& a, const std::string& b) {
  if (a != b) throw Error(ErrorCode::kMismatch, kStage, "template mismatch (" + a + " vs " + b + ")");
}

}  // namespace

GridIndex::GridIndex(const std::vector<Vec2>& points) : points_(&points) {
  if (points.empty()) throw Error(ErrorCode::kInvalidArgument, kStage, "empty point set");
  Vec2 lo = points.front(), hi = lo;
  for (const Vec2& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec2 extent = (hi - lo).cwiseMax(Vec2(1e-12, 1e-12));
  const double cells = std::max(1.0, std::sqrt(static_cast<double>(points.size())));
  size_ = std::max(extent.x(), extent.y()) / cells;
  origin_ = lo;
  nx_ = std::max(1, static_cast<int>(std::floor(extent.x() / size_)) + 1);
  ny_ = std::max(1, static_cast<int>(std::floor(extent.y() / size_)) + 1);
  std::vector<int> count(static_cast<std::size_t>(nx_) * ny_ + 1, 0);
  for (const Vec2& p : points) {
    const auto [cx, cy] = coords(p);
    ++count[static_cast<std::size_t>(cell(cx, cy)) + 1];
  }
  for (std::size_t i = 1; i < count.size(); ++i) count[i] += count[i - 1];
  start_ = count;
  items_.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [cx, cy] = coords(points[i]);
    items_[static_cast<std::size_t>(count[static_cast<std::size_t>(cell(cx, cy))]++)] = static_cast<int>(i);
  }
}

std::pair<int, int> GridIndex::coords(const Vec2& p) const {
  const int cx = std::clamp(static_cast<int>(std::floor((p.x() - origin_.x()) / size_)), 0, nx_ - 1);
  const int cy = std::clamp(static_cast<int>(std::floor((p.y() - origin_.y()) / size_)), 0, ny_ - 1);
  return {cx, cy};
}

int GridIndex::nearest(const Vec2& q) const {
  const auto [qx, qy] = coords(q);
  double best = std::numeric_limits<double>::infinity();
  int best_id = -1;
  for (int ring = 0;; ++ring) {
    // Every point in a cell at Chebyshev ring distance `ring` is at least
    // (ring - 1) * size away from q once q is clamped inside the grid.
    if (best_id >= 0) {
      const double outside = std::max(0.0, (ring - 1) * size_);
      if (outside * outside > best) break;
    }
    if (ring > nx_ + ny_) break;
    for (int cy = qy - ring; cy <= qy + ring; ++cy) {
      if (cy < 0 || cy >= ny_) continue;
      for (int cx = qx - ring; cx <= qx + ring; ++cx) {
        if (cx < 0 || cx >= nx_) continue;
        if (std::max(std::abs(cx - qx), std::abs(cy - qy)) != ring) continue;
        const int c = cell(cx, cy);
        for (int k = start_[static_cast<std::size_t>(c)]; k < start_[static_cast<std::size_t>(c) + 1]; ++k) {
          const int id = items_[static_cast<std::size_t>(k)];
          const double d = ((*points_)[static_cast<std::size_t>(id)] - q).squaredNorm();
          if (d < best || (d == best && id < best_id)) {
            best = d;
            best_id = id;
          }
        }
      }
    }
  }
  return best_id;
}

nlohmann::json to_json(const Parcellation2D& p) {
  nlohmann::json legend = nlohmann::json::object();
  for (const auto& [code, name] : p.legend) legend[std::to_string(code)] = name;
  return {{"templateHash", p.template_hash}, {"codes", p.codes}, {"legend", legend}};
}

Parcellation2D parcellation_from_json(const nlohmann::json& j) {
  try {
    Parcellation2D p;
    p.template_hash = j.at("templateHash").get<std::string>();
    p.codes = j.at("codes").get<std::vector<int>>();
    for (const auto& [k, v] : j.at("legend").items()) p.legend[std::stoi(k)] = v.get<std::string>();
    for (int c : p.codes) {
      if (!p.legend.count(c)) throw Error(ErrorCode::kParse, kStage, "code " + std::to_string(c) + " missing from legend");
    }
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, kStage, std::string("malformed parcellation: ") + e.what());
  }
}

Parcellation2D annulus_parcellation(const FlatMesh& ref, const TemplateSpec& spec, AnnulusPreset preset,
                                    double width_factor) {
  if (!(width_factor > 0.0)) throw Error(ErrorCode::kInvalidArgument, kStage, "annulus width must be positive");
  require_same_template(ref.template_hash, template_hash(spec));
  Parcellation2D out;
  out.template_hash = ref.template_hash;
  const std::array<Hole, 4> veins{Hole::kLIPV, Hole::kLSPV, Hole::kRIPV, Hole::kRSPV};
  if (preset == AnnulusPreset::kPerVein) {
    out.legend = {{0, "background"}, {1, "LIPV"}, {2, "LSPV"}, {3, "RIPV"}, {4, "RSPV"}};
  } else {
    out.legend = {{0, "background"}, {1, "left veins"}, {2, "right veins"}};
  }
  out.codes.assign(ref.points.size(), 0);
  for (std::size_t v = 0; v < ref.points.size(); ++v) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < veins.size(); ++k) {
      const HoleCircle& c = spec.hole(veins[k]);
      const double d = (ref.points[v] - c.center).norm() - c.radius;
      if (d < -1e-12 || d > width_factor * c.radius || d >= best) continue;
      best = d;
      out.codes[v] = preset == AnnulusPreset::kPerVein ? static_cast<int>(k) + 1 : (k < 2 ? 1 : 2);
    }
  }
  return out;
}

std::vector<int> map_parcellation(const FlatMesh& ref, const Parcellation2D& parcellation, const FlatMesh& target) {
  require_same_template(ref.template_hash, target.template_hash);
  require_same_template(parcellation.template_hash, ref.template_hash);
  if (parcellation.codes.size() != ref.points.size()) {
    throw Error(ErrorCode::kMismatch, kStage, "parcellation does not match the reference map");
  }
  const GridIndex index(ref.points);
  std::vector<int> out(target.points.size());
  for (std::size_t v = 0; v < target.points.size(); ++v) {
    out[v] = parcellation.codes[static_cast<std::size_t>(index.nearest(target.points[v]))];
  }
  return out;
}

std::vector<int> lift_to_3d(const FlatMesh& flat, const std::vector<int>& codes, const TriMesh& source) {
  if (codes.size() != flat.points.size()) throw Error(ErrorCode::kMismatch, kStage, "code count differs from vertex count");
  std::unordered_map<std::int64_t, int> by_id;
  by_id.reserve(codes.size());
  for (std::size_t v = 0; v < codes.size(); ++v) by_id.emplace(flat.provenance[v], codes[v]);
  std::vector<int> out(static_cast<std::size_t>(source.vertex_count()));
  for (int v = 0; v < source.vertex_count(); ++v) {
    auto it = by_id.find(source.provenance()[static_cast<std::size_t>(v)]);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kMismatch, kStage,
                  "provenance id " + std::to_string(source.provenance()[static_cast<std::size_t>(v)]) + " missing from map", v);
    }
    out[static_cast<std::size_t>(v)] = it->second;
  }
  return out;
}

std::vector<PairedSample> compare_maps(const FlatMesh& a, const std::string& channel_a, const FlatMesh& b,
                                       const std::string& channel_b) {
  require_same_template(a.template_hash, b.template_hash);
  auto ita = a.channels.find(channel_a);
  auto itb = b.channels.find(channel_b);
  if (ita == a.channels.end()) throw Error(ErrorCode::kInvalidArgument, kStage, "map A has no channel '" + channel_a + "'");
  if (itb == b.channels.end()) throw Error(ErrorCode::kInvalidArgument, kStage, "map B has no channel '" + channel_b + "'");
  const auto& va = ita->second;
  const auto& vb = itb->second;

  const GridIndex vertices(b.points);
  // Triangle buckets over the same kind of grid: one entry per overlapped cell.
  Vec2 lo = b.points.front(), hi = lo;
  for (const Vec2& p : b.points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const int cells = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(b.faces.size()))));
  const Vec2 extent = (hi - lo).cwiseMax(Vec2(1e-12, 1e-12));
  const double size = std::max(extent.x(), extent.y()) / cells;
  const int nx = static_cast<int>(extent.x() / size) + 1, ny = static_cast<int>(extent.y() / size) + 1;
  auto cx_of = [&](double x) { return std::clamp(static_cast<int>(std::floor((x - lo.x()) / size)), 0, nx - 1); };
  auto cy_of = [&](double y) { return std::clamp(static_cast<int>(std::floor((y - lo.y()) / size)), 0, ny - 1); };
  std::vector<std::vector<int>> bucket(static_cast<std::size_t>(nx) * ny);
  for (std::size_t f = 0; f < b.faces.size(); ++f) {
    const Face& t = b.faces[f];
    Vec2 flo = b.points[static_cast<std::size_t>(t[0])], fhi = flo;
    for (int k = 1; k < 3; ++k) {
      flo = flo.cwiseMin(b.points[static_cast<std::size_t>(t[k])]);
      fhi = fhi.cwiseMax(b.points[static_cast<std::size_t>(t[k])]);
    }
    for (int y = cy_of(flo.y()); y <= cy_of(fhi.y()); ++y)
      for (int x = cx_of(flo.x()); x <= cx_of(fhi.x()); ++x) bucket[static_cast<std::size_t>(y) * nx + x].push_back(static_cast<int>(f));
  }

  std::vector<PairedSample> out(a.points.size());
  for (std::size_t v = 0; v < a.points.size(); ++v) {
    const Vec2& q = a.points[v];
    out[v].vertex = static_cast<int>(v);
    out[v].a = va[v];
    const int near = vertices.nearest(q);
    if (b.points[static_cast<std::size_t>(near)] == q) {
      out[v].b = vb[static_cast<std::size_t>(near)];
      continue;
    }
    bool found = false;
    if (q.x() >= lo.x() && q.x() <= hi.x() && q.y() >= lo.y() && q.y() <= hi.y()) {
      for (int f : bucket[static_cast<std::size_t>(cy_of(q.y())) * nx + cx_of(q.x())]) {
        const Face& t = b.faces[static_cast<std::size_t>(f)];
        const Vec2& p0 = b.points[static_cast<std::size_t>(t[0])];
        const Vec2& p1 = b.points[static_cast<std::size_t>(t[1])];
        const Vec2& p2 = b.points[static_cast<std::size_t>(t[2])];
        const double area = signed_area(p0, p1, p2);
        if (area == 0.0) continue;
        const double w0 = signed_area(q, p1, p2) / area;
        const double w1 = signed_area(p0, q, p2) / area;
        const double w2 = 1.0 - w0 - w1;
        if (w0 < kInsideTol || w1 < kInsideTol || w2 < kInsideTol) continue;
        out[v].b = w0 * vb[static_cast<std::size_t>(t[0])] + w1 * vb[static_cast<std::size_t>(t[1])] +
                   w2 * vb[static_cast<std::size_t>(t[2])];
        found = true;
        break;  // buckets list faces in increasing id
      }
    }
    if (!found) out[v].b = vb[static_cast<std::size_t>(near)];
  }
  return out;
}

void write_pairs_csv(const std::vector<PairedSample>& pairs, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, kStage, "cannot write '" + path.string() + "'");
  out << "vertexId,valueA,valueB\n";
  char buf[96];
  for (const auto& p : pairs) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g\n", p.vertex, p.a, p.b);
    out << buf;
  }
}

}  // namespace frf
