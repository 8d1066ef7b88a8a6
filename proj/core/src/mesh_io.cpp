#include "frf/mesh_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "frf/error.hpp"

namespace frf {

namespace {

constexpr const char* kStage = "mesh-io";

MeshFormat resolve(const std::filesystem::path& path, MeshFormat format) {
  if (format != MeshFormat::kAuto) return format;
  const std::string ext = path.extension().string();
  if (ext == ".obj" || ext == ".OBJ") return MeshFormat::kObj;
  if (ext == ".vtk" || ext == ".VTK") return MeshFormat::kVtk;
  throw Error(ErrorCode::kInvalidArgument, kStage, "cannot infer mesh format from '" + path.string() + "'");
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(std::string_view token, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kParse, kStage, "bad number '" + std::string(token) + "' in " + where);
  }
  return v;
}

long long parse_int(std::string_view token, const std::string& where) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::kParse, kStage, "bad integer '" + std::string(token) + "' in " + where);
  }
  return v;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, kStage, "cannot open '" + path.string() + "'");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, kStage, "cannot write '" + path.string() + "'");
  return out;
}

TriMesh assemble(std::vector<Vec3> vertices, std::vector<Face> faces, Channels channels,
                 Channels face_channels, bool check_area) {
  std::vector<std::int64_t> provenance;
  auto it = channels.find(kProvenanceChannel);
  if (it != channels.end()) {
    if (it->second.size() != vertices.size()) {
      throw Error(ErrorCode::kParse, kStage, "provenance column length differs from vertex count");
    }
    provenance.reserve(it->second.size());
    for (double v : it->second) provenance.push_back(static_cast<std::int64_t>(v));
    channels.erase(it);
  }
  return TriMesh(std::move(vertices), std::move(faces), std::move(channels), std::move(face_channels),
                 std::move(provenance), check_area);
}

// OBJ face tokens may look like "7", "7/2" or "7/2/3"; negative indices are relative.
int obj_index(std::string_view token, int vertex_count, const std::string& where) {
  const auto slash = token.find('/');
  const long long raw = parse_int(token.substr(0, slash), where);
  if (raw > 0) return static_cast<int>(raw - 1);
  if (raw < 0) return static_cast<int>(vertex_count + raw);
  throw Error(ErrorCode::kParse, kStage, "zero vertex index in " + where);
}

TriMesh load_obj(const std::filesystem::path& path, bool check_area) {
  std::ifstream in = open_in(path);
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag) || tag[0] == '#') continue;
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    if (tag == "v") {
      std::string x, y, z;
      if (!(ss >> x >> y >> z)) throw Error(ErrorCode::kParse, kStage, "short vertex record at " + where);
      vertices.emplace_back(parse_double(x, where), parse_double(y, where), parse_double(z, where));
    } else if (tag == "f") {
      std::vector<int> idx;
      std::string tok;
      while (ss >> tok) idx.push_back(obj_index(tok, static_cast<int>(vertices.size()), where));
      if (idx.size() != 3) {
        throw Error(ErrorCode::kInvalidMesh, kStage,
                    "face " + std::to_string(faces.size()) + " at " + where + " has " +
                        std::to_string(idx.size()) + " vertices; only triangles are supported");
      }
      faces.push_back({idx[0], idx[1], idx[2]});
    }
  }

  Channels channels;
  const auto sidecar = channels_sidecar(path);
  if (std::filesystem::exists(sidecar)) {
    std::ifstream cs = open_in(sidecar);
    std::string row;
    int row_no = 0;
    while (std::getline(cs, row)) {
      ++row_no;
      if (row.empty()) continue;
      if (row_no == 1 && row.rfind("vertexId", 0) == 0) continue;
      const std::string where = sidecar.filename().string() + ":" + std::to_string(row_no);
      const auto c1 = row.find(',');
      const auto c2 = row.find(',', c1 == std::string::npos ? c1 : c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos) {
        throw Error(ErrorCode::kParse, kStage, "expected vertexId,channel,value at " + where);
      }
      const long long vid = parse_int(std::string_view(row).substr(0, c1), where);
      const std::string name = row.substr(c1 + 1, c2 - c1 - 1);
      std::string_view value = std::string_view(row).substr(c2 + 1);
      if (!value.empty() && value.back() == '\r') value.remove_suffix(1);
      if (vid < 0 || vid >= static_cast<long long>(vertices.size())) {
        throw Error(ErrorCode::kParse, kStage, "vertex id out of range at " + where);
      }
      auto& column = channels[name];
      column.resize(vertices.size(), 0.0);
      column[static_cast<std::size_t>(vid)] = parse_double(value, where);
    }
  }
  return assemble(std::move(vertices), std::move(faces), std::move(channels), {}, check_area);
}

void save_obj(const TriMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  for (const Vec3& p : mesh.vertices()) {
    out << "v " << fmt17(p.x()) << ' ' << fmt17(p.y()) << ' ' << fmt17(p.z()) << '\n';
  }
  for (const Face& f : mesh.faces()) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';

  std::ofstream cs = open_out(channels_sidecar(path));
  cs << "vertexId,channel,value\n";
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    cs << v << ',' << kProvenanceChannel << ',' << mesh.provenance()[static_cast<std::size_t>(v)] << '\n';
  }
  for (const auto& [name, values] : mesh.channels()) {
    for (std::size_t v = 0; v < values.size(); ++v) cs << v << ',' << name << ',' << fmt17(values[v]) << '\n';
  }
}

// Whitespace tokenizer over the whole VTK file.
class Tokens {
 public:
  explicit Tokens(std::istream& in) : in_(in) {}
  bool next(std::string& tok) { return static_cast<bool>(in_ >> tok); }
  std::string expect(const char* what) {
    std::string tok;
    if (!next(tok)) throw Error(ErrorCode::kParse, kStage, std::string("unexpected end of file, expected ") + what);
    return tok;
  }
  void skip_line() {
    std::string rest;
    std::getline(in_, rest);
  }

 private:
  std::istream& in_;
};

void read_arrays(Tokens& tok, std::string& pending, std::size_t count, Channels& into) {
  // Reads FIELD / SCALARS blocks until a token that starts another section.
  std::string t;
  while (true) {
    if (!pending.empty()) {
      t = pending;
      pending.clear();
    } else if (!tok.next(t)) {
      return;
    }
    if (t == "FIELD") {
      tok.expect("field name");
      const long long arrays = parse_int(tok.expect("array count"), "FIELD");
      for (long long a = 0; a < arrays; ++a) {
        const std::string name = tok.expect("array name");
        const long long comps = parse_int(tok.expect("components"), name);
        const long long tuples = parse_int(tok.expect("tuples"), name);
        tok.expect("type");
        if (static_cast<std::size_t>(tuples) != count) {
          throw Error(ErrorCode::kParse, kStage, "array '" + name + "' has " + std::to_string(tuples) +
                                                     " tuples, expected " + std::to_string(count));
        }
        std::vector<std::vector<double>> cols(static_cast<std::size_t>(comps), std::vector<double>(count));
        for (std::size_t i = 0; i < count; ++i) {
          for (long long c = 0; c < comps; ++c) cols[static_cast<std::size_t>(c)][i] = parse_double(tok.expect("value"), name);
        }
        if (comps == 1) {
          into[name] = std::move(cols[0]);
        } else {
          for (long long c = 0; c < comps; ++c) into[name + "_" + std::to_string(c)] = std::move(cols[static_cast<std::size_t>(c)]);
        }
      }
    } else if (t == "SCALARS") {
      const std::string name = tok.expect("scalar name");
      tok.expect("type");
      std::string nxt = tok.expect("LOOKUP_TABLE");
      long long comps = 1;
      if (nxt != "LOOKUP_TABLE") {
        comps = parse_int(nxt, name);
        tok.expect("LOOKUP_TABLE");
      }
      tok.expect("table name");
      if (comps != 1) throw Error(ErrorCode::kParse, kStage, "multi-component SCALARS not supported: " + name);
      std::vector<double> col(count);
      for (auto& v : col) v = parse_double(tok.expect("value"), name);
      into[name] = std::move(col);
    } else {
      pending = t;
      return;
    }
  }
}

TriMesh load_vtk(const std::filesystem::path& path, bool check_area, std::string* title) {
  std::ifstream in = open_in(path);
  std::string header, name;
  std::getline(in, header);
  if (header.rfind("# vtk DataFile", 0) != 0) throw Error(ErrorCode::kParse, kStage, "missing VTK header in " + path.string());
  std::getline(in, name);
  if (!name.empty() && name.back() == '\r') name.pop_back();
  if (title != nullptr) *title = name;
  Tokens tok(in);
  if (tok.expect("ASCII") != "ASCII") throw Error(ErrorCode::kParse, kStage, "only ASCII VTK is supported");
  if (tok.expect("DATASET") != "DATASET" || tok.expect("POLYDATA") != "POLYDATA") {
    throw Error(ErrorCode::kParse, kStage, "only DATASET POLYDATA is supported");
  }
  std::vector<Vec3> vertices;
  std::vector<Face> faces;
  Channels channels, face_channels;
  std::string t, pending;
  while (true) {
    if (!pending.empty()) {
      t = pending;
      pending.clear();
    } else if (!tok.next(t)) {
      break;
    }
    if (t == "POINTS") {
      const long long n = parse_int(tok.expect("point count"), "POINTS");
      tok.expect("type");
      vertices.resize(static_cast<std::size_t>(n));
      for (auto& p : vertices) {
        for (int k = 0; k < 3; ++k) p[k] = parse_double(tok.expect("coordinate"), "POINTS");
      }
    } else if (t == "POLYGONS") {
      const long long n = parse_int(tok.expect("polygon count"), "POLYGONS");
      tok.expect("size");
      faces.reserve(static_cast<std::size_t>(n));
      for (long long f = 0; f < n; ++f) {
        const long long k = parse_int(tok.expect("vertex count"), "POLYGONS");
        std::vector<int> idx(static_cast<std::size_t>(k));
        for (auto& i : idx) i = static_cast<int>(parse_int(tok.expect("index"), "POLYGONS"));
        if (k != 3) {
          throw Error(ErrorCode::kInvalidMesh, kStage,
                      "face " + std::to_string(f) + " has " + std::to_string(k) +
                          " vertices; only triangles are supported");
        }
        faces.push_back({idx[0], idx[1], idx[2]});
      }
    } else if (t == "POINT_DATA") {
      const long long n = parse_int(tok.expect("count"), "POINT_DATA");
      read_arrays(tok, pending, static_cast<std::size_t>(n), channels);
    } else if (t == "CELL_DATA") {
      const long long n = parse_int(tok.expect("count"), "CELL_DATA");
      read_arrays(tok, pending, static_cast<std::size_t>(n), face_channels);
    } else if (t == "VERTICES" || t == "LINES" || t == "TRIANGLE_STRIPS") {
      throw Error(ErrorCode::kParse, kStage, t + " sections are not supported");
    } else {
      throw Error(ErrorCode::kParse, kStage, "unexpected token '" + t + "'");
    }
  }
  return assemble(std::move(vertices), std::move(faces), std::move(channels), std::move(face_channels), check_area);
}

void write_field(std::ostream& out, const char* section, std::size_t count,
                 const std::vector<std::pair<std::string, const std::vector<double>*>>& arrays) {
  if (arrays.empty()) return;
  out << section << ' ' << count << '\n';
  out << "FIELD FieldData " << arrays.size() << '\n';
  for (const auto& [name, values] : arrays) {
    out << name << " 1 " << count << " double\n";
    for (double v : *values) out << fmt17(v) << '\n';
  }
}

void save_vtk(const TriMesh& mesh, const std::filesystem::path& path, const std::string& title) {
  std::ofstream out = open_out(path);
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET POLYDATA\n";
  out << "POINTS " << mesh.vertex_count() << " double\n";
  for (const Vec3& p : mesh.vertices()) out << fmt17(p.x()) << ' ' << fmt17(p.y()) << ' ' << fmt17(p.z()) << '\n';
  out << "POLYGONS " << mesh.face_count() << ' ' << 4 * mesh.face_count() << '\n';
  for (const Face& f : mesh.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';

  std::vector<double> prov(mesh.provenance().begin(), mesh.provenance().end());
  std::vector<std::pair<std::string, const std::vector<double>*>> point_arrays{{kProvenanceChannel, &prov}};
  for (const auto& [name, values] : mesh.channels()) point_arrays.emplace_back(name, &values);
  write_field(out, "POINT_DATA", static_cast<std::size_t>(mesh.vertex_count()), point_arrays);

  std::vector<std::pair<std::string, const std::vector<double>*>> cell_arrays;
  for (const auto& [name, values] : mesh.face_channels()) cell_arrays.emplace_back(name, &values);
  write_field(out, "CELL_DATA", static_cast<std::size_t>(mesh.face_count()), cell_arrays);
}

}  // namespace

std::filesystem::path channels_sidecar(const std::filesystem::path& obj_path) {
  auto p = obj_path;
  p.replace_extension(".channels.csv");
  return p;
}

TriMesh load_mesh(const std::filesystem::path& path, const LoadOptions& options, std::string* title) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::kIo, kStage, "no such file '" + path.string() + "'");
  switch (resolve(path, options.format)) {
    case MeshFormat::kObj:
      if (title != nullptr) title->clear();
      return load_obj(path, options.check_area);
    default:
      return load_vtk(path, options.check_area, title);
  }
}

void save_mesh(const TriMesh& mesh, const std::filesystem::path& path, MeshFormat format, const std::string& title) {
  if (resolve(path, format) == MeshFormat::kObj) {
    save_obj(mesh, path);
  } else {
    save_vtk(mesh, path, title);
  }
}

}  // namespace frf
