#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <nlohmann/json.hpp>

#include "frf/mesh.hpp"
#include "frf/pipeline.hpp"

namespace httplib {
class Server;
}

namespace frf::cli {

struct Reply {
  int status = 200;
  std::string body;  // compact JSON
  std::string hash;  // content hash of `body`, sent as X-Content-Hash
};

struct ServiceOptions {
  std::filesystem::path mesh_dir;
  std::filesystem::path static_dir;  // optional UI assets mounted at /
};

// Meshes are loaded on first use from <mesh_dir>/<id>.vtk or <id>.obj and never modified.
// Seeds and the last division are kept per mesh; flatten jobs on one mesh run one at a time.
class Service {
 public:
  explicit Service(ServiceOptions options);

  // Makes `mesh` available under `id` without touching the mesh directory.
  void add_mesh(const std::string& id, TriMesh mesh);

  Reply get_mesh(const std::string& id);
  Reply post_seeds(const std::string& id, const std::string& body);
  Reply get_division(const std::string& id);
  Reply post_flatten(const std::string& id, const std::string& body);
  Reply get_templates();

  void mount(httplib::Server& server);

 private:
  struct Entry {
    TriMesh mesh;
    std::mutex job;  // serialises seeds and flatten requests on this mesh
    std::optional<SeedSet> seeds;
    std::optional<DivisionStage> division;
  };

  std::shared_ptr<Entry> find(const std::string& id);

  ServiceOptions options_;
  std::shared_mutex registry_mutex_;
  std::map<std::string, std::shared_ptr<Entry>> registry_;
};

Reply make_reply(int status, const nlohmann::json& body);

}  // namespace frf::cli
