#include "service.hpp"

#include <cctype>

#include "frf/error.hpp"
#include "frf/hash.hpp"
#include "frf/json_io.hpp"
#include "frf/mesh_io.hpp"
#include "job.hpp"

// After Eigen: <resolv.h> defines _res.
#include <httplib.h>

namespace frf::cli {

namespace {

constexpr const char* kPresets[] = {"population", "adapted1", "adapted2"};

bool valid_id(const std::string& id) {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  for (char c : id) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  }
  return true;
}

Reply not_found(const std::string& what) { return make_reply(404, {{"error", {{"message", what}}}}); }

Reply bad_request(const std::string& what) { return make_reply(400, {{"error", {{"message", what}}}}); }

Reply unprocessable(const Error& e) {
  nlohmann::json err{{"code", to_string(e.code())}, {"stage", e.stage()}, {"message", e.message()}};
  err["vertex"] = e.vertex() ? nlohmann::json(*e.vertex()) : nlohmann::json(nullptr);
  return make_reply(422, {{"error", err}});
}

nlohmann::json parse_body(const std::string& body) {
  try {
    return body.empty() ? nlohmann::json::object() : nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("request body is not JSON: ") + e.what());
  }
}

template <class F>
Reply guarded(F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    return bad_request(e.what());
  } catch (const Error& e) {
    return unprocessable(e);
  }
}

}  // namespace

Reply make_reply(int status, const nlohmann::json& body) {
  Reply r;
  r.status = status;
  r.body = body.dump();
  r.hash = content_hash(r.body);
  return r;
}

Service::Service(ServiceOptions options) : options_(std::move(options)) {}

void Service::add_mesh(const std::string& id, TriMesh mesh) {
  auto entry = std::make_shared<Entry>();
  entry->mesh = std::move(mesh);
  std::unique_lock lock(registry_mutex_);
  registry_[id] = std::move(entry);
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) {
  if (!valid_id(id)) return nullptr;
  {
    std::shared_lock lock(registry_mutex_);
    auto it = registry_.find(id);
    if (it != registry_.end()) return it->second;
  }
  if (options_.mesh_dir.empty()) return nullptr;
  std::filesystem::path path;
  for (const char* ext : {".vtk", ".obj"}) {
    const auto p = options_.mesh_dir / (id + ext);
    if (std::filesystem::is_regular_file(p)) {
      path = p;
      break;
    }
  }
  if (path.empty()) return nullptr;
  auto entry = std::make_shared<Entry>();
  entry->mesh = load_surface(path);
  std::unique_lock lock(registry_mutex_);
  // Another request may have loaded it meanwhile; keep the first.
  return registry_.try_emplace(id, std::move(entry)).first->second;
}

Reply Service::get_mesh(const std::string& id) {
  return guarded([&] {
    auto e = find(id);
    if (!e) return not_found("unknown mesh '" + id + "'");
    nlohmann::json j = to_json(e->mesh);
    j["id"] = id;
    return make_reply(200, j);
  });
}

Reply Service::post_seeds(const std::string& id, const std::string& body) {
  return guarded([&] {
    auto e = find(id);
    if (!e) return not_found("unknown mesh '" + id + "'");
    const SeedSet seeds = seeds_from_json(parse_body(body));
    std::lock_guard lock(e->job);
    DivisionStage division = run_division(e->mesh, seeds);
    e->seeds = seeds;
    e->division = std::move(division);
    return make_reply(200, {{"id", id}, {"seeds", to_json(seeds)}, {"division", division_to_json(e->division->opened.division)}});
  });
}

Reply Service::get_division(const std::string& id) {
  return guarded([&] {
    auto e = find(id);
    if (!e) return not_found("unknown mesh '" + id + "'");
    std::lock_guard lock(e->job);
    if (!e->division) return make_reply(409, {{"error", {{"message", "no seeds posted for '" + id + "'"}}}});
    return make_reply(200, {{"id", id}, {"seeds", to_json(*e->seeds)}, {"division", division_to_json(e->division->opened.division)}});
  });
}

Reply Service::post_flatten(const std::string& id, const std::string& body) {
  return guarded([&] {
    auto e = find(id);
    if (!e) return not_found("unknown mesh '" + id + "'");
    const nlohmann::json request = parse_body(body);
    if (!request.is_object()) throw ConfigError("request body must be a JSON object");
    for (const char* key : {"input", "output"}) {
      if (request.contains(key)) throw ConfigError(std::string("'") + key + "' is not accepted by the service");
    }
    const JobConfig config = job_from_json(request);
    if (!(config.w > 0.0)) throw ConfigError("w must be positive");
    const TemplateSpec spec = resolve_template(config.template_ref);
    std::lock_guard lock(e->job);
    std::optional<SeedSet> seeds = config.seeds_inline ? config.seeds_inline : e->seeds;
    if (!seeds) return make_reply(409, {{"error", {{"message", "no seeds posted for '" + id + "'"}}}});
    const FlattenArtifacts a = run_flatten(e->mesh, *seeds, spec, config);
    nlohmann::json j{{"id", id},
                     {"template", to_json(spec)},
                     {"template_hash", a.result.flat.template_hash},
                     {"flat", to_json(a.result.flat)},
                     {"report", a.solve_report}};
    if (a.distortion) j["distortion"] = to_json(*a.distortion);
    return make_reply(200, j);
  });
}

Reply Service::get_templates() {
  return guarded([&] {
    nlohmann::json list = nlohmann::json::object();
    for (const char* name : kPresets) {
      const TemplateSpec t = resolve_template(name);
      list[name] = {{"hash", template_hash(t)}, {"template", to_json(t)}};
    }
    return make_reply(200, {{"templates", list}});
  });
}

void Service::mount(httplib::Server& server) {
  auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_header("X-Content-Hash", r.hash);
    res.set_content(r.body, "application/json");
  };
  const std::string id = R"(/mesh/([^/]+))";
  server.Get(id, [this, send](const httplib::Request& req, httplib::Response& res) { send(res, get_mesh(req.matches[1])); });
  server.Post(id + "/seeds", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, post_seeds(req.matches[1], req.body));
  });
  server.Get(id + "/division", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, get_division(req.matches[1]));
  });
  server.Post(id + "/flatten", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, post_flatten(req.matches[1], req.body));
  });
  server.Get("/templates", [this, send](const httplib::Request&, httplib::Response& res) { send(res, get_templates()); });
  server.set_error_handler([send](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send(res, make_reply(res.status, {{"error", {{"message", "no such endpoint"}}}}));
  });
  if (!options_.static_dir.empty()) server.set_mount_point("/", options_.static_dir.string());
}

}  // namespace frf::cli
