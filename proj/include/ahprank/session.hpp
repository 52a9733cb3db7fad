#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ahprank/learner.hpp"

namespace httplib {
class Server;
}

namespace ahprank {

/// Failure carrying the HTTP status it maps to.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, const std::string& what) : std::runtime_error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

enum class SessionStatus { Ready, AwaitingAnswer, Finished };

std::string to_string(SessionStatus status);

/// Renders a pattern as {id, body, head, measures, scaled}.
nlohmann::json render_pattern(const PatternRecord& p, const std::vector<std::string>& names);

/// In-memory interactive sessions over registered pattern collections. Each
/// session is a single-writer state machine
///   ready -> awaiting_answer -> ready ... -> finished
/// guarded by its own mutex; distinct sessions proceed in parallel.
class SessionManager {
 public:
  /// Finished sessions are written to <snapshot_dir>/<id>.json when set.
  explicit SessionManager(std::optional<std::string> snapshot_dir = std::nullopt);
  ~SessionManager();

  void add_dataset(const std::string& name, std::shared_ptr<const PatternCollection> patterns);
  std::vector<std::string> datasets() const;

  /// Request fields: dataset (required), T, theta, seed, strategy, top_k.
  nlohmann::json create(const nlohmann::json& request);
  nlohmann::json next_query(const std::string& id);
  nlohmann::json answer(const std::string& id, PatternId preferred);
  nlohmann::json ranking(const std::string& id, std::size_t k);
  nlohmann::json stop(const std::string& id);
  nlohmann::json state(const std::string& id);

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id) const;
  void snapshot(const Session& s) const;

  std::optional<std::string> snapshot_dir_;
  mutable std::mutex mutex_;  // guards the maps and the id counter
  std::map<std::string, std::shared_ptr<const PatternCollection>> datasets_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_id_ = 1;
};

/// HTTP/JSON front end:
///   POST /sessions                  GET  /sessions/{id}
///   GET  /sessions/{id}/query       POST /sessions/{id}/answer {preferred}
///   GET  /sessions/{id}/ranking?k=  POST /sessions/{id}/stop
///   GET  /datasets
/// Static UI assets are served at / from `static_dir` when given.
class SessionServer {
 public:
  SessionServer(SessionManager& manager, std::string static_dir = {});
  ~SessionServer();

  SessionServer(const SessionServer&) = delete;
  SessionServer& operator=(const SessionServer&) = delete;

  /// Binds to an ephemeral port and returns it, or -1 on failure.
  int bind_any(const std::string& host = "127.0.0.1");
  bool bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  void run();
  void stop();
  void wait_until_ready() const;

 private:
  SessionManager& manager_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace ahprank
