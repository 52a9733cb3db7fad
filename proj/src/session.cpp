#include "ahprank/session.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include <httplib.h>

#include "ahprank/errors.hpp"

namespace ahprank {

std::string to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::Ready: return "ready";
    case SessionStatus::AwaitingAnswer: return "awaiting_answer";
    case SessionStatus::Finished: return "finished";
  }
  return "?";
}

nlohmann::json render_pattern(const PatternRecord& p, const std::vector<std::string>& names) {
  nlohmann::json body = nlohmann::json::array();
  nlohmann::json head = nlohmann::json::array();
  if (p.rule) {
    for (Item i : p.rule->body) body.push_back(i);
    for (Item i : p.rule->head) head.push_back(i);
  }
  nlohmann::json measures = nlohmann::json::object();
  nlohmann::json scaled = nlohmann::json::object();
  for (std::size_t k = 0; k < names.size(); ++k) {
    measures[names[k]] = p.measures[k];
    scaled[names[k]] = p.scaled[k];
  }
  return {{"id", p.id}, {"body", body}, {"head", head}, {"measures", measures}, {"scaled", scaled}};
}

struct SessionManager::Session {
  Session(std::string id_, std::string dataset_, std::shared_ptr<const PatternCollection> patterns_,
          const LearnerConfig& config_, std::size_t top_k_)
      : id(std::move(id_)),
        dataset(std::move(dataset_)),
        patterns(std::move(patterns_)),
        config(config_),
        top_k(top_k_),
        learner(patterns->records(), patterns->criteria(), config_) {}

  std::string id;
  std::string dataset;
  std::shared_ptr<const PatternCollection> patterns;
  LearnerConfig config;
  std::size_t top_k;

  std::mutex mutex;
  ActiveLearner learner;
  SessionStatus status = SessionStatus::Ready;
  bool stopped_early = false;
  nlohmann::json history = nlohmann::json::array();

  std::size_t t() const { return learner.iteration(); }

  nlohmann::json top(std::size_t k) const {
    const auto sorted = sort_by_score(pointers(patterns->records()), learner.weights());
    nlohmann::json out = nlohmann::json::array();
    for (std::size_t i = 0; i < std::min(k, sorted.size()); ++i) {
      auto rendered = render_pattern(*sorted[i], patterns->measure_names());
      rendered["score"] = score_gw(*sorted[i], learner.weights());
      rendered["rank"] = i + 1;
      out.push_back(std::move(rendered));
    }
    return out;
  }

  nlohmann::json weights_json() const {
    const auto& w = learner.weights();
    nlohmann::json named = nlohmann::json::object();
    for (std::size_t k = 0; k < w.size(); ++k) named[patterns->measure_names()[k]] = w[k];
    return named;
  }

  nlohmann::json pending_json() const {
    if (!learner.has_pending()) return nullptr;
    const auto [a, b] = learner.pending();
    return nlohmann::json::array({render_pattern(*a, patterns->measure_names()),
                                  render_pattern(*b, patterns->measure_names())});
  }

  nlohmann::json summary() const {
    const auto& w = learner.weights();
    return {{"id", id},
            {"dataset", dataset},
            {"status", to_string(status)},
            {"t", t()},
            {"T", config.iterations},
            {"theta", config.theta},
            {"seed", config.seed},
            {"strategy", config.strategy == QueryStrategy::Sensitivity ? "sbg" : "random"},
            {"measures", patterns->measure_names()},
            {"weights", w.w},
            {"named_weights", weights_json()},
            {"lambda_max", w.lambda_max},
            {"consistency_ratio", t() == 0 ? 0.0 : consistency_ratio(w.lambda_max, w.size())},
            {"stopped_early", stopped_early}};
  }
};

SessionManager::SessionManager(std::optional<std::string> snapshot_dir)
    : snapshot_dir_(std::move(snapshot_dir)) {}

SessionManager::~SessionManager() = default;

void SessionManager::add_dataset(const std::string& name,
                                 std::shared_ptr<const PatternCollection> patterns) {
  if (!patterns || patterns->size() < 2)
    throw ArgumentError("dataset '" + name + "' needs at least two patterns");
  std::lock_guard lock(mutex_);
  datasets_[name] = std::move(patterns);
}

std::vector<std::string> SessionManager::datasets() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> names;
  for (const auto& [name, _] : datasets_) names.push_back(name);
  return names;
}

std::shared_ptr<SessionManager::Session> SessionManager::find(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown session '" + id + "'");
  return it->second;
}

nlohmann::json SessionManager::create(const nlohmann::json& request) {
  if (!request.is_object()) throw ServiceError(400, "request body must be a JSON object");
  const std::string dataset = request.value("dataset", std::string{});

  LearnerConfig config;
  config.iterations = request.value("T", config.iterations);
  config.theta = request.value("theta", config.theta);
  if (request.contains("seed")) {
    config.seed = request.at("seed").get<std::uint64_t>();
  } else {
    std::random_device rd;
    config.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  }
  const std::string strategy = request.value("strategy", std::string{"sbg"});
  if (strategy == "sbg") config.strategy = QueryStrategy::Sensitivity;
  else if (strategy == "random") config.strategy = QueryStrategy::Random;
  else throw ServiceError(400, "strategy must be sbg or random");
  const std::size_t top_k = request.value("top_k", std::size_t{10});

  try {
    config.validate();
  } catch (const ArgumentError& e) {
    throw ServiceError(400, e.what());
  }

  std::lock_guard lock(mutex_);
  auto ds = datasets_.find(dataset);
  if (ds == datasets_.end()) throw ServiceError(404, "unknown dataset '" + dataset + "'");
  const std::string id = "s" + std::to_string(next_id_++);
  auto session = std::make_shared<Session>(id, dataset, ds->second, config, top_k);
  sessions_.emplace(id, session);
  return session->summary();
}

nlohmann::json SessionManager::next_query(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->status == SessionStatus::Finished)
    throw ServiceError(410, "session '" + id + "' is finished");
  if (s->status == SessionStatus::Ready) {
    s->learner.propose();
    s->status = SessionStatus::AwaitingAnswer;
  }
  return {{"status", to_string(s->status)}, {"t", s->t()}, {"T", s->config.iterations},
          {"query", s->pending_json()}};
}

nlohmann::json SessionManager::answer(const std::string& id, PatternId preferred) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->status == SessionStatus::Finished)
    throw ServiceError(410, "session '" + id + "' is finished");
  if (s->status != SessionStatus::AwaitingAnswer)
    throw ServiceError(409, "no query is pending for session '" + id + "'");

  const auto [a, b] = s->learner.pending();
  if (preferred != a->id && preferred != b->id)
    throw ServiceError(400, "pattern " + std::to_string(preferred) + " is not in the pending query");
  const PatternId other = preferred == a->id ? b->id : a->id;
  s->learner.absorb(FeedbackRanking{{preferred, other}});

  s->history.push_back({{"t", s->t()},
                        {"query", {a->id, b->id}},
                        {"preferred", preferred},
                        {"weights", s->learner.weights().w}});
  s->status = s->t() >= s->config.iterations ? SessionStatus::Finished : SessionStatus::Ready;
  if (s->status == SessionStatus::Finished) snapshot(*s);

  auto out = s->summary();
  out["top"] = s->top(s->top_k);
  return out;
}

nlohmann::json SessionManager::ranking(const std::string& id, std::size_t k) {
  if (k < 1) throw ServiceError(400, "k must be at least 1");
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return {{"t", s->t()}, {"weights", s->learner.weights().w}, {"ranking", s->top(k)}};
}

nlohmann::json SessionManager::stop(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  if (s->status != SessionStatus::Finished) {
    s->status = SessionStatus::Finished;
    s->stopped_early = s->t() < s->config.iterations;
    snapshot(*s);
  }
  return s->summary();
}

nlohmann::json SessionManager::state(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  auto out = s->summary();
  out["pending"] = s->pending_json();
  out["trace"] = s->history;
  return out;
}

void SessionManager::snapshot(const Session& s) const {
  if (!snapshot_dir_) return;
  std::filesystem::create_directories(*snapshot_dir_);
  std::ofstream out(std::filesystem::path(*snapshot_dir_) / (s.id + ".json"));
  auto j = s.summary();
  j["trace"] = s.history;
  out << j.dump(2) << '\n';
}

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      send_json(res, 200, fn(req));
    } catch (const ServiceError& e) {
      nlohmann::json body = {{"error", e.what()}};
      if (e.status() == 410) {
        body["status"] = "finished";
        body["query"] = nullptr;
      }
      send_json(res, e.status(), body);
    } catch (const nlohmann::json::exception& e) {
      send_json(res, 400, {{"error", std::string("malformed request: ") + e.what()}});
    } catch (const ArgumentError& e) {
      send_json(res, 400, {{"error", e.what()}});
    } catch (const std::exception& e) {
      send_json(res, 500, {{"error", e.what()}});
    }
  };
}

nlohmann::json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return nlohmann::json::object();
  return nlohmann::json::parse(req.body);
}

}  // namespace

SessionServer::SessionServer(SessionManager& manager, std::string static_dir)
    : manager_(manager), server_(std::make_unique<httplib::Server>()) {
  auto& srv = *server_;
  srv.Get("/datasets", guarded([this](const httplib::Request&) {
            return nlohmann::json{{"datasets", manager_.datasets()}};
          }));
  srv.Post("/sessions", guarded([this](const httplib::Request& req) {
             return manager_.create(parse_body(req));
           }));
  srv.Get(R"(/sessions/([^/]+))", guarded([this](const httplib::Request& req) {
            return manager_.state(req.matches[1]);
          }));
  srv.Get(R"(/sessions/([^/]+)/query)", guarded([this](const httplib::Request& req) {
            return manager_.next_query(req.matches[1]);
          }));
  srv.Post(R"(/sessions/([^/]+)/answer)", guarded([this](const httplib::Request& req) {
             const auto body = parse_body(req);
             if (!body.contains("preferred")) throw ServiceError(400, "missing 'preferred'");
             return manager_.answer(req.matches[1], body.at("preferred").get<PatternId>());
           }));
  srv.Get(R"(/sessions/([^/]+)/ranking)", guarded([this](const httplib::Request& req) {
            std::size_t k = 10;
            if (req.has_param("k")) {
              try {
                const long long v = std::stoll(req.get_param_value("k"));
                if (v < 1) throw ServiceError(400, "k must be at least 1");
                k = static_cast<std::size_t>(v);
              } catch (const std::logic_error&) {
                throw ServiceError(400, "k must be a positive integer");
              }
            }
            return manager_.ranking(req.matches[1], k);
          }));
  srv.Post(R"(/sessions/([^/]+)/stop)", guarded([this](const httplib::Request& req) {
             return manager_.stop(req.matches[1]);
           }));

  if (!static_dir.empty() && srv.set_mount_point("/", static_dir)) return;
  srv.Get("/", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(
        "<!doctype html><title>ahprank</title><p>Session API is running. No UI assets were "
        "configured (start with --static DIR).</p>",
        "text/html");
  });
}

SessionServer::~SessionServer() { stop(); }

int SessionServer::bind_any(const std::string& host) { return server_->bind_to_any_port(host); }

bool SessionServer::bind(const std::string& host, int port) {
  return server_->bind_to_port(host, port);
}

void SessionServer::run() { server_->listen_after_bind(); }

void SessionServer::stop() {
  if (server_) server_->stop();
}

void SessionServer::wait_until_ready() const { server_->wait_until_ready(); }

}  // namespace ahprank
