#include "httplib.h"
#include "instructkit/annotation.hpp"
#include "instructkit/error.hpp"

namespace ik::annotation {

struct AnnotationServer::Impl {
  AnnotationStore& store;
  ServerConfig config;
  httplib::Server http;
  int port = -1;

  Impl(AnnotationStore& s, ServerConfig c) : store(s), config(std::move(c)) {}

  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static void fail(httplib::Response& res, int status, const std::string& message) {
    reply(res, status, {{"error", message}});
  }

  void routes() {
    http.Get("/health", [this](const httplib::Request&, httplib::Response& res) {
      reply(res, 200, {{"status", "ok"}, {"tasks", store.task_count()}, {"open", store.open_count()}});
    });

    http.Get("/task", [this](const httplib::Request& req, httplib::Response& res) {
      const auto annotator = req.get_param_value("annotator");
      if (annotator.empty()) return fail(res, 400, "annotator is required");
      auto task = store.next_task(annotator);
      if (!task) return reply(res, 200, {{"task", nullptr}, {"done", true}});
      reply(res, 200, {{"task", to_json(*task)}, {"done", false}});
    });

    http.Post("/vote", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        auto ack = store.submit_vote(submission_from_json(json::parse(req.body)));
        reply(res, 200, {{"ok", true}, {"sequence", ack.sequence}, {"task_complete", ack.task_complete}});
      } catch (const json::exception&) {
        fail(res, 400, "body is not valid JSON");
      } catch (const ValidationError& e) {
        fail(res, 400, e.what());
      } catch (const NotFoundError& e) {
        fail(res, 404, e.what());
      } catch (const ConflictError& e) {
        fail(res, 409, e.what());
      }
    });

    http.Get("/export", [this](const httplib::Request& req, httplib::Response& res) {
      if (config.operator_token.empty()) return fail(res, 403, "export is disabled");
      if (req.get_header_value("Authorization") != "Bearer " + config.operator_token) {
        return fail(res, 401, "operator token required");
      }
      std::string body;
      for (const auto& v : store.export_votes()) body += eval::to_json(v).dump() + "\n";
      res.status = 200;
      res.set_content(body, "application/x-ndjson");
    });

    http.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
      std::string msg = "internal error";
      try {
        if (ep) std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        msg = e.what();
      }
      fail(res, 500, msg);
    });

    if (!config.ui_dir.empty()) {
      if (!http.set_mount_point("/", config.ui_dir.string())) {
        throw NotFoundError("annotation", "UI directory not found: " + config.ui_dir.string());
      }
    }
  }
};

AnnotationServer::AnnotationServer(AnnotationStore& store, ServerConfig config)
    : impl_(std::make_unique<Impl>(store, std::move(config))) {
  impl_->routes();
}

AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind() {
  if (impl_->port >= 0) return impl_->port;
  auto& c = impl_->config;
  if (c.port == 0) {
    impl_->port = impl_->http.bind_to_any_port(c.host);
  } else if (impl_->http.bind_to_port(c.host, c.port)) {
    impl_->port = c.port;
  }
  if (impl_->port < 0) throw IoError("annotation", "cannot bind " + c.host + ":" + std::to_string(c.port));
  return impl_->port;
}

void AnnotationServer::listen() {
  bind();
  impl_->http.listen_after_bind();
}

void AnnotationServer::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

void AnnotationServer::wait_until_ready() const { impl_->http.wait_until_ready(); }

}  // namespace ik::annotation
