#pragma once

#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "isonet/io.hpp"

namespace httplib {
class Server;
}

namespace isonet {

// request body that does not match the endpoint's schema
struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One in-memory session. Every mutation recomputes from the flat base.
class Session {
 public:
  explicit Session(const NetFile& doc);

  json net() const;
  json report() const;
  json fold(const json& body);
  json reflect();
  json close(const json& body);

  const CircularNet& base() const { return base_; }

 private:
  json state_locked() const;
  json net_locked() const;
  void set_current(CircularNet net);

  mutable std::shared_mutex mu_;
  CircularNet base_;
  json seed_meta_;
  FoldPlan plan_;
  CircularNet current_;
  DiagnosticReport report_;
  json closure_;
};

// GET /net, GET /report, POST /fold, POST /reflect, POST /close
void install_routes(httplib::Server& server, Session& session);

}  // namespace isonet
