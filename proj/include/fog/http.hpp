// Copyright 2026 The fog Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP binding of GameService.
//
//   POST   /api/games              {structure, formula, human_role} -> {session_id, state}
//   GET    /api/games/{id}         -> state
//   POST   /api/games/{id}/moves   {label} -> state
//   GET    /api/games/{id}/tree    -> solved arena for rendering
//   DELETE /api/games/{id}

#pragma once

#include <string>

#include "httplib.h"
#include "json.hpp"

#include "fog/error.hpp"
#include "fog/service.hpp"

namespace fog {

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::SessionNotFound: return 404;
    case ErrorCode::NotYourTurn: return 409;
    case ErrorCode::ArenaTooLarge: return 413;
    default: return 400;
  }
}

namespace detail {

template <typename Handler>
void respond(httplib::Response& res, int ok_status, Handler&& handler) {
  try {
    nlohmann::json body = handler();
    res.status = ok_status;
    if (ok_status != 204) res.set_content(body.dump(), "application/json");
  } catch (const Error& e) {
    res.status = http_status(e.code());
    res.set_content(nlohmann::json{{"error", e.what()}, {"code", std::string(to_string(e.code()))}}.dump(),
                    "application/json");
  } catch (const nlohmann::json::exception& e) {
    res.status = 400;
    res.set_content(nlohmann::json{{"error", e.what()}, {"code", "BadRequest"}}.dump(), "application/json");
  }
}

}  // namespace detail

inline void mount_routes(httplib::Server& server, GameService& service) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
  server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Post("/api/games", [&service](const httplib::Request& req, httplib::Response& res) {
    detail::respond(res, 201, [&] { return service.create(nlohmann::json::parse(req.body)); });
  });
  server.Get(R"(/api/games/([0-9a-f]+))", [&service](const httplib::Request& req, httplib::Response& res) {
    detail::respond(res, 200, [&] { return service.state(req.matches[1]); });
  });
  server.Post(R"(/api/games/([0-9a-f]+)/moves)",
              [&service](const httplib::Request& req, httplib::Response& res) {
                detail::respond(res, 200, [&] {
                  return service.move(req.matches[1], nlohmann::json::parse(req.body));
                });
              });
  server.Get(R"(/api/games/([0-9a-f]+)/tree)",
             [&service](const httplib::Request& req, httplib::Response& res) {
               detail::respond(res, 200, [&] { return service.tree(req.matches[1]); });
             });
  server.Delete(R"(/api/games/([0-9a-f]+))",
                [&service](const httplib::Request& req, httplib::Response& res) {
                  detail::respond(res, 204, [&] {
                    service.remove(req.matches[1]);
                    return nlohmann::json();
                  });
                });
}

}  // namespace fog
