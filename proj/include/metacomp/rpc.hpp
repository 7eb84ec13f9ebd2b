#ifndef METACOMP_RPC_HPP
#define METACOMP_RPC_HPP

// JSON-RPC 2.0 over HTTP POST /rpc. Every request names a registered
// component, its parameters, the input solution(s) and the whole
// Environment; the server rebuilds the component, runs one step and sends
// everything back. Nothing survives between requests.
//
//   perturb   {component, params, solution, env}      -> {solution, env}
//   accept    {component, params, solutions:[a,b], env} -> {solution, env}
//   evaluate  {component, params, solution, env}      -> {value, env}
//   terminate {component, params, solution, env}      -> {flag, env}
//   describe  {}                                      -> {"components":[...]}

#include <httplib.h>

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "metacomp/assembly.hpp"
#include "metacomp/env_json.hpp"

namespace metacomp {

namespace rpc_code {
inline constexpr int parse_error = -32700;
inline constexpr int invalid_request = -32600;
inline constexpr int method_not_found = -32601;
inline constexpr int invalid_params = -32602;
inline constexpr int unknown_component = -32001;
inline constexpr int component_error = -32002;
}  // namespace rpc_code

namespace detail {

struct RpcFault {
  int code;
  std::string message;
  json data = nullptr;
};

inline json rpc_error(const json& id, int code, const std::string& message, const json& data = nullptr) {
  json err{{"code", code}, {"message", message}};
  if (!data.is_null()) err["data"] = data;
  return {{"jsonrpc", "2.0"}, {"id", id}, {"error", std::move(err)}};
}

inline std::optional<Kind> method_kind(const std::string& method) {
  if (method == "perturb") return Kind::perturb;
  if (method == "accept") return Kind::accept;
  if (method == "evaluate") return Kind::evaluate;
  if (method == "terminate") return Kind::terminate;
  return std::nullopt;
}

template <class F>
auto as_invalid_params(const char* what, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw RpcFault{rpc_code::invalid_params, std::string(what) + ": " + e.what()};
  } catch (const json::exception& e) {
    throw RpcFault{rpc_code::invalid_params, std::string(what) + ": " + e.what()};
  }
}

inline const json& require_field(const json& params, const char* key) {
  if (!params.contains(key)) throw RpcFault{rpc_code::invalid_params, std::string("missing params.") + key};
  return params[key];
}

inline json run_method(const Registry& reg, Kind kind, const json& params) {
  if (!params.is_object()) throw RpcFault{rpc_code::invalid_params, "params must be an object"};
  const auto& name_j = require_field(params, "component");
  if (!name_j.is_string()) throw RpcFault{rpc_code::invalid_params, "params.component must be a string"};
  const auto name = name_j.get<std::string>();
  const auto* d = reg.find(kind, name);
  if (!d) {
    throw RpcFault{rpc_code::unknown_component, std::string("unknown ") + to_string(kind) + " component '" + name + "'",
                   json{{"component", name}}};
  }
  const json empty = json::object();
  const auto& bindings_j = params.contains("params") ? params["params"] : empty;
  auto component = as_invalid_params("params.params", [&] { return reg.make(kind, name, bindings_from_json(bindings_j, *d)); });
  auto env = as_invalid_params("params.env", [&] { return environment_from_json(require_field(params, "env")); });

  auto solution_at = [&](const char* key) {
    return as_invalid_params(key, [&] { return solution_from_json(require_field(params, key)); });
  };
  auto fault = [&](const std::string& message) {
    return RpcFault{rpc_code::component_error, message, json{{"component", name}}};
  };

  try {
    switch (kind) {
      case Kind::perturb: {
        auto out = std::get<Perturb>(component)(solution_at("solution"), std::move(env));
        return {{"solution", to_json(out.value)}, {"env", to_json(out.env)}};
      }
      case Kind::accept: {
        const auto& pair = require_field(params, "solutions");
        if (!pair.is_array() || pair.size() != 2) {
          throw RpcFault{rpc_code::invalid_params, "params.solutions must hold exactly two solutions"};
        }
        auto a = as_invalid_params("params.solutions[0]", [&] { return solution_from_json(pair[0]); });
        auto b = as_invalid_params("params.solutions[1]", [&] { return solution_from_json(pair[1]); });
        auto out = std::get<Accept>(component)(Candidates<Solution>{std::move(a), std::move(b)}, std::move(env));
        return {{"solution", to_json(out.value)}, {"env", to_json(out.env)}};
      }
      case Kind::evaluate: {
        auto out = std::get<Evaluate>(component)(solution_at("solution"), std::move(env));
        return {{"value", real_to_json(out.value)}, {"env", to_json(out.env)}};
      }
      case Kind::terminate: {
        auto out = std::get<Terminate>(component)(solution_at("solution"), std::move(env));
        return {{"flag", out.value}, {"env", to_json(out.env)}};
      }
      default:
        break;
    }
  } catch (const RpcFault&) {
    throw;
  } catch (const std::exception& e) {
    throw fault(e.what());
  }
  throw RpcFault{rpc_code::method_not_found, "unsupported method"};
}

}  // namespace detail

/// Handles one decoded request object. Always returns a response object.
inline json handle_rpc(const Registry& reg, const json& request) {
  json id = nullptr;
  if (!request.is_object()) return detail::rpc_error(id, rpc_code::invalid_request, "request must be an object");
  if (request.contains("id")) id = request["id"];
  if (!id.is_number_integer()) {
    return detail::rpc_error(nullptr, rpc_code::invalid_request, "id must be an integer");
  }
  if (request.value("jsonrpc", json()) != "2.0") {
    return detail::rpc_error(id, rpc_code::invalid_request, "jsonrpc must be \"2.0\"");
  }
  if (!request.contains("method") || !request["method"].is_string()) {
    return detail::rpc_error(id, rpc_code::invalid_request, "method must be a string");
  }
  const auto method = request["method"].get<std::string>();
  try {
    json result;
    if (method == "describe") {
      result = to_json(reg);
    } else if (auto kind = detail::method_kind(method)) {
      result = detail::run_method(reg, *kind, request.contains("params") ? request["params"] : json());
    } else {
      return detail::rpc_error(id, rpc_code::method_not_found, "unknown method '" + method + "'");
    }
    return {{"jsonrpc", "2.0"}, {"id", id}, {"result", std::move(result)}};
  } catch (const detail::RpcFault& f) {
    return detail::rpc_error(id, f.code, f.message, f.data);
  }
}

inline std::string handle_rpc_text(const Registry& reg, std::string_view body) {
  json request;
  try {
    request = json::parse(body);
  } catch (const json::parse_error& e) {
    return detail::rpc_error(nullptr, rpc_code::parse_error, e.what()).dump();
  }
  return handle_rpc(reg, request).dump();
}

// ---------------------------------------------------------------------------
// Server

/// Hosts a registry on a background thread until destroyed or stopped.
class RpcServer {
 public:
  /// Port 0 picks a free port. Throws PortInUseError when binding fails.
  RpcServer(Registry reg, const std::string& host = "127.0.0.1", int port = 0)
      : reg_(std::make_shared<const Registry>(std::move(reg))), host_(host) {
    if (reg_->empty()) throw ConfigurationError("registry", "cannot serve an empty registry");
    server_.set_keep_alive_max_count(1000000);
    server_.set_tcp_nodelay(true);
    // httplib's defaults add SO_REUSEPORT, which would let a second server share the port.
    server_.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
    });
    server_.Post("/rpc", [reg = reg_](const httplib::Request& req, httplib::Response& res) {
      res.set_content(handle_rpc_text(*reg, req.body), "application/json");
    });
    if (port == 0) {
      port_ = server_.bind_to_any_port(host);
      if (port_ < 0) throw PortInUseError("cannot bind " + host);
    } else {
      if (!server_.bind_to_port(host, port)) {
        throw PortInUseError("cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
      }
      port_ = port;
    }
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  RpcServer(const RpcServer&) = delete;
  RpcServer& operator=(const RpcServer&) = delete;

  ~RpcServer() { stop(); }

  int port() const noexcept { return port_; }
  const std::string& host() const noexcept { return host_; }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  /// Blocks until another thread calls stop().
  void wait() {
    if (thread_.joinable()) thread_.join();
  }

 private:
  std::shared_ptr<const Registry> reg_;
  std::string host_;
  int port_ = 0;
  httplib::Server server_;
  std::thread thread_;
};

// ---------------------------------------------------------------------------
// Client

struct Endpoint {
  std::string host = "127.0.0.1";
  int port = 0;
  std::string str() const { return host + ":" + std::to_string(port); }
};

/// Accepts "host:port", optionally prefixed with "http://" and suffixed with "/rpc".
inline Endpoint parse_endpoint(std::string_view text) {
  std::string s(text);
  if (s.rfind("http://", 0) == 0) s.erase(0, 7);
  if (s.size() >= 4 && s.compare(s.size() - 4, 4, "/rpc") == 0) s.erase(s.size() - 4);
  const auto colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0) throw std::invalid_argument("endpoint must be host:port");
  Endpoint ep{s.substr(0, colon), 0};
  try {
    std::size_t used = 0;
    ep.port = std::stoi(s.substr(colon + 1), &used);
    if (used != s.size() - colon - 1 || ep.port <= 0 || ep.port > 65535) throw std::invalid_argument("port");
  } catch (const std::exception&) {
    throw std::invalid_argument("endpoint must be host:port");
  }
  return ep;
}

struct RetryPolicy {
  int retries = 2;
  std::chrono::milliseconds backoff{100};
};

/// Synchronous JSON-RPC client. Calls are serialized on one connection.
class RpcClient {
 public:
  explicit RpcClient(Endpoint ep, RetryPolicy retry = {}) : ep_(std::move(ep)), retry_(retry), http_(ep_.host, ep_.port) {
    http_.set_keep_alive(true);
    http_.set_tcp_nodelay(true);
    http_.set_connection_timeout(2);
    http_.set_read_timeout(60);
  }

  const Endpoint& endpoint() const noexcept { return ep_; }

  /// Returns the result member; error objects become RemoteError,
  /// exhausted transport retries RemoteUnavailableError.
  json call(const std::string& method, json params = json::object()) {
    const auto id = next_id_++;
    const std::string body = json{{"jsonrpc", "2.0"}, {"id", id}, {"method", method}, {"params", std::move(params)}}.dump();
    std::string failure;
    std::string reply;
    bool ok = false;
    {
      std::lock_guard lock(mu_);
      for (int attempt = 0; attempt <= retry_.retries; ++attempt) {
        if (attempt > 0) std::this_thread::sleep_for(retry_.backoff);
        auto res = http_.Post("/rpc", body, "application/json");
        if (!res) {
          failure = httplib::to_string(res.error());
          continue;
        }
        if (res->status != 200) {
          failure = "HTTP status " + std::to_string(res->status);
          continue;
        }
        reply = std::move(res->body);
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw RemoteUnavailableError("endpoint " + ep_.str() + " unavailable after " + std::to_string(retry_.retries + 1) +
                                   " attempts: " + failure);
    }
    json response;
    try {
      response = json::parse(reply);
    } catch (const json::parse_error& e) {
      throw RemoteError(rpc_code::parse_error, std::string("malformed response: ") + e.what());
    }
    if (!response.is_object() || response.value("id", json()) != id) {
      throw RemoteError(rpc_code::invalid_request, "response does not match request id " + std::to_string(id));
    }
    if (response.contains("error")) {
      const auto& err = response["error"];
      throw RemoteError(err.value("code", 0), err.value("message", std::string("remote error")));
    }
    if (!response.contains("result")) throw RemoteError(rpc_code::invalid_request, "response without result");
    return response["result"];
  }

  std::vector<ComponentDescriptor> describe() {
    auto result = call("describe");
    std::vector<ComponentDescriptor> out;
    try {
      for (const auto& d : result.at("components")) out.push_back(descriptor_from_json(d));
    } catch (const std::exception& e) {
      throw RemoteError(rpc_code::invalid_params, std::string("malformed describe result: ") + e.what());
    }
    return out;
  }

 private:
  Endpoint ep_;
  RetryPolicy retry_;
  std::mutex mu_;
  httplib::Client http_;
  std::atomic<std::int64_t> next_id_{1};
};

// ---------------------------------------------------------------------------
// Proxies

namespace detail {

inline ComponentDescriptor remote_descriptor(RpcClient& client, Kind kind, const std::string& name) {
  for (auto& d : client.describe()) {
    if (d.kind == kind && d.name == name) return d;
  }
  throw RemoteError(rpc_code::unknown_component, std::string("unknown ") + to_string(kind) + " component '" + name +
                                                     "' at " + client.endpoint().str());
}

inline json request_params(const std::string& name, const ParamBindings& params, const Environment& env) {
  return {{"component", name}, {"params", to_json(params)}, {"env", to_json(env)}};
}

template <class Out>
Threaded<Out> decode(const json& result, const char* field) {
  try {
    return {result.at(field).get<Out>(), environment_from_json(result.at("env"))};
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw RemoteError(rpc_code::invalid_params, std::string("malformed result: ") + e.what());
  }
}

inline Threaded<Solution> decode_solution(const json& result) {
  try {
    return {solution_from_json(result.at("solution")), environment_from_json(result.at("env"))};
  } catch (const json::exception& e) {
    throw RemoteError(rpc_code::invalid_params, std::string("malformed result: ") + e.what());
  }
}

}  // namespace detail

inline Perturb remote_perturb(std::shared_ptr<RpcClient> client, const std::string& component, ParamBindings params = {}) {
  auto d = detail::remote_descriptor(*client, Kind::perturb, component);
  return Perturb(std::move(d), [client, component, params](const Solution& s, Environment env) {
    auto p = detail::request_params(component, params, env);
    p["solution"] = to_json(s);
    return detail::decode_solution(client->call("perturb", std::move(p)));
  });
}

inline Accept remote_accept(std::shared_ptr<RpcClient> client, const std::string& component, ParamBindings params = {}) {
  auto d = detail::remote_descriptor(*client, Kind::accept, component);
  return Accept(std::move(d), [client, component, params](const Candidates<Solution>& c, Environment env) {
    auto p = detail::request_params(component, params, env);
    p["solutions"] = json::array({to_json(c.incumbent), to_json(c.incoming)});
    return detail::decode_solution(client->call("accept", std::move(p)));
  });
}

inline Evaluate remote_evaluate(std::shared_ptr<RpcClient> client, const std::string& component, ParamBindings params = {}) {
  auto d = detail::remote_descriptor(*client, Kind::evaluate, component);
  return Evaluate(std::move(d), [client, component, params](const Solution& s, Environment env) {
    auto p = detail::request_params(component, params, env);
    p["solution"] = to_json(s);
    return detail::decode<double>(client->call("evaluate", std::move(p)), "value");
  });
}

inline Terminate remote_terminate(std::shared_ptr<RpcClient> client, const std::string& component,
                                  ParamBindings params = {}) {
  auto d = detail::remote_descriptor(*client, Kind::terminate, component);
  return Terminate(std::move(d), [client, component, params](const Solution& s, Environment env) {
    auto p = detail::request_params(component, params, env);
    p["solution"] = to_json(s);
    return detail::decode<bool>(client->call("terminate", std::move(p)), "flag");
  });
}

inline Perturb remote_perturb(const Endpoint& ep, const std::string& component, ParamBindings params = {}) {
  return remote_perturb(std::make_shared<RpcClient>(ep), component, std::move(params));
}
inline Accept remote_accept(const Endpoint& ep, const std::string& component, ParamBindings params = {}) {
  return remote_accept(std::make_shared<RpcClient>(ep), component, std::move(params));
}
inline Evaluate remote_evaluate(const Endpoint& ep, const std::string& component, ParamBindings params = {}) {
  return remote_evaluate(std::make_shared<RpcClient>(ep), component, std::move(params));
}
inline Terminate remote_terminate(const Endpoint& ep, const std::string& component, ParamBindings params = {}) {
  return remote_terminate(std::make_shared<RpcClient>(ep), component, std::move(params));
}

}  // namespace metacomp

#endif  // METACOMP_RPC_HPP
