#include "decide/oracles.hpp"

#include <cmath>

#include "decide/error.hpp"
#include "httplib.h"
#include "json.hpp"
#include "text.hpp"

namespace decide {

namespace {

constexpr const char* kModule = "qa-extraction";

using nlohmann::json;

std::string pair_label(const OracleRequest& r) {
  return "post " + std::to_string(r.post_id) + " (" + r.a.str() + ", " + r.b.str() + ") Q" +
         std::to_string(r.template_id);
}

}  // namespace

FixtureOracle FixtureOracle::from_tsv(std::string_view tsv) {
  FixtureOracle oracle;
  std::size_t line_no = 0;
  for (auto line : text::lines(tsv)) {
    ++line_no;
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto cols = text::split(line, '\t');
    auto where = "oracle fixture line " + std::to_string(line_no);
    if (cols.size() != 6) throw FormatError(kModule, where + ": expected 6 tab-separated columns");
    for (auto& c : cols) c = text::trim(c);

    std::optional<std::int64_t> post;
    if (cols[0] != "*") {
      try {
        post = std::stoll(std::string(cols[0]));
      } catch (const std::exception&) {
        throw FormatError(kModule, where + ": bad post id '" + std::string(cols[0]) + "'");
      }
    }
    std::optional<int> tmpl;
    if (cols[3] != "*") {
      auto ids = parse_template_strategy(cols[3]);
      if (ids.size() != 1) throw FormatError(kModule, where + ": expected one template");
      tmpl = ids.front();
    }
    auto answer = text::to_lower(cols[4]);
    bool yes;
    if (answer == "yes" || answer == "compatible") {
      yes = true;
    } else if (answer == "no" || answer == "incompatible") {
      yes = false;
    } else {
      throw FormatError(kModule, where + ": answer must be yes or no");
    }
    double loss;
    try {
      loss = std::stod(std::string(cols[5]));
    } catch (const std::exception&) {
      throw FormatError(kModule, where + ": bad loss '" + std::string(cols[5]) + "'");
    }
    oracle.script(post, parse_versioned_component(cols[1]), parse_versioned_component(cols[2]), tmpl,
                  OracleResponse{yes, loss});
  }
  return oracle;
}

FixtureOracle FixtureOracle::from_file(const std::string& path) { return from_tsv(text::read_file(path, kModule)); }

void FixtureOracle::script(std::optional<std::int64_t> post_id, const VersionedComponent& a,
                           const VersionedComponent& b, std::optional<int> template_id, OracleResponse response) {
  const auto& lo = a < b ? a : b;
  const auto& hi = a < b ? b : a;
  table_[Key{post_id.value_or(-1), lo, hi, template_id.value_or(0)}] = response;
}

OracleResponse FixtureOracle::ask(const OracleRequest& r) {
  const auto& lo = r.a < r.b ? r.a : r.b;
  const auto& hi = r.a < r.b ? r.b : r.a;
  for (auto [post, tmpl] : {std::pair<std::int64_t, int>{r.post_id, r.template_id},
                            {r.post_id, 0},
                            {-1, r.template_id},
                            {-1, 0}}) {
    auto it = table_.find(Key{post, lo, hi, tmpl});
    if (it != table_.end()) return it->second;
  }
  throw OracleError(kModule, "fixture oracle has no answer for " + pair_label(r));
}

OracleResponse parse_oracle_reply(std::string_view body) {
  json j;
  try {
    j = json::parse(body);
  } catch (const json::exception& e) {
    throw ProtocolError(kModule, std::string("oracle reply is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("answer") || !j.contains("loss")) {
    throw ProtocolError(kModule, "oracle reply must have \"answer\" and \"loss\"");
  }
  if (!j["answer"].is_string()) throw ProtocolError(kModule, "oracle \"answer\" must be a string");
  if (!j["loss"].is_number()) throw ProtocolError(kModule, "oracle \"loss\" must be a number");
  auto answer = text::to_lower(j["answer"].get<std::string>());
  OracleResponse r;
  if (answer.starts_with("yes")) {
    r.yes = true;
  } else if (answer.starts_with("no")) {
    r.yes = false;
  } else {
    throw ProtocolError(kModule, "oracle answer '" + answer + "' is neither yes nor no");
  }
  r.loss = j["loss"].get<double>();
  if (!std::isfinite(r.loss) || r.loss < 0) throw ProtocolError(kModule, "oracle loss must be finite and >= 0");
  return r;
}

HttpOracle::HttpOracle(std::string url, int timeout_seconds) : url_(std::move(url)), timeout_seconds_(timeout_seconds) {
  auto scheme = url_.find("://");
  if (scheme == std::string::npos) throw ConfigError(kModule, "oracle url needs a scheme: '" + url_ + "'");
  if (url_.compare(0, scheme, "http") != 0) throw ConfigError(kModule, "only http oracle urls are supported: '" + url_ + "'");
  auto path = url_.find('/', scheme + 3);
  origin_ = url_.substr(0, path);
  if (path != std::string::npos) {
    prefix_ = url_.substr(path);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }
}

OracleResponse HttpOracle::ask(const OracleRequest& r) {
  // One client per call: httplib clients are not meant to be shared across
  // threads.
  httplib::Client client(origin_);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  json body = {{"context", r.context}, {"question", r.question}};
  auto res = client.Post(prefix_ + "/v1/answer", body.dump(), "application/json");
  if (!res) {
    throw OracleError(kModule, "oracle at " + url_ + " unreachable for " + pair_label(r) + ": " +
                                   httplib::to_string(res.error()));
  }
  if (res->status >= 400 && res->status < 500) {
    std::string msg = res->body;
    try {
      auto j = json::parse(res->body);
      if (j.is_object() && j.contains("error") && j["error"].is_string()) msg = j["error"].get<std::string>();
    } catch (const json::exception&) {
    }
    throw OracleError(kModule, "oracle rejected " + pair_label(r) + " (HTTP " + std::to_string(res->status) + "): " + msg);
  }
  if (res->status != 200) {
    throw OracleError(kModule, "oracle failed for " + pair_label(r) + " (HTTP " + std::to_string(res->status) + ")");
  }
  return parse_oracle_reply(res->body);
}

std::string HttpOracle::health() {
  httplib::Client client(origin_);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  auto res = client.Get(prefix_ + "/v1/health");
  if (!res) throw OracleError(kModule, "oracle at " + url_ + " unreachable: " + httplib::to_string(res.error()));
  if (res->status != 200) throw OracleError(kModule, "oracle health check returned HTTP " + std::to_string(res->status));
  json j;
  try {
    j = json::parse(res->body);
  } catch (const json::exception& e) {
    throw ProtocolError(kModule, std::string("health reply is not JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("status", "") != "ok" || !j.contains("model") || !j["model"].is_string()) {
    throw ProtocolError(kModule, "health reply must be {\"status\":\"ok\",\"model\":...}");
  }
  return j["model"].get<std::string>();
}

}  // namespace decide
