#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>

#include "decide/qa.hpp"

namespace decide {

/// Scripted answers keyed on (post_id, pair, template). Built from a TSV with
/// columns post_id, component_a, component_b, template, answer, loss, where
/// post_id and template may be '*'. Components are written "name version";
/// the pair is unordered. Lookup prefers exact rows, then template '*', then
/// post '*', then both. An unscripted question raises OracleError.
class FixtureOracle : public Oracle {
 public:
  static FixtureOracle from_tsv(std::string_view tsv);
  static FixtureOracle from_file(const std::string& path);

  void script(std::optional<std::int64_t> post_id, const VersionedComponent& a, const VersionedComponent& b,
              std::optional<int> template_id, OracleResponse response);

  OracleResponse ask(const OracleRequest& request) override;
  std::size_t size() const { return table_.size(); }

 private:
  // post_id -1 and template 0 stand for '*'.
  using Key = std::tuple<std::int64_t, VersionedComponent, VersionedComponent, int>;
  std::map<Key, OracleResponse> table_;
};

/// Validates a 200 reply body: {"answer": "yes"|"no", "loss": finite >= 0}.
/// The answer is lowercased and must begin with "yes" or "no". Throws
/// ProtocolError.
OracleResponse parse_oracle_reply(std::string_view body);

/// Client for the HTTP oracle: POST <base>/v1/answer, GET <base>/v1/health.
class HttpOracle : public Oracle {
 public:
  /// `url` like "http://localhost:8000" (an optional path prefix is kept).
  explicit HttpOracle(std::string url, int timeout_seconds = 60);

  OracleResponse ask(const OracleRequest& request) override;
  /// Model identity reported by the health endpoint.
  std::string health();

  const std::string& url() const { return url_; }

 private:
  std::string url_;
  std::string origin_;
  std::string prefix_;
  int timeout_seconds_;
};

}  // namespace decide
