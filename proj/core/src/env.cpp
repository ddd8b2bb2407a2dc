#include "decide/env.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstring>
#include <fstream>
#include <regex>
#include <set>

#include "decide/error.hpp"
#include "json.hpp"
#include "text.hpp"

namespace decide {

namespace {

constexpr const char* kModule = "env-prober";

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string command_line(const std::string& command, const std::vector<std::string>& args) {
  std::string out = command;
  for (const auto& a : args) out += " " + a;
  return out;
}

std::string normalize_package(std::string_view name) {
  auto s = text::to_lower(text::trim(name));
  std::replace(s.begin(), s.end(), '_', '-');
  return s;
}

// "name==1.2.3" lines; editable installs and direct references carry no
// usable version.
std::vector<std::pair<std::string, std::string>> parse_freeze(std::string_view out) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (auto line : text::lines(out)) {
    line = text::trim(line);
    if (line.empty() || line.front() == '#' || line.front() == '-') continue;
    auto eq = line.find("==");
    if (eq == std::string_view::npos) continue;
    rows.emplace_back(std::string(text::trim(line.substr(0, eq))), std::string(text::trim(line.substr(eq + 2))));
  }
  return rows;
}

// "name  version  build  [channel]" rows after '#' headers.
std::vector<std::pair<std::string, std::string>> parse_conda_list(std::string_view out) {
  std::vector<std::pair<std::string, std::string>> rows;
  for (auto line : text::lines(out)) {
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto squeezed = text::squeeze_spaces(t);
    auto parts = text::split(squeezed, ' ');
    if (parts.size() < 2) continue;
    rows.emplace_back(std::string(parts[0]), std::string(parts[1]));
  }
  return rows;
}

void read_available(int fd, std::string& sink, bool& open) {
  char buf[4096];
  auto n = ::read(fd, buf, sizeof buf);
  if (n > 0) {
    sink.append(buf, static_cast<std::size_t>(n));
  } else if (n == 0 || (errno != EINTR && errno != EAGAIN)) {
    open = false;
  }
}

}  // namespace

CommandResult SystemCommandRunner::run(const std::string& command, const std::vector<std::string>& args) {
  int out_pipe[2], err_pipe[2];
  if (::pipe(out_pipe) != 0) return {127, "", std::strerror(errno)};
  if (::pipe(err_pipe) != 0) {
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    return {127, "", std::strerror(errno)};
  }

  std::vector<char*> argv;
  argv.push_back(const_cast<char*>(command.c_str()));
  for (const auto& a : args) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) {
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
    return {127, "", std::strerror(errno)};
  }
  if (pid == 0) {
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) ::close(fd);
    int devnull = ::open("/dev/null", O_RDONLY);
    if (devnull >= 0) ::dup2(devnull, STDIN_FILENO);
    ::execvp(command.c_str(), argv.data());
    _exit(127);
  }
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  CommandResult result;
  bool out_open = true, err_open = true, timed_out = false;
  auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(timeout_seconds_);
  while (out_open || err_open) {
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      timed_out = true;
      ::kill(pid, SIGKILL);
      break;
    }
    pollfd fds[2] = {{out_open ? out_pipe[0] : -1, POLLIN, 0}, {err_open ? err_pipe[0] : -1, POLLIN, 0}};
    int rc = ::poll(fds, 2, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (out_open && (fds[0].revents & (POLLIN | POLLHUP | POLLERR))) read_available(out_pipe[0], result.out, out_open);
    if (err_open && (fds[1].revents & (POLLIN | POLLHUP | POLLERR))) read_available(err_pipe[0], result.err, err_open);
  }
  ::close(out_pipe[0]);
  ::close(err_pipe[0]);

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (timed_out) {
    result.exit_status = 124;
  } else if (WIFEXITED(status)) {
    result.exit_status = WEXITSTATUS(status);
  } else {
    result.exit_status = 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
  }
  return result;
}

ReplayRunner::ReplayRunner(std::vector<TranscriptEntry> entries) {
  // The first recording of a command wins.
  for (auto& e : entries) table_.emplace(std::make_pair(e.command, e.args), std::move(e.result));
}

ReplayRunner ReplayRunner::from_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw FormatError(kModule, std::string("transcript is not JSON: ") + e.what());
  }
  if (!doc.is_array()) throw FormatError(kModule, "transcript must be a JSON array");
  std::vector<TranscriptEntry> entries;
  for (const auto& row : doc) {
    try {
      TranscriptEntry e;
      e.command = row.at("command").get<std::string>();
      e.args = row.value("args", std::vector<std::string>{});
      e.result.exit_status = row.value("exit_status", 0);
      e.result.out = row.value("stdout", std::string{});
      e.result.err = row.value("stderr", std::string{});
      entries.push_back(std::move(e));
    } catch (const json::exception& e) {
      throw FormatError(kModule, std::string("bad transcript entry: ") + e.what());
    }
  }
  return ReplayRunner(std::move(entries));
}

ReplayRunner ReplayRunner::from_file(const std::filesystem::path& path) {
  return from_json(text::read_file(path.string(), kModule));
}

CommandResult ReplayRunner::run(const std::string& command, const std::vector<std::string>& args) {
  auto it = table_.find({command, args});
  if (it == table_.end()) return {127, "", command + ": not in transcript"};
  return it->second;
}

CommandResult RecordingRunner::run(const std::string& command, const std::vector<std::string>& args) {
  auto r = inner_.run(command, args);
  entries_.push_back(TranscriptEntry{command, args, r});
  return r;
}

std::string RecordingRunner::transcript_json() const {
  auto doc = ordered_json::array();
  for (const auto& e : entries_) {
    doc.push_back(ordered_json{{"command", e.command},
                               {"args", e.args},
                               {"exit_status", e.result.exit_status},
                               {"stdout", e.result.out},
                               {"stderr", e.result.err}});
  }
  return doc.dump(2) + "\n";
}

std::string_view to_string(EnvironmentKind kind) { return kind == EnvironmentKind::Conda ? "conda" : "native"; }

EnvironmentKind parse_environment_kind(std::string_view text) {
  if (text == "native") return EnvironmentKind::Native;
  if (text == "conda") return EnvironmentKind::Conda;
  throw FormatError(kModule, "unknown environment kind '" + std::string(text) + "'");
}

EnvironmentKind detect_environment(CommandRunner& runner) {
  auto r = runner.run("sh", {"-c", "echo $CONDA_PREFIX"});
  return r.exit_status == 0 && !text::trim(r.out).empty() ? EnvironmentKind::Conda : EnvironmentKind::Native;
}

const LocalComponent* EnvSnapshot::find(std::string_view name) const {
  auto it = std::lower_bound(components.begin(), components.end(), name,
                             [](const LocalComponent& c, std::string_view n) { return c.component.name < n; });
  return it != components.end() && it->component.name == name ? &*it : nullptr;
}

void EnvSnapshot::put(LocalComponent component) {
  auto it = std::lower_bound(components.begin(), components.end(), component.component.name,
                             [](const LocalComponent& c, const std::string& n) { return c.component.name < n; });
  if (it != components.end() && it->component.name == component.component.name) {
    *it = std::move(component);
  } else {
    components.insert(it, std::move(component));
  }
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(kModule, "SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

EnvSnapshot probe_local_stack(CommandRunner& runner, const Lexicon& lexicon) {
  EnvSnapshot snap;
  std::map<std::pair<std::string, std::vector<std::string>>, std::pair<std::size_t, CommandResult>> memo;

  auto run = [&](const std::string& command, const std::vector<std::string>& args) -> std::pair<std::size_t, CommandResult> {
    auto key = std::make_pair(command, args);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    auto r = runner.run(command, args);
    std::string raw = r.out;
    raw += '\0';
    raw += r.err;
    snap.capture_log.push_back(CaptureEntry{command_line(command, args), r.exit_status, sha256_hex(raw)});
    auto entry = std::make_pair(snap.capture_log.size() - 1, std::move(r));
    memo.emplace(key, entry);
    return entry;
  };

  auto canonical = [&](const std::string& name) {
    if (const auto* spec = lexicon.find(name)) return spec->canonical_name;
    return normalize_package(name);
  };

  {
    auto [index, r] = run("sh", {"-c", "echo $CONDA_PREFIX"});
    snap.environment_kind =
        r.exit_status == 0 && !text::trim(r.out).empty() ? EnvironmentKind::Conda : EnvironmentKind::Native;
  }

  auto [list_index, listing] = snap.environment_kind == EnvironmentKind::Conda ? run("conda", {"list"})
                                                                                : run("pip", {"freeze"});
  if (listing.exit_status == 0) {
    auto rows = snap.environment_kind == EnvironmentKind::Conda ? parse_conda_list(listing.out) : parse_freeze(listing.out);
    for (const auto& [raw_name, raw_version] : rows) {
      auto name = canonical(raw_name);
      if (snap.find(name)) continue;
      auto loose = parse_loose_version(raw_version);
      if (!loose) continue;
      snap.put(LocalComponent{VersionedComponent{name, loose->version}, lexicon.layer_of(name), list_index});
    }
  }

  for (const auto& entry : lexicon.entries()) {
    const auto& name = entry.spec.canonical_name;
    if (entry.probes.empty() || snap.find(name)) continue;
    for (const auto& probe : entry.probes) {
      auto [index, r] = run(probe.command, probe.args);
      if (r.exit_status != 0) continue;
      std::regex pattern;
      try {
        pattern = std::regex(probe.pattern);
      } catch (const std::regex_error&) {
        continue;
      }
      auto combined = r.out + "\n" + r.err;
      std::smatch m;
      if (!std::regex_search(combined, m, pattern)) continue;
      if (m.size() > 1 && m[1].matched) {
        auto loose = parse_loose_version(m[1].str());
        if (!loose) continue;
        snap.put(LocalComponent{VersionedComponent{name, loose->version}, entry.spec.layer, index});
      } else if (entry.spec.layer == StackLayer::Hardware) {
        snap.put(LocalComponent{VersionedComponent{name, std::nullopt}, entry.spec.layer, index});
      } else {
        continue;
      }
      break;
    }
  }
  return snap;
}

std::string serialize_snapshot(const EnvSnapshot& snap) {
  ordered_json doc;
  doc["schema_version"] = kSnapshotSchemaVersion;
  doc["environment_kind"] = to_string(snap.environment_kind);
  auto components = ordered_json::array();
  for (const auto& c : snap.components) {
    ordered_json row{{"name", c.component.name}};
    row["version"] = c.component.version ? ordered_json(c.component.version->str()) : ordered_json(nullptr);
    row["layer"] = to_string(c.layer);
    row["source"] = c.source ? ordered_json(*c.source) : ordered_json(nullptr);
    components.push_back(std::move(row));
  }
  doc["components"] = std::move(components);
  auto log = ordered_json::array();
  for (const auto& e : snap.capture_log) {
    log.push_back(ordered_json{{"command", e.command_line}, {"exit_status", e.exit_status}, {"digest", e.digest}});
  }
  doc["capture_log"] = std::move(log);
  return doc.dump(2) + "\n";
}

EnvSnapshot deserialize_snapshot(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(kModule, std::string("snapshot is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("schema_version")) throw SchemaError(kModule, "snapshot lacks schema_version");
  if (!doc["schema_version"].is_number_integer() || doc["schema_version"].get<int>() != kSnapshotSchemaVersion) {
    throw SchemaError(kModule, "snapshot schema_version: expected " + std::to_string(kSnapshotSchemaVersion) + ", found " +
                                   doc["schema_version"].dump());
  }
  EnvSnapshot snap;
  try {
    snap.environment_kind = parse_environment_kind(doc.value("environment_kind", std::string("native")));
    for (const auto& e : doc.value("capture_log", json::array())) {
      snap.capture_log.push_back(
          CaptureEntry{e.at("command").get<std::string>(), e.at("exit_status").get<int>(), e.at("digest").get<std::string>()});
    }
    for (const auto& c : doc.at("components")) {
      LocalComponent lc;
      lc.component.name = c.at("name").get<std::string>();
      if (c.contains("version") && !c["version"].is_null()) lc.component.version = parse_version(c["version"].get<std::string>());
      lc.layer = parse_stack_layer(c.value("layer", std::string("library")));
      if (c.contains("source") && !c["source"].is_null()) {
        lc.source = c["source"].get<std::size_t>();
        if (*lc.source >= snap.capture_log.size()) {
          throw FormatError(kModule, "component " + lc.component.name + " cites a missing capture_log entry");
        }
      }
      if (!lc.component.version && lc.layer != StackLayer::Hardware) {
        throw FormatError(kModule, "component " + lc.component.name + " has no version");
      }
      if (snap.find(lc.component.name)) throw FormatError(kModule, "component " + lc.component.name + " listed twice");
      snap.put(std::move(lc));
    }
  } catch (const json::exception& e) {
    throw FormatError(kModule, std::string("malformed snapshot: ") + e.what());
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(kModule, std::string("malformed snapshot: ") + e.what());
  }
  return snap;
}

void save_snapshot(const EnvSnapshot& snapshot, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(kModule, "cannot write " + path.string());
  out << serialize_snapshot(snapshot);
  if (!out.flush()) throw IoError(kModule, "failed writing " + path.string());
}

EnvSnapshot load_snapshot(const std::filesystem::path& path) {
  return deserialize_snapshot(text::read_file(path.string(), kModule));
}

}  // namespace decide
