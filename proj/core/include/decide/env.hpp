#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "decide/lexicon.hpp"
#include "decide/model.hpp"

namespace decide {

struct CommandResult {
  int exit_status = 0;
  std::string out;
  std::string err;
};

class CommandRunner {
 public:
  virtual ~CommandRunner() = default;
  /// A missing executable reports exit status 127.
  virtual CommandResult run(const std::string& command, const std::vector<std::string>& args) = 0;
};

/// Runs real processes (fork/exec, no shell unless the command is one).
class SystemCommandRunner : public CommandRunner {
 public:
  explicit SystemCommandRunner(int timeout_seconds = 30) : timeout_seconds_(timeout_seconds) {}
  CommandResult run(const std::string& command, const std::vector<std::string>& args) override;

 private:
  int timeout_seconds_;
};

struct TranscriptEntry {
  std::string command;
  std::vector<std::string> args;
  CommandResult result;
};

/// Replays a recorded transcript: JSON array of
/// {command, args, exit_status, stdout, stderr}. Unrecorded commands behave
/// like a missing executable (127).
class ReplayRunner : public CommandRunner {
 public:
  explicit ReplayRunner(std::vector<TranscriptEntry> entries);
  static ReplayRunner from_json(std::string_view json_text);
  static ReplayRunner from_file(const std::filesystem::path& path);

  CommandResult run(const std::string& command, const std::vector<std::string>& args) override;

 private:
  std::map<std::pair<std::string, std::vector<std::string>>, CommandResult> table_;
};

/// Forwards to another runner and keeps every exchange, for `probe --record`.
class RecordingRunner : public CommandRunner {
 public:
  explicit RecordingRunner(CommandRunner& inner) : inner_(inner) {}
  CommandResult run(const std::string& command, const std::vector<std::string>& args) override;
  const std::vector<TranscriptEntry>& entries() const { return entries_; }
  std::string transcript_json() const;

 private:
  CommandRunner& inner_;
  std::vector<TranscriptEntry> entries_;
};

enum class EnvironmentKind { Native, Conda };

std::string_view to_string(EnvironmentKind kind);
EnvironmentKind parse_environment_kind(std::string_view text);

/// Conda when `echo $CONDA_PREFIX` prints a non-empty path.
EnvironmentKind detect_environment(CommandRunner& runner);

struct CaptureEntry {
  std::string command_line;
  int exit_status = 0;
  /// SHA-256 (hex) of stdout, a NUL byte, then stderr.
  std::string digest;

  friend bool operator==(const CaptureEntry&, const CaptureEntry&) = default;
};

struct LocalComponent {
  VersionedComponent component;
  StackLayer layer = StackLayer::Library;
  /// Index of the capture_log entry the component was read from.
  std::optional<std::size_t> source;

  friend bool operator==(const LocalComponent&, const LocalComponent&) = default;
};

struct EnvSnapshot {
  EnvironmentKind environment_kind = EnvironmentKind::Native;
  /// Sorted by name, one entry per component.
  std::vector<LocalComponent> components;
  std::vector<CaptureEntry> capture_log;

  const LocalComponent* find(std::string_view name) const;
  /// Adds or replaces by name, keeping the order.
  void put(LocalComponent component);

  friend bool operator==(const EnvSnapshot&, const EnvSnapshot&) = default;
};

std::string sha256_hex(std::string_view data);

/// Package listing first (pip freeze, or conda list inside conda), then the
/// lexicon's probe commands for components the listing did not cover. Each
/// distinct command runs once. Failures are logged and the component left out.
EnvSnapshot probe_local_stack(CommandRunner& runner, const Lexicon& lexicon);

inline constexpr int kSnapshotSchemaVersion = 1;

std::string serialize_snapshot(const EnvSnapshot& snapshot);
/// Throws SchemaError on a schema_version mismatch, FormatError otherwise.
EnvSnapshot deserialize_snapshot(std::string_view json_text);
void save_snapshot(const EnvSnapshot& snapshot, const std::filesystem::path& path);
EnvSnapshot load_snapshot(const std::filesystem::path& path);

}  // namespace decide
