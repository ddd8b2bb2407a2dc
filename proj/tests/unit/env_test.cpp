#include <gtest/gtest.h>

#include <filesystem>

#include "decide/env.hpp"
#include "decide/error.hpp"
#include "decide/lexicon.hpp"
#include "generators.hpp"

namespace decide {
namespace {

std::string version_of(const EnvSnapshot& s, std::string_view name) {
  const auto* c = s.find(name);
  if (!c) return "<absent>";
  return c->component.version ? c->component.version->str() : "<versionless>";
}

TEST(Probe, NativeTranscript) {
  auto runner = ReplayRunner::from_file(DECIDE_FIXTURES_DIR "/transcripts/native.json");
  auto snap = probe_local_stack(runner, default_lexicon());
  EXPECT_EQ(snap.environment_kind, EnvironmentKind::Native);
  EXPECT_EQ(version_of(snap, "tensorflow"), "1.15.0");  // tensorflow-gpu, local suffix dropped
  EXPECT_EQ(version_of(snap, "pytorch"), "1.4.0");      // "Torch" in pip freeze
  EXPECT_EQ(version_of(snap, "numpy"), "1.24.0");
  EXPECT_EQ(version_of(snap, "absl-py"), "0.15.0");
  EXPECT_EQ(version_of(snap, "cuda"), "10.2");
  EXPECT_EQ(version_of(snap, "python"), "3.8.10");  // python missing, python3 answers
  EXPECT_EQ(version_of(snap, "gcc"), "7.5.0");
  EXPECT_EQ(version_of(snap, "nvidia driver"), "440.33.1");
  EXPECT_EQ(version_of(snap, "apple m1"), "<absent>");
  EXPECT_EQ(version_of(snap, "mylib"), "<absent>");
  EXPECT_EQ(snap.find("cuda")->layer, StackLayer::Driver);

  // Every distinct command ran once and is logged with its digest.
  std::set<std::string> lines;
  for (const auto& c : snap.capture_log) {
    EXPECT_TRUE(lines.insert(c.command_line).second) << c.command_line;
    EXPECT_EQ(c.digest.size(), 64u);
  }
  ASSERT_TRUE(snap.find("cuda")->source);
  EXPECT_EQ(snap.capture_log[*snap.find("cuda")->source].command_line, "nvcc --version");
  EXPECT_EQ(snap.capture_log[*snap.find("numpy")->source].command_line, "pip freeze");
  EXPECT_TRUE(lines.contains("python --version"));
}

TEST(Probe, CondaTranscriptWithHardware) {
  auto runner = ReplayRunner::from_file(DECIDE_FIXTURES_DIR "/transcripts/conda.json");
  auto snap = probe_local_stack(runner, default_lexicon());
  EXPECT_EQ(snap.environment_kind, EnvironmentKind::Conda);
  EXPECT_EQ(version_of(snap, "cuda"), "10.1.243");  // cudatoolkit
  EXPECT_EQ(version_of(snap, "tensorflow"), "2.5.0");
  EXPECT_EQ(version_of(snap, "python"), "3.8.5");
  EXPECT_EQ(version_of(snap, "macos"), "11.2.3");
  EXPECT_EQ(version_of(snap, "apple m1"), "<versionless>");
  EXPECT_EQ(version_of(snap, "arm"), "<absent>");
  EXPECT_EQ(snap.find("apple m1")->layer, StackLayer::Hardware);
  for (const auto& c : snap.capture_log) EXPECT_NE(c.command_line, "pip freeze");
}

TEST(Probe, DigestCoversBothStreams) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  ReplayRunner a({{"sh", {"-c", "echo $CONDA_PREFIX"}, {0, "", ""}}, {"pip", {"freeze"}, {0, "x==1.0\n", ""}}});
  ReplayRunner b({{"sh", {"-c", "echo $CONDA_PREFIX"}, {0, "", ""}}, {"pip", {"freeze"}, {0, "x==1.0\n", "warn"}}});
  auto sa = probe_local_stack(a, default_lexicon());
  auto sb = probe_local_stack(b, default_lexicon());
  EXPECT_NE(sa.capture_log[1].digest, sb.capture_log[1].digest);
  EXPECT_EQ(sa.capture_log[1].digest, sha256_hex(std::string("x==1.0\n") + '\0'));
  EXPECT_EQ(version_of(sa, "x"), "1.0");
}

TEST(Probe, UnrecordedCommandsLookMissing) {
  ReplayRunner empty({});
  auto r = empty.run("nvcc", {"--version"});
  EXPECT_EQ(r.exit_status, 127);
  auto snap = probe_local_stack(empty, default_lexicon());
  EXPECT_TRUE(snap.components.empty());
  EXPECT_EQ(detect_environment(empty), EnvironmentKind::Native);
}

TEST(Transcript, RecordingRoundTrip) {
  ReplayRunner inner({{"tool", {"--version"}, {0, "tool 1.2\n", "note"}}});
  RecordingRunner rec(inner);
  rec.run("tool", {"--version"});
  rec.run("other", {});
  ASSERT_EQ(rec.entries().size(), 2u);
  auto replay = ReplayRunner::from_json(rec.transcript_json());
  auto r = replay.run("tool", {"--version"});
  EXPECT_EQ(r.out, "tool 1.2\n");
  EXPECT_EQ(r.err, "note");
  EXPECT_EQ(replay.run("other", {}).exit_status, 127);
  EXPECT_THROW(ReplayRunner::from_json("{}"), FormatError);
  EXPECT_THROW(ReplayRunner::from_json("[{\"args\": []}]"), FormatError);
}

TEST(SystemRunner, RunsRealProcesses) {
  SystemCommandRunner runner(5);
  auto ok = runner.run("sh", {"-c", "echo out; echo err >&2; exit 3"});
  EXPECT_EQ(ok.exit_status, 3);
  EXPECT_EQ(ok.out, "out\n");
  EXPECT_EQ(ok.err, "err\n");
  EXPECT_EQ(runner.run("definitely-not-a-command-decide", {}).exit_status, 127);
  SystemCommandRunner quick(1);
  EXPECT_EQ(quick.run("sleep", {"5"}).exit_status, 124);
}

TEST(Snapshot, RoundTripIsByteStable) {
  testing::Rng rng(12);
  for (int round = 0; round < 20; ++round) {
    auto snap = testing::random_snapshot(rng, rng.between(0, 50));
    auto text = serialize_snapshot(snap);
    auto back = deserialize_snapshot(text);
    EXPECT_EQ(back, snap);
    EXPECT_EQ(serialize_snapshot(back), text);
  }
}

TEST(Snapshot, FilesAndErrors) {
  auto snap = load_snapshot(DECIDE_FIXTURES_DIR "/motivating/env.json");
  EXPECT_EQ(version_of(snap, "cuda"), "10.2");
  auto path = std::filesystem::temp_directory_path() / "decide_snapshot_test.json";
  save_snapshot(snap, path);
  EXPECT_EQ(load_snapshot(path), snap);
  std::filesystem::remove(path);

  auto text = serialize_snapshot(snap);
  EXPECT_THROW(deserialize_snapshot(text.substr(0, text.size() - 20)), FormatError);
  auto bumped = text;
  bumped.replace(bumped.find("\"schema_version\": 1"), 19, "\"schema_version\": 7");
  EXPECT_THROW(deserialize_snapshot(bumped), SchemaError);
  auto versionless = text;
  versionless.replace(versionless.find("\"10.2\""), 6, "null");
  EXPECT_THROW(deserialize_snapshot(versionless), FormatError);
  EXPECT_EQ(parse_environment_kind("conda"), EnvironmentKind::Conda);
  EXPECT_THROW(parse_environment_kind("venv"), FormatError);
}

TEST(Snapshot, PutKeepsNameOrder) {
  EnvSnapshot s;
  s.put({{"b", Version{{1}, false}}, StackLayer::Library, std::nullopt});
  s.put({{"a", Version{{1}, false}}, StackLayer::Library, std::nullopt});
  s.put({{"b", Version{{2}, false}}, StackLayer::Library, std::nullopt});
  ASSERT_EQ(s.components.size(), 2u);
  EXPECT_EQ(s.components[0].component.name, "a");
  EXPECT_EQ(version_of(s, "b"), "2");
}

}  // namespace
}  // namespace decide
