#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <sys/types.h>
#include <vector>

namespace duet::test {

std::filesystem::path fixture(const std::string &relative);
std::filesystem::path cliPath();

std::string readFile(const std::filesystem::path &path);
void        writeFile(const std::filesystem::path &path, const std::string &text);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir &)            = delete;
  TempDir &operator=(const TempDir &) = delete;

  const std::filesystem::path &path() const { return _path; }
  std::filesystem::path        operator/(const std::string &name) const { return _path / name; }

private:
  std::filesystem::path _path;
};

struct ProcessResult {
  int         exitCode = -1;
  std::string out;
  std::string err;
};

/// Child process started with posix_spawn; stdout/stderr go to files.
class Process {
public:
  Process(const std::vector<std::string> &args, const std::filesystem::path &stdoutFile,
          const std::filesystem::path &stderrFile);
  ~Process();
  Process(const Process &)            = delete;
  Process &operator=(const Process &) = delete;

  /// Exit code, or 128 + signal number.
  int wait();

private:
  pid_t _pid = -1;
  std::optional<int> _status;
};

/// Runs the duet CLI with `args` in a scratch directory and collects its output.
ProcessResult runCli(const std::vector<std::string> &args);

/// Runs two CLI invocations concurrently (first started first).
std::pair<ProcessResult, ProcessResult> runCliPair(const std::vector<std::string> &a,
                                                   const std::vector<std::string> &b);

} // namespace duet::test
