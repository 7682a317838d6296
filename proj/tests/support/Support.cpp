#include "Support.hpp"

#include <cstdlib>
#include <fcntl.h>
#include <fstream>
#include <signal.h>
#include <spawn.h>
#include <sstream>
#include <stdexcept>
#include <sys/wait.h>

extern char **environ;

namespace duet::test {

std::filesystem::path fixture(const std::string &relative)
{
  return std::filesystem::path(DUET_FIXTURE_DIR) / relative;
}

std::filesystem::path cliPath()
{
  return DUET_CLI_PATH;
}

std::string readFile(const std::filesystem::path &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + path.string());
  }
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void writeFile(const std::filesystem::path &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

TempDir::TempDir()
{
  std::string pattern = (std::filesystem::temp_directory_path() / "duet-test-XXXXXX").string();
  if (!mkdtemp(pattern.data())) {
    throw std::runtime_error("mkdtemp failed");
  }
  _path = pattern;
}

TempDir::~TempDir()
{
  std::error_code ec;
  std::filesystem::remove_all(_path, ec);
}

Process::Process(const std::vector<std::string> &args, const std::filesystem::path &stdoutFile,
                 const std::filesystem::path &stderrFile)
{
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, 1, stdoutFile.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawn_file_actions_addopen(&actions, 2, stderrFile.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  std::vector<char *> argv;
  for (const auto &a : args) {
    argv.push_back(const_cast<char *>(a.c_str()));
  }
  argv.push_back(nullptr);
  const int rc = posix_spawn(&_pid, argv[0], &actions, nullptr, argv.data(), environ);
  posix_spawn_file_actions_destroy(&actions);
  if (rc != 0) {
    throw std::runtime_error("posix_spawn failed for " + args.front());
  }
}

Process::~Process()
{
  if (!_status) {
    kill(_pid, SIGKILL);
    wait();
  }
}

int Process::wait()
{
  if (!_status) {
    int status = 0;
    while (waitpid(_pid, &status, 0) < 0) {
    }
    _status = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
  }
  return *_status;
}

namespace {

std::vector<std::string> withCli(const std::vector<std::string> &args)
{
  std::vector<std::string> full{cliPath().string()};
  full.insert(full.end(), args.begin(), args.end());
  return full;
}

} // namespace

ProcessResult runCli(const std::vector<std::string> &args)
{
  TempDir       dir;
  Process       p(withCli(args), dir / "out", dir / "err");
  ProcessResult r;
  r.exitCode = p.wait();
  r.out      = readFile(dir / "out");
  r.err      = readFile(dir / "err");
  return r;
}

std::pair<ProcessResult, ProcessResult> runCliPair(const std::vector<std::string> &a, const std::vector<std::string> &b)
{
  TempDir                                 dir;
  Process                                 pa(withCli(a), dir / "a.out", dir / "a.err");
  Process                                 pb(withCli(b), dir / "b.out", dir / "b.err");
  std::pair<ProcessResult, ProcessResult> r;
  r.second.exitCode = pb.wait();
  r.first.exitCode  = pa.wait();
  r.first.out       = readFile(dir / "a.out");
  r.first.err       = readFile(dir / "a.err");
  r.second.out      = readFile(dir / "b.out");
  r.second.err      = readFile(dir / "b.err");
  return r;
}

} // namespace duet::test
