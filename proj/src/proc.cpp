#include "obf/proc.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <thread>

#include "obf/errors.hpp"

namespace obf {

RunResult run_shell(const std::string& command, std::optional<int> timeout_ms) {
  const pid_t pid = fork();
  if (pid < 0) raise(Errc::IoFailure, "fork failed");
  if (pid == 0) {
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(timeout_ms.value_or(0));
  int status = 0;
  for (;;) {
    const pid_t r = waitpid(pid, &status, timeout_ms ? WNOHANG : 0);
    if (r == pid) break;
    if (r < 0 && errno != EINTR) raise(Errc::IoFailure, "waitpid failed");
    if (r == 0) {
      if (std::chrono::steady_clock::now() >= deadline) {
        kill(pid, SIGKILL);
        waitpid(pid, &status, 0);
        return RunResult{-1, true};
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(2));
    }
  }
  RunResult result;
  if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else
    result.exit_code = -1;
  return result;
}

TempFile::TempFile(const std::string& suffix) {
  static std::atomic<std::uint64_t> counter{0};
  const auto dir = std::filesystem::temp_directory_path();
  path_ = (dir / ("obf-" + std::to_string(getpid()) + "-" +
                  std::to_string(counter.fetch_add(1)) + suffix))
              .string();
}

TempFile::~TempFile() {
  std::error_code ec;
  std::filesystem::remove(path_, ec);
}

std::string replace_all(std::string text, const std::string& token, const std::string& value) {
  std::size_t pos = 0;
  while ((pos = text.find(token, pos)) != std::string::npos) {
    text.replace(pos, token.size(), value);
    pos += value.size();
  }
  return text;
}

}  // namespace obf
