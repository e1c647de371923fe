#pragma once

#include <optional>
#include <string>

namespace obf {

struct RunResult {
  int exit_code = -1;
  bool timed_out = false;
};

// Runs a command through /bin/sh, optionally killing it after timeout_ms.
RunResult run_shell(const std::string& command, std::optional<int> timeout_ms = std::nullopt);

// Unlink-on-destruction temporary file.
class TempFile {
 public:
  explicit TempFile(const std::string& suffix = "");
  ~TempFile();
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Replaces every occurrence of `token` in `text`.
std::string replace_all(std::string text, const std::string& token, const std::string& value);

}  // namespace obf
