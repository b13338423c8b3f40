#pragma once

// Shared process/filesystem helpers for the pipeline and acceptance
// tests. Catch2-free so the acceptance binary can use it too.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace support {

class TempDir {
 public:
  TempDir() {
    namespace fs = std::filesystem;
    std::mt19937_64 rng(std::random_device{}());
    for (int attempt = 0; attempt < 32; ++attempt) {
      fs::path candidate =
          fs::temp_directory_path() /
          ("gainlab_test_" + std::to_string(rng()));
      std::error_code ec;
      if (fs::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("could not create a temp directory");
  }

  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Runs a shell command, returning its exit status (-1 on abnormal exit).
inline int run_command(const std::string& command) {
  const int rc = std::system(command.c_str());
  if (rc == -1) return -1;
  if (WIFEXITED(rc)) return WEXITSTATUS(rc);
  return -1;
}

/// Path to the CLI under test, from the environment (set by CTest).
inline std::string cli_path_from_env() {
  const char* p = std::getenv("GAINLAB_CLI");
  return p ? p : "";
}

}  // namespace support
