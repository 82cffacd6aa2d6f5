#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// path of the command-line binary, passed by ctest as --cli=<path>
extern std::string g_cli_path;

// fresh scratch directory per test, removed on destruction
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    root_ = std::filesystem::temp_directory_path() /
            ("miriad-test-" + tag + "-" + std::to_string(counter()++));
    std::filesystem::remove_all(root_);
    std::filesystem::create_directories(root_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(root_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return root_; }
  std::filesystem::path operator/(const std::string& name) const {
    return root_ / name;
  }

 private:
  static int& counter() {
    static int n = 0;
    return n;
  }
  std::filesystem::path root_;
};

inline void write_file(const std::filesystem::path& path,
                       const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

// runs the CLI via the shell; arguments must already be quoted as needed
inline CliResult run_cli(const std::string& args,
                         const std::filesystem::path& capture_dir) {
  CliResult result;
  auto out_file = capture_dir / "cli-output.txt";
  std::string command =
      "\"" + g_cli_path + "\" " + args + " > \"" + out_file.string() +
      "\" 2>&1";
  int status = std::system(command.c_str());
  result.exit_code = status < 0 ? status : WEXITSTATUS(status);
  result.output = read_file(out_file);
  return result;
}
