#pragma once

// Atomic output files and run directories with content hashes.

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace stratwave {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

/// Stages a run in "<target>.tmp-<pid>" and renames it to <target> on commit.
/// A directory that was never committed is removed on destruction, so the
/// target either holds a complete manifest or does not exist.
class RunDirectory {
 public:
  explicit RunDirectory(std::filesystem::path target);
  ~RunDirectory();
  RunDirectory(const RunDirectory&) = delete;
  RunDirectory& operator=(const RunDirectory&) = delete;

  const std::filesystem::path& staging() const { return staging_; }
  const std::filesystem::path& target() const { return target_; }

  /// Writes a file under the staging directory and records its hash.
  void add_file(const std::string& name, const std::string& content);
  const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

  /// Writes `manifest_name` (not itself hashed) and publishes the directory.
  /// An existing target is replaced.
  void commit(const std::string& manifest_name, const std::string& manifest_content);

 private:
  std::filesystem::path target_;
  std::filesystem::path staging_;
  std::vector<std::pair<std::string, std::string>> files_;
  bool committed_ = false;
};

}  // namespace stratwave
