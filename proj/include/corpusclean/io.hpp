#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <stdexcept>
#include <string>

namespace corpusclean {

class IoError : public std::runtime_error {
 public:
  IoError(const std::string& what, std::uint64_t line_no = 0)
      : std::runtime_error(what), line_no_(line_no) {}
  std::uint64_t line_no() const { return line_no_; }

 private:
  std::uint64_t line_no_;
};

/// Writes to a sibling temporary file; commit() renames it over the target.
/// An uncommitted file is removed on destruction, so readers never observe a
/// partially written target.
class AtomicFile {
 public:
  explicit AtomicFile(std::filesystem::path target);
  ~AtomicFile();
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ostream& stream() { return out_; }
  const std::filesystem::path& target() const { return target_; }
  void commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path temp_;
  std::ofstream out_;
  bool committed_ = false;
};

std::ifstream open_input(const std::filesystem::path& path);

/// Counts '\n'-terminated lines; a final unterminated line counts as one.
std::uint64_t count_lines(const std::filesystem::path& path);

}  // namespace corpusclean
