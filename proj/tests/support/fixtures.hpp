#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "corpusclean/langid.hpp"
#include "corpusclean/pipeline.hpp"
#include "oracle.hpp"
#include "synth.hpp"

namespace fixtures {

std::filesystem::path data_dir();
std::filesystem::path cli_binary();

// Model trained on the seed training split with the default orders; built once.
const corpusclean::LangIdModel& seed_model();
std::shared_ptr<const corpusclean::LangIdModel> seed_model_ptr();
const oracle::Scorer& seed_scorer();
// Sentences for en, et and fi from the full seed texts.
const synth::Pools& seed_pools();

std::vector<std::string> read_dir_lines(const std::filesystem::path& file);

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct RunResult {
  std::vector<int> verdict;  // per line: -1 kept, else FilterId value
  std::vector<std::string> kept_src;
  std::vector<std::string> kept_tgt;
  std::string rejects;       // TSV records, in order
  corpusclean::FilterReport report;
};

RunResult run_library(const corpusclean::PipelineConfig& config, const std::vector<std::string>& src,
                      const std::vector<std::string>& tgt);

oracle::Config oracle_config(const corpusclean::PipelineConfig& config);

}  // namespace fixtures
