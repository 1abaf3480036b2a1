#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <random>
#include <string_view>

#include "corpusclean/io.hpp"
#include "corpusclean/pipeline.hpp"

namespace corpusclean {

namespace {

// Read-only memory map of a whole file.
class MappedFile {
 public:
  explicit MappedFile(const std::filesystem::path& path) {
    fd_ = ::open(path.c_str(), O_RDONLY);
    if (fd_ < 0) throw IoError("cannot open " + path.string() + " for reading");
    struct stat st {};
    if (::fstat(fd_, &st) != 0) {
      ::close(fd_);
      throw IoError("cannot stat " + path.string());
    }
    size_ = static_cast<std::size_t>(st.st_size);
    if (size_ > 0) {
      void* p = ::mmap(nullptr, size_, PROT_READ, MAP_PRIVATE, fd_, 0);
      if (p == MAP_FAILED) {
        ::close(fd_);
        throw IoError("cannot map " + path.string());
      }
      data_ = static_cast<const char*>(p);
    }
  }
  ~MappedFile() {
    if (data_ != nullptr) ::munmap(const_cast<char*>(data_), size_);
    if (fd_ >= 0) ::close(fd_);
  }
  MappedFile(const MappedFile&) = delete;
  MappedFile& operator=(const MappedFile&) = delete;

  std::string_view bytes() const { return {data_, size_}; }

 private:
  int fd_ = -1;
  const char* data_ = nullptr;
  std::size_t size_ = 0;
};

// Start offset of every line plus one past-the-end sentinel.
std::vector<std::uint64_t> line_starts(std::string_view bytes) {
  std::vector<std::uint64_t> starts;
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    starts.push_back(pos);
    const std::size_t nl = bytes.find('\n', pos);
    if (nl == std::string_view::npos) {
      pos = bytes.size();
      break;
    }
    pos = nl + 1;
  }
  starts.push_back(pos);
  return starts;
}

std::string_view line_at(std::string_view bytes, const std::vector<std::uint64_t>& starts, std::size_t i) {
  std::string_view line = bytes.substr(starts[i], starts[i + 1] - starts[i]);
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  return line;
}

// Uniform draw in [0, range) without modulo bias.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t range) {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * range;
  auto low = static_cast<std::uint64_t>(m);
  if (low < range) {
    const std::uint64_t threshold = (0 - range) % range;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * range;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace

std::vector<std::uint64_t> seeded_permutation(std::uint64_t n, std::uint64_t seed) {
  std::vector<std::uint64_t> perm(n);
  for (std::uint64_t i = 0; i < n; ++i) perm[i] = i;
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = n; i > 1; --i) {
    const std::uint64_t j = bounded(rng, i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

std::uint64_t combine_shuffle(std::span<const CorpusPaths> corpora, std::uint64_t seed,
                              const std::filesystem::path& src_out, const std::filesystem::path& tgt_out) {
  struct Mapped {
    std::unique_ptr<MappedFile> src;
    std::unique_ptr<MappedFile> tgt;
    std::vector<std::uint64_t> src_starts;
    std::vector<std::uint64_t> tgt_starts;
  };
  std::vector<Mapped> mapped;
  std::vector<std::uint64_t> first_index;  // global index of each corpus' first pair
  std::uint64_t total = 0;
  for (const auto& c : corpora) {
    Mapped m;
    m.src = std::make_unique<MappedFile>(c.src);
    m.tgt = std::make_unique<MappedFile>(c.tgt);
    m.src_starts = line_starts(m.src->bytes());
    m.tgt_starts = line_starts(m.tgt->bytes());
    const std::uint64_t ns = m.src_starts.size() - 1;
    const std::uint64_t nt = m.tgt_starts.size() - 1;
    if (ns != nt) throw AlignmentError(ns, nt, c.src.string() + " / " + c.tgt.string());
    first_index.push_back(total);
    total += ns;
    mapped.push_back(std::move(m));
  }

  const auto perm = seeded_permutation(total, seed);
  AtomicFile src_file(src_out);
  AtomicFile tgt_file(tgt_out);
  for (std::uint64_t g : perm) {
    const auto it = std::upper_bound(first_index.begin(), first_index.end(), g);
    const std::size_t c = static_cast<std::size_t>(it - first_index.begin()) - 1;
    const std::size_t local = static_cast<std::size_t>(g - first_index[c]);
    const Mapped& m = mapped[c];
    src_file.stream() << line_at(m.src->bytes(), m.src_starts, local) << '\n';
    tgt_file.stream() << line_at(m.tgt->bytes(), m.tgt_starts, local) << '\n';
  }
  src_file.commit();
  tgt_file.commit();
  return total;
}

}  // namespace corpusclean
