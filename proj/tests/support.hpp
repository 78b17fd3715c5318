#pragma once

#include "aptmine/oracle.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <unistd.h>

namespace aptmine::testing {

struct RandomCase {
  BuiltCorpus corpus;
  ExtractParams params;
};

/// Small random corpus for oracle comparisons: t_max <= 20, n_env <= 12,
/// max_dim <= 3, supp_lb in {1,2,3}, min_prob in {0, 0.5}.
inline RandomCase random_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed * 7919 + 17);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(rng() % (hi - lo + 1));
  };
  oracle::SynthSpec spec;
  spec.n_env = pick(2, 12);
  spec.t_max = pick(2, 20);
  spec.n_act = pick(1, spec.n_env);
  spec.density = 0.15 + 0.5 * static_cast<double>(rng() % 1000) / 1000.0;
  spec.seed = rng();
  if (spec.n_env >= 3 && spec.t_max >= 6 && rng() % 2 == 0) {
    const auto g = static_cast<AtomId>(pick(0, spec.n_act - 1));
    std::vector<AtomId> pre;
    for (AtomId a = 0; a < spec.n_env && pre.size() < 2; ++a)
      if (a != g && rng() % 2 == 0) pre.push_back(a);
    if (!pre.empty()) spec.planted.push_back({pre, g, 0.8, pick(1, spec.t_max / 3)});
  }
  ExtractParams params;
  params.max_dim = pick(1, 3);
  params.supp_lb = pick(1, 3);
  params.min_prob = rng() % 2 == 0 ? 0.0 : 0.5;
  return {oracle::generate_synthetic(spec), params};
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
  explicit TempDir(const std::string &tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("aptmine-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  std::string file(const std::string &name) const { return (path_ / name).string(); }

private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void spit(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

} // namespace aptmine::testing
