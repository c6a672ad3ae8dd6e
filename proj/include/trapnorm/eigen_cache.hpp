#ifndef TRAPNORM_EIGEN_CACHE_HPP
#define TRAPNORM_EIGEN_CACHE_HPP

// Append-only text cache of refined eigenvalues, one record per line:
//   <problem-id> <N> <P_E> <E>
// A record satisfies any request for the same problem and state at P_E or
// fewer digits.

#include <trapnorm/bigreal.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>

namespace trapnorm {

class EigenCache {
 public:
  explicit EigenCache(std::filesystem::path path) : path_(std::move(path)) { load(); }

  const std::filesystem::path& path() const { return path_; }

  /// E to at least P_E digits, rounded to P_E + 5 digits, if cached.
  std::optional<Real> lookup(const std::string& problem, long N, long P_E) const {
    std::lock_guard lock(mutex_);
    auto it = best_.find({problem, N});
    if (it == best_.end() || it->second.first < P_E) return std::nullopt;
    return Real::parse(it->second.second, Digits(P_E + 5));
  }

  void store(const std::string& problem, long N, long P_E, const Real& E) {
    if (problem.find_first_of(" \t\n") != std::string::npos)
      throw std::invalid_argument("problem id must not contain whitespace");
    std::string text = E.to_string(Digits(P_E + 5));
    std::lock_guard lock(mutex_);
    auto& slot = best_[{problem, N}];
    if (slot.first < P_E) slot = {P_E, text};
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to eigenvalue cache " + path_.string());
    out << problem << ' ' << N << ' ' << P_E << ' ' << text << '\n';
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return best_.size();
  }

 private:
  void load() {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream is(line);
      std::string problem, value;
      long N = 0, P_E = 0;
      if (!(is >> problem >> N >> P_E >> value)) continue;  // skip torn or foreign lines
      auto& slot = best_[{problem, N}];
      if (slot.first < P_E) slot = {P_E, value};
    }
  }

  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, long>, std::pair<long, std::string>> best_;
};

}  // namespace trapnorm

#endif  // TRAPNORM_EIGEN_CACHE_HPP
