#pragma once

#include <stdexcept>
#include <string>

namespace oim {

struct RankDeficient : std::runtime_error {
  explicit RankDeficient(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : std::invalid_argument {
  explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

struct NotHermitian : std::invalid_argument {
  explicit NotHermitian(const std::string& what) : std::invalid_argument(what) {}
};

struct DomainError : std::domain_error {
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

struct MissingBases : std::invalid_argument {
  explicit MissingBases(const std::string& what) : std::invalid_argument(what) {}
};

struct InvalidWindow : std::invalid_argument {
  explicit InvalidWindow(const std::string& what) : std::invalid_argument(what) {}
};

struct ConfigError : std::invalid_argument {
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace oim
