#pragma once

#include <Eigen/Dense>

#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>

namespace atlas {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration or command-line usage (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Level { main, sub };

std::string_view to_string(Level level);
Level level_from_string(std::string_view text);

/// A topic addressed across both levels of the hierarchy.
struct TopicRef {
  Level level = Level::main;
  int index = 0;

  auto operator<=>(const TopicRef&) const = default;
};

}  // namespace atlas
