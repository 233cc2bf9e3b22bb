#ifndef DECOPT_ERRORS_HPP
#define DECOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace decopt {

// Invalid user-supplied configuration (bad dimensions, k > n, eps <= 0, ...).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Graph-level failures: disconnected graph, retry budget exhausted.
struct TopologyError : std::runtime_error {
  explicit TopologyError(const std::string& what) : std::runtime_error(what) {}
};

// Requested combination is deliberately not supported (e.g. biased
// compressor inside a method that needs unbiasedness).
struct UnsupportedError : std::runtime_error {
  explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace decopt

#endif
