#ifndef NODAL3D_ERRORS_HPP
#define NODAL3D_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nodal3d {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ParameterOutOfRange : Error {
  using Error::Error;
};
struct QuadratureFailure : Error {
  using Error::Error;
};
struct DivergentMoment : Error {
  using Error::Error;
};
struct DivergentIntegral : Error {
  using Error::Error;
};
struct GridTooLarge : Error {
  using Error::Error;
};
struct NotPositiveDefinite : Error {
  using Error::Error;
};
struct IndexTooLarge : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace nodal3d

#endif
