#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace swe {

template <std::floating_point Scalar> using Vec2 = Eigen::Matrix<Scalar, 2, 1>;
template <std::floating_point Scalar> using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
template <std::floating_point Scalar> using Mat2 = Eigen::Matrix<Scalar, 2, 2>;
template <std::floating_point Scalar> using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

template <std::floating_point Scalar> inline constexpr Scalar kPi = std::numbers::pi_v<Scalar>;
template <std::floating_point Scalar> inline constexpr Scalar kTwoPi = 2 * std::numbers::pi_v<Scalar>;

enum class ErrorKind {
  NonPositiveDepth,
  NewtonDiverged,
  SingularSystem,
  OutOfPanel,
  PoleSingularity,
  NoExactSolution,
  Usage,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NonPositiveDepth: return "NonPositiveDepth";
    case ErrorKind::NewtonDiverged: return "NewtonDiverged";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::OutOfPanel: return "OutOfPanel";
    case ErrorKind::PoleSingularity: return "PoleSingularity";
    case ErrorKind::NoExactSolution: return "NoExactSolution";
    case ErrorKind::Usage: return "Usage";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

/// 2-D cross product a × b = a₀b₁ − a₁b₀.
template <std::floating_point Scalar>
inline Scalar cross2(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

/// Angle reduced to [0, 2π).
template <std::floating_point Scalar>
inline Scalar wrap_angle(Scalar theta) {
  Scalar r = std::fmod(theta, kTwoPi<Scalar>);
  if (r < 0) r += kTwoPi<Scalar>;
  if (r >= kTwoPi<Scalar>) r -= kTwoPi<Scalar>;
  return r;
}

}  // namespace swe
