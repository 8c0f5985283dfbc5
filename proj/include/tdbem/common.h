#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace tdbem {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

// Error categories. Each carries a plain message; callers add context.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct GeometryError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SpaceError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical accuracy failure; keeps the best available estimate.
struct AccuracyError : std::runtime_error {
  AccuracyError(const std::string& what, double estimate)
      : std::runtime_error(what), best_estimate(estimate) {}
  double best_estimate;
};

struct ConditioningError : std::runtime_error {
  ConditioningError(const std::string& what, double cond)
      : std::runtime_error(what), condition_estimate(cond) {}
  double condition_estimate;
};

constexpr double pi = 3.14159265358979323846;

}  // namespace tdbem
