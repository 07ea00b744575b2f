#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace svstokes {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 &operator+=(const Vec2 &o) { x += o.x; y += o.y; return *this; }
  Vec2 &operator-=(const Vec2 &o) { x -= o.x; y -= o.y; return *this; }
  Vec2 &operator*=(double s) { x *= s; y *= s; return *this; }
  friend bool operator==(const Vec2 &, const Vec2 &) = default;
};

inline Vec2 operator+(Vec2 a, const Vec2 &b) { return a += b; }
inline Vec2 operator-(Vec2 a, const Vec2 &b) { return a -= b; }
inline Vec2 operator*(double s, Vec2 a) { return a *= s; }
inline Vec2 operator*(Vec2 a, double s) { return a *= s; }
inline double dot(const Vec2 &a, const Vec2 &b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2 &a) { return std::hypot(a.x, a.y); }

// grad[c][d] = d u_c / d x_d
using Mat2 = std::array<std::array<double, 2>, 2>;

// Barycentric coordinates (lambda_0, lambda_1, lambda_2) on a triangle.
using Barycentric = std::array<double, 3>;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  ParseError(std::size_t line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class UnsupportedError : public Error {
public:
  using Error::Error;
};

class MeshError : public Error {
public:
  using Error::Error;
};

class SingularSystemError : public Error {
public:
  using Error::Error;
};

class DefinitenessError : public Error {
public:
  DefinitenessError(long pivot, const std::string &what)
      : Error(what), pivot_(pivot) {}
  long pivot() const { return pivot_; }

private:
  long pivot_;
};

} // namespace svstokes
