#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coevo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, int sweeps, double off_norm)
      : Error(what), sweeps_(sweeps), off_norm_(off_norm) {}
  int sweeps() const noexcept { return sweeps_; }
  double off_norm() const noexcept { return off_norm_; }

 private:
  int sweeps_;
  double off_norm_;
};

class NotCommuting : public Error {
 public:
  NotCommuting(double defect, double tol);
  double defect() const noexcept { return defect_; }
  double tolerance() const noexcept { return tol_; }

 private:
  double defect_;
  double tol_;
};

class ZeroVector : public Error {
 public:
  using Error::Error;
};

/// Pivot below the singularity floor during a linear solve.
class Singular : public Error {
 public:
  Singular(const std::string& what, double pivot) : Error(what), pivot_(pivot) {}
  double pivot() const noexcept { return pivot_; }

 private:
  double pivot_;
};

/// Y(t) of the linearised Riccati system is singular: t is a blow-up time.
class SingularY : public Singular {
 public:
  SingularY(double t, double pivot);
  double time() const noexcept { return t_; }

 private:
  double t_;
};

/// One diagonal mode of the commuting closed form has passed its pole.
class ModeSingular : public Error {
 public:
  ModeSingular(std::size_t mode, double t, double t_star);
  std::size_t mode() const noexcept { return mode_; }
  double time() const noexcept { return t_; }
  double t_star() const noexcept { return t_star_; }

 private:
  std::size_t mode_;
  double t_;
  double t_star_;
};

/// The series route is outside its usable radius (‖C‖ t² too large).
class SeriesRangeExceeded : public Error {
 public:
  using Error::Error;
};

class SelfLoopPresent : public Error {
 public:
  using Error::Error;
};

class ZeroOpinion : public Error {
 public:
  using Error::Error;
};

class InvalidK : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& msg);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class RejectedDirected : public Error {
 public:
  using Error::Error;
};

class NoLabels : public Error {
 public:
  using Error::Error;
};

}  // namespace coevo
