#pragma once

#include <stdexcept>
#include <string>

namespace conewave {

// Process exit codes used by the command line driver.
enum class ExitCode : int { Ok = 0, Usage = 1, Validation = 2, Numerical = 3 };

class Error : public std::runtime_error {
 public:
  Error(const std::string& what, ExitCode code) : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& w) : Error(w, ExitCode::Usage) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& w) : Error(w, ExitCode::Validation) {}
};

class GeometryError : public Error {
 public:
  explicit GeometryError(const std::string& w) : Error(w, ExitCode::Validation) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& w) : Error(w, ExitCode::Validation) {}
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& w) : Error(w, ExitCode::Validation) {}
};

class SubsonicViolation : public Error {
 public:
  SubsonicViolation(const std::string& w, int vertex = -1, double time = 0.0)
      : Error(w, ExitCode::Validation), vertex(vertex), time(time) {}
  int vertex;
  double time;
};

class SingularEvaluation : public Error {
 public:
  explicit SingularEvaluation(const std::string& w) : Error(w, ExitCode::Numerical) {}
};

class HorizonError : public Error {
 public:
  explicit HorizonError(const std::string& w) : Error(w, ExitCode::Numerical) {}
};

class AssemblyError : public Error {
 public:
  explicit AssemblyError(const std::string& w) : Error(w, ExitCode::Numerical) {}
};

class SolverError : public Error {
 public:
  SolverError(const std::string& w, double rcond) : Error(w, ExitCode::Numerical), rcond(rcond) {}
  double rcond;
};

class InstabilityError : public Error {
 public:
  InstabilityError(const std::string& w, int step) : Error(w, ExitCode::Numerical), step(step) {}
  int step;
};

}  // namespace conewave
