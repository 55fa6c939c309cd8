#pragma once

#include <stdexcept>
#include <string>

namespace martin_games {

// Failure classes map onto CLI exit codes (parse=2, solver=3, assertion=4, cap=5).
enum class ErrorClass { kInvalid = 1, kParse = 2, kSolver = 3, kAssertion = 4, kCap = 5 };

class MartinError : public std::runtime_error {
 public:
  MartinError(ErrorClass cls, const std::string& what)
      : std::runtime_error(what), class_(cls) {}
  ErrorClass error_class() const { return class_; }

 private:
  ErrorClass class_;
};

struct InvalidInputError : MartinError {
  explicit InvalidInputError(const std::string& what)
      : MartinError(ErrorClass::kInvalid, what) {}
};

struct ParseError : MartinError {
  ParseError(const std::string& what, int line = 0, int column = 0)
      : MartinError(ErrorClass::kParse, what), line(line), column(column) {}
  int line;
  int column;
};

struct SolverError : MartinError {
  SolverError(const std::string& what, double best_residual = 0.0)
      : MartinError(ErrorClass::kSolver, what), best_residual(best_residual) {}
  double best_residual;
};

struct UnsupportedError : MartinError {
  explicit UnsupportedError(const std::string& what)
      : MartinError(ErrorClass::kSolver, what) {}
};

struct CapExceededError : MartinError {
  CapExceededError(const std::string& what, double count)
      : MartinError(ErrorClass::kCap, what), count(count) {}
  double count;
};

// Raised when a profile has no entry at a history the evaluation reaches.
struct IncompleteStrategyError : MartinError {
  explicit IncompleteStrategyError(const std::string& history_key)
      : MartinError(ErrorClass::kInvalid,
                    "strategy undefined at reachable history " + history_key),
        history(history_key) {}
  std::string history;
};

struct IncompleteMartinError : MartinError {
  explicit IncompleteMartinError(const std::string& history_key)
      : MartinError(ErrorClass::kInvalid,
                    "Martin function undefined at one-step extension of " + history_key),
        history(history_key) {}
  std::string history;
};

}  // namespace martin_games
