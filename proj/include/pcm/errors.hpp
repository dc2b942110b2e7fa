#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// bad map parameters, e.g. lambda + mu <= 1
class ParameterOutOfRange : public Error {
 public:
  using Error::Error;
};

class BoundaryUndefined : public Error {
 public:
  using Error::Error;
};

class OutsidePiece : public Error {
 public:
  using Error::Error;
};

class OutOfDomain : public Error {
 public:
  using Error::Error;
};

class PrefixTooShort : public Error {
 public:
  using Error::Error;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class RefinementExhausted : public Error {
 public:
  using Error::Error;
};

class NoCleanAtom : public Error {
 public:
  using Error::Error;
};

class DiscontinuityHit : public Error {
 public:
  using Error::Error;
};

class CheckFailed : public Error {
 public:
  using Error::Error;
};

class ConstructionFailed : public Error {
 public:
  ConstructionFailed(std::size_t stage, const std::string& what)
      : Error("construction failed at stage " + std::to_string(stage) + ": " + what), stage_(stage) {}
  std::size_t stage() const { return stage_; }

 private:
  std::size_t stage_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& where, const std::string& what)
      : Error("parse error at " + where + ": " + what), where_(where) {}
  const std::string& position() const { return where_; }

 private:
  std::string where_;
};

// gaps_base: c lies in closure(H_k)
class CViolation : public Error {
 public:
  explicit CViolation(std::size_t k)
      : Error("c lies in the closure of H_" + std::to_string(k)), k_(k) {}
  std::size_t k() const { return k_; }

 private:
  std::size_t k_;
};

}  // namespace pcm
