#ifndef NERVE_ERRORS_HPP
#define NERVE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nerve {

enum class Errc {
  UnsupportedFamily,
  RankOutOfRange,
  DimensionMismatch,
  NotASubalgebra,
  NotEffective,
  DegenerateSpace,
  MultiplicityNotFree,
  TooManySummands,
  FlagNotInPoset,
  InvalidFlag,
  NotUnitVector,
  NotInSphereB,
  NonPositiveMetric,
  NotTwoSummand,
  WrongStructure,
  ComplexTooLarge,
  ConfigError,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace nerve

#endif
