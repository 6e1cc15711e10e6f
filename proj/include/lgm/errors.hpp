#ifndef LGM_ERRORS_HPP_
#define LGM_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace lgm {

// All library errors carry a short machine-readable code (e.g. "UnknownVertex")
// next to the human-readable message.  Input errors map to CLI exit code 1,
// resource errors (enumeration guards, quadrature budgets) to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class ResourceError : public Error {
 public:
  using Error::Error;
};

[[noreturn]] inline void throw_input(const std::string& code, const std::string& message) {
  throw InputError(code, message);
}

[[noreturn]] inline void throw_resource(const std::string& code, const std::string& message) {
  throw ResourceError(code, message);
}

}  // namespace lgm

#endif  // LGM_ERRORS_HPP_
