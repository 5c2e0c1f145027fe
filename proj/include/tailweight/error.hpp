#ifndef TAILWEIGHT_ERROR_HPP
#define TAILWEIGHT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace tailweight {

// Every failure raised by the library derives from tailweight::error. The
// category decides how the command-line front end reports it.
enum class error_category {
  validation,   // malformed user input or violated invariant
  domain,       // argument outside the mathematical domain of an operation
  precondition, // sample-dependent requirement not met (e.g. X <= 1 in window)
  degenerate,   // sample makes the statistic undefined (zero variance, ...)
  numerical,    // quadrature / iteration failed to converge
  io            // file system
};

class error : public std::runtime_error {
 public:
  error(error_category category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  error_category category() const noexcept { return category_; }

 private:
  error_category category_;
};

class validation_error : public error {
 public:
  explicit validation_error(const std::string& what)
      : error(error_category::validation, what) {}
};

class domain_error : public error {
 public:
  explicit domain_error(const std::string& what)
      : error(error_category::domain, what) {}
};

class precondition_error : public error {
 public:
  explicit precondition_error(const std::string& what)
      : error(error_category::precondition, what) {}
};

class degenerate_sample_error : public error {
 public:
  explicit degenerate_sample_error(const std::string& what)
      : error(error_category::degenerate, what) {}
};

class numerical_error : public error {
 public:
  explicit numerical_error(const std::string& what)
      : error(error_category::numerical, what) {}
};

class io_error : public error {
 public:
  explicit io_error(const std::string& what)
      : error(error_category::io, what) {}
};

}  // namespace tailweight

#endif  // TAILWEIGHT_ERROR_HPP
