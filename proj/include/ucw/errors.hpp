#ifndef UCW_ERRORS_HPP
#define UCW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ucw {

// Error taxonomy mirrors the CLI exit codes and the C-API status values:
// invalid_argument / domain_error -> bad inputs, numerical_error -> a solve
// or fit that did not converge, check_failure -> a declared check missed.
class invalid_argument : public std::invalid_argument {
public:
    explicit invalid_argument(const std::string& msg) : std::invalid_argument(msg) {}
};

class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

class check_failure : public std::runtime_error {
public:
    explicit check_failure(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ucw

#endif
