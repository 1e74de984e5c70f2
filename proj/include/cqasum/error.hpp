#ifndef CQASUM_ERROR_HPP
#define CQASUM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cqasum {

// Error categories map 1:1 onto CLI exit codes.
enum class ErrorKind : int {
    Config = 2,
    Data = 3,
    Backend = 4,
    Internal = 5,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }
    int exit_code() const noexcept { return static_cast<int>(kind_); }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_config(const std::string& msg) { throw Error(ErrorKind::Config, msg); }
[[noreturn]] inline void throw_data(const std::string& msg) { throw Error(ErrorKind::Data, msg); }
[[noreturn]] inline void throw_backend(const std::string& msg) { throw Error(ErrorKind::Backend, msg); }
[[noreturn]] inline void throw_internal(const std::string& msg) { throw Error(ErrorKind::Internal, msg); }

} // namespace cqasum

#endif // CQASUM_ERROR_HPP
