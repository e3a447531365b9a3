#pragma once

#include <stdexcept>
#include <string>

namespace stegodct {

// Failure categories; the CLI maps them onto its exit codes.
enum class ErrorKind {
    params,    // bad key/parameter/config values
    capacity,  // message does not fit the cover
    format,    // unsupported or corrupt file contents
    io,        // filesystem failure
    extract,   // extraction integrity (wrong key, damaged stego)
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

}  // namespace stegodct
