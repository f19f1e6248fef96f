#pragma once

#include <stdexcept>
#include <string>

namespace imdrive {

// Integration produced a non-finite state.
class DivergenceError : public std::runtime_error {
public:
    explicit DivergenceError(const std::string& what) : std::runtime_error(what) {}
};

// Config file problem, annotated with the offending line when known.
class ConfigError : public std::runtime_error {
public:
    ConfigError(int line, const std::string& what)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    explicit ConfigError(const std::string& what) : ConfigError(0, what) {}

    int line() const { return line_; }

private:
    int line_;
};

} // namespace imdrive
