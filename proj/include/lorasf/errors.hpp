#pragma once

#include <stdexcept>
#include <string>

namespace lorasf {

// Base for every error raised by the library. The CLI maps these to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class ValueError : public Error {
public:
    using Error::Error;
};

class NoDataError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& key_path, const std::string& reason)
        : Error(key_path.empty() ? reason : key_path + ": " + reason),
          key_path_(key_path) {}

    const std::string& key_path() const noexcept { return key_path_; }

private:
    std::string key_path_;
};

class StationTooClose : public Error {
public:
    using Error::Error;
};

class InsufficientStations : public Error {
public:
    using Error::Error;
};

class SingularGeometry : public Error {
public:
    using Error::Error;
};

class MissingReference : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace lorasf
