#pragma once

#include <stdexcept>
#include <string>

namespace sarjam {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Physical parameter outside its domain (negative bandwidth, f_s < B_r, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// Scatterer or region outside the configured scene / receive window.
class GeometryError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Non-finite cost or otherwise undefined numerical result.
class NumericalError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// A required artifact from an earlier run is absent.
class MissingArtifactError : public Error {
public:
    using Error::Error;
};

}  // namespace sarjam
