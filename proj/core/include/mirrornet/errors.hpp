#ifndef MIRRORNET_ERRORS_HPP
#define MIRRORNET_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mirrornet {

// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A pixel intensity outside [0, 255].
class InvalidIntensity : public Error {
public:
    using Error::Error;
};

// A non-finite real where a finite one is required.
class InvalidValue : public Error {
public:
    using Error::Error;
};

// File could not be read or written.
class IoFailure : public Error {
public:
    using Error::Error;
};

// An image does not have the expected width/height.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

// Malformed file content (PGM header, model file, codes file, ...).
class FormatError : public Error {
public:
    using Error::Error;
};

// Inconsistent vector/matrix/layer dimensions.
class ShapeError : public Error {
public:
    using Error::Error;
};

// Training produced a non-finite error or gradient.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

class EmptyDataset : public Error {
public:
    using Error::Error;
};

// Seed selection could not place all k seeds at the required
// pairwise distance. Records how many were placed before giving up.
class SeedSelectionFailure : public Error {
public:
    SeedSelectionFailure(const std::string& msg, std::size_t placed)
        : Error(msg), seeds_placed(placed) {}
    std::size_t seeds_placed;
};

// Exhaustive search refused because the problem is too large.
class ComplexityRefusal : public Error {
public:
    using Error::Error;
};

// Invalid corpus generation parameters.
class CorpusSpecError : public Error {
public:
    using Error::Error;
};

} // namespace mirrornet

#endif // MIRRORNET_ERRORS_HPP
