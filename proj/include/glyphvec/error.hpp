#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glyphvec {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller violated a documented precondition (bad argument, wrong
// coordinate space, invalid config).
struct PreconditionError : Error {
    explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// The input image contains no glyph ink after binarization.
struct EmptyGlyphError : Error {
    explicit EmptyGlyphError(const std::string& msg) : Error(msg) {}
};

// A metric was asked to score an empty stroke sequence where a
// non-empty one is required.
struct EmptyInputError : Error {
    explicit EmptyInputError(const std::string& msg) : Error(msg) {}
};

// Unrecoverable defect in a bezierseq document. `offset` is the byte
// position in the original text where the defect was detected.
struct ParseError : Error {
    std::size_t offset;
    ParseError(std::size_t offset_, const std::string& msg)
        : Error(msg + " (byte " + std::to_string(offset_) + ")"), offset(offset_) {}
};

// File decode/encode failures (PNG, PGM).
struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

} // namespace glyphvec
