#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "glyphvec/geometry.hpp"

namespace glyphvec {

enum class ParseMode { strict, lenient };

struct ParseDiagnostics {
    struct Entry {
        std::size_t offset; // byte position in the input text
        std::string message;
    };
    std::vector<Entry> errors;
    bool recovered = false; // lenient mode salvaged past a defect

    bool clean() const { return errors.empty(); }
};

struct ParseResult {
    StrokeSequence sequence;
    ParseDiagnostics diagnostics;
};

// Canonical text form of a normalized stroke sequence:
//   <bezierseq><bezier>(x y) (x y)...</bezier>...</bezierseq>
// Coordinates are clamped to [0,1] and printed with `precision` decimals.
// Throws PreconditionError for pixel-space input.
std::string emit_bezierseq(const StrokeSequence& sequence, int precision = 3);

// Parses bezierseq text. Tolerates whitespace anywhere between tokens and
// prose outside the outermost tags. Strokes with fewer than 2 or more than
// 4 points are rejected; out-of-range coordinates are clamped. In lenient
// mode every parseable stroke is returned alongside diagnostics; in strict
// mode the first defect throws ParseError. A missing <bezierseq> wrapper
// throws ParseError in both modes.
ParseResult parse_bezierseq(const std::string& text, ParseMode mode = ParseMode::lenient);

// SVG 1.1 document with one black path per stroke (M/L, M/Q or M/C),
// y flipped to raster orientation.
std::string emit_svg(const StrokeSequence& sequence, int canvas_px = 512,
                     double stroke_width_px = 3.0);

} // namespace glyphvec
