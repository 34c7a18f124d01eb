#include "glyphvec/bezierseq.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "glyphvec/error.hpp"

namespace glyphvec {

namespace {

constexpr std::string_view kSeqOpen = "<bezierseq>";
constexpr std::string_view kSeqClose = "</bezierseq>";
constexpr std::string_view kStrokeOpen = "<bezier>";
constexpr std::string_view kStrokeClose = "</bezier>";

void append_number(std::string& out, double v, int precision) {
    char buf[48];
    int n = std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    out.append(buf, static_cast<std::size_t>(n));
}

} // namespace

std::string emit_bezierseq(const StrokeSequence& sequence, int precision) {
    if (!sequence.space.is_normalized())
        throw PreconditionError("emit_bezierseq: sequence must be in normalized space");
    if (precision < 0 || precision > 17)
        throw PreconditionError("emit_bezierseq: precision out of range");

    std::string out{kSeqOpen};
    for (const BezierCurve& stroke : sequence.strokes) {
        out += kStrokeOpen;
        bool first = true;
        for (Point2 p : stroke.control_points()) {
            if (!first)
                out += ' ';
            first = false;
            out += '(';
            append_number(out, std::clamp(p.x, 0.0, 1.0), precision);
            out += ' ';
            append_number(out, std::clamp(p.y, 0.0, 1.0), precision);
            out += ')';
        }
        out += kStrokeClose;
    }
    out += kSeqClose;
    return out;
}

// ------------------------------------------------------------- parsing

namespace {

class Scanner {
public:
    Scanner(std::string_view text, ParseMode mode) : text_(text), mode_(mode) {}

    ParseResult run() {
        ParseResult result;
        result.sequence.space = CoordinateSpace::normalized();

        std::size_t open = text_.find(kSeqOpen);
        if (open == std::string_view::npos)
            throw ParseError(0, "missing <bezierseq> wrapper");
        pos_ = open + kSeqOpen.size();

        while (true) {
            skip_whitespace();
            if (at_end()) {
                defect(pos_, "missing </bezierseq> closing tag");
                break;
            }
            if (consume(kSeqClose))
                break;
            if (consume(kStrokeOpen)) {
                parse_stroke();
                continue;
            }
            // Unrecognized bytes inside the sequence body.
            std::size_t bad = pos_;
            defect(bad, "unexpected content inside <bezierseq>");
            if (!resync())
                break;
        }

        result.sequence.strokes = std::move(strokes_);
        result.diagnostics = std::move(diagnostics_);
        return result;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }

    void skip_whitespace() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool consume(std::string_view token) {
        if (text_.substr(pos_, token.size()) == token) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void defect(std::size_t offset, const std::string& message) {
        if (mode_ == ParseMode::strict)
            throw ParseError(offset, message);
        diagnostics_.errors.push_back({offset, message});
        diagnostics_.recovered = true;
    }

    // After a defect, jump to the next stroke or the sequence close so
    // later well-formed strokes still parse.
    bool resync() {
        std::size_t next_stroke = text_.find(kStrokeOpen, pos_);
        std::size_t close = text_.find(kSeqClose, pos_);
        std::size_t target = std::min(next_stroke, close);
        if (target == std::string_view::npos) {
            pos_ = text_.size();
            return false;
        }
        pos_ = target;
        return true;
    }

    void parse_stroke() {
        std::size_t stroke_start = pos_;
        std::vector<Point2> points;
        bool bad = false;
        while (true) {
            skip_whitespace();
            if (at_end()) {
                defect(pos_, "unterminated <bezier> element");
                return;
            }
            if (consume(kStrokeClose))
                break;
            if (text_[pos_] == '(') {
                std::size_t point_at = pos_;
                ++pos_;
                auto x = parse_number();
                auto y = parse_number();
                skip_whitespace();
                if (!x || !y || at_end() || text_[pos_] != ')') {
                    defect(point_at, "malformed control point");
                    bad = true;
                    if (!resync_stroke())
                        return;
                    break;
                }
                ++pos_;
                points.push_back({clamped(*x, point_at), clamped(*y, point_at)});
                continue;
            }
            defect(pos_, "unexpected content inside <bezier>");
            bad = true;
            if (!resync_stroke())
                return;
            break;
        }
        if (bad)
            return;
        if (points.size() < 2 || points.size() > 4) {
            defect(stroke_start, "stroke must have 2 to 4 control points, got " +
                                     std::to_string(points.size()));
            return;
        }
        strokes_.emplace_back(std::move(points));
    }

    // Skip past the current stroke's closing tag (or stop at the next
    // recovery point).
    bool resync_stroke() {
        std::size_t close = text_.find(kStrokeClose, pos_);
        std::size_t next = text_.find(kStrokeOpen, pos_);
        std::size_t seq_close = text_.find(kSeqClose, pos_);
        std::size_t target = std::min({close == std::string_view::npos ? close
                                                                       : close + kStrokeClose.size(),
                                       next, seq_close});
        if (target == std::string_view::npos) {
            pos_ = text_.size();
            return false;
        }
        pos_ = target;
        return true;
    }

    std::optional<double> parse_number() {
        skip_whitespace();
        if (at_end())
            return std::nullopt;
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr == begin)
            return std::nullopt;
        if (!std::isfinite(value)) {
            defect(pos_, "non-finite coordinate");
            pos_ = static_cast<std::size_t>(ptr - text_.data());
            return std::nullopt;
        }
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return value;
    }

    double clamped(double v, std::size_t at) {
        if (v < 0.0 || v > 1.0) {
            defect(at, "coordinate outside [0,1], clamped");
            return std::clamp(v, 0.0, 1.0);
        }
        return v;
    }

    std::string_view text_;
    ParseMode mode_;
    std::size_t pos_ = 0;
    std::vector<BezierCurve> strokes_;
    ParseDiagnostics diagnostics_;
};

} // namespace

ParseResult parse_bezierseq(const std::string& text, ParseMode mode) {
    return Scanner(text, mode).run();
}

// ----------------------------------------------------------------- SVG

namespace {

void append_svg_number(std::string& out, double v) {
    char buf[48];
    int n = std::snprintf(buf, sizeof(buf), "%g", v);
    out.append(buf, static_cast<std::size_t>(n));
}

} // namespace

std::string emit_svg(const StrokeSequence& sequence, int canvas_px, double stroke_width_px) {
    if (!sequence.space.is_normalized())
        throw PreconditionError("emit_svg: sequence must be in normalized space");
    if (canvas_px < 1)
        throw PreconditionError("emit_svg: canvas size must be >= 1");

    const double s = static_cast<double>(canvas_px);
    auto px = [s](Point2 p) { return Point2{p.x * s, (1.0 - p.y) * s}; };

    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 ";
    append_svg_number(out, s);
    out += ' ';
    append_svg_number(out, s);
    out += "\">\n";
    for (const BezierCurve& stroke : sequence.strokes) {
        const auto& cp = stroke.control_points();
        std::string d = "M ";
        Point2 p0 = px(cp.front());
        append_svg_number(d, p0.x);
        d += ' ';
        append_svg_number(d, p0.y);
        d += stroke.degree() == 1 ? " L" : stroke.degree() == 2 ? " Q" : " C";
        for (std::size_t i = 1; i < cp.size(); ++i) {
            Point2 p = px(cp[i]);
            d += ' ';
            append_svg_number(d, p.x);
            d += ' ';
            append_svg_number(d, p.y);
        }
        out += "  <path d=\"" + d + "\" fill=\"none\" stroke=\"black\" stroke-width=\"";
        append_svg_number(out, stroke_width_px);
        out += "\" stroke-linecap=\"round\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace glyphvec
