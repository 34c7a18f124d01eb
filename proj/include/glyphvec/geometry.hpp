#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace glyphvec {

struct Vector2 {
    double dx = 0.0;
    double dy = 0.0;

    double norm() const { return std::hypot(dx, dy); }
    bool is_zero() const { return dx == 0.0 && dy == 0.0; }
};

inline Vector2 operator+(Vector2 a, Vector2 b) { return {a.dx + b.dx, a.dy + b.dy}; }
inline Vector2 operator-(Vector2 a, Vector2 b) { return {a.dx - b.dx, a.dy - b.dy}; }
inline Vector2 operator*(double s, Vector2 v) { return {s * v.dx, s * v.dy}; }
inline double dot(Vector2 a, Vector2 b) { return a.dx * b.dx + a.dy * b.dy; }
inline double cross(Vector2 a, Vector2 b) { return a.dx * b.dy - a.dy * b.dx; }

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline Vector2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator+(Point2 p, Vector2 v) { return {p.x + v.dx, p.y + v.dy}; }
inline double distance(Point2 a, Point2 b) { return (a - b).norm(); }

// Perpendicular distance from p to the segment [a, b]. Degenerates to
// point distance when a == b.
double point_segment_distance(Point2 p, Point2 a, Point2 b);

// A single stroke primitive: n+1 control points for a curve of degree
// n in {1, 2, 3}.
class BezierCurve {
public:
    BezierCurve() = default;
    explicit BezierCurve(std::vector<Point2> control_points);
    BezierCurve(Point2 a, Point2 b) : BezierCurve(std::vector<Point2>{a, b}) {}

    const std::vector<Point2>& control_points() const { return points_; }
    int degree() const { return static_cast<int>(points_.size()) - 1; }

    friend bool operator==(const BezierCurve& a, const BezierCurve& b) {
        return a.points_ == b.points_;
    }

private:
    std::vector<Point2> points_;
};

struct Polyline {
    std::vector<Point2> vertices;
};

struct CoordinateSpace {
    enum class Kind : std::uint8_t { normalized, pixel };
    Kind kind = Kind::normalized;
    int width = 0;  // pixel space only
    int height = 0;

    static CoordinateSpace normalized() { return {Kind::normalized, 0, 0}; }
    static CoordinateSpace pixel(int w, int h) { return {Kind::pixel, w, h}; }
    bool is_normalized() const { return kind == Kind::normalized; }
};

// A glyph program: ordered strokes plus the space its coordinates live in.
struct StrokeSequence {
    std::vector<BezierCurve> strokes;
    CoordinateSpace space = CoordinateSpace::normalized();

    bool empty() const { return strokes.empty(); }
    std::size_t size() const { return strokes.size(); }
};

// B_{i,n}(t) = C(n,i) t^i (1-t)^(n-i). Throws PreconditionError for
// i > n or t outside [0,1].
double bernstein_basis(int i, int n, double t);

// c(t) as the Bernstein-weighted sum of control points. t must be in [0,1].
Point2 evaluate_curve(const BezierCurve& curve, double t);

// Unit tangent of the curve at t. Returns the zero vector when the
// derivative norm falls below 1e-12 (coincident control points).
Vector2 tangent_at(const BezierCurve& curve, double t);

// k (point, unit tangent) pairs at t = 0, 1/(k-1), ..., 1. k >= 2.
std::vector<std::pair<Point2, Vector2>> sample_uniform(const BezierCurve& curve, int k = 10);

// Chord-sum arc length over `segments` uniform parameter intervals.
double arc_length(const BezierCurve& curve, int segments = 64);

// Control points in reverse order: evaluate(reversed, t) == evaluate(orig, 1-t).
BezierCurve reverse_curve(const BezierCurve& curve);

// Ramer-Douglas-Peucker simplification. Endpoints are preserved and the
// output is a subsequence of the input; every dropped vertex lies within
// `epsilon` of the segment spanning its span.
Polyline rdp_simplify(const Polyline& path, double epsilon);

} // namespace glyphvec
