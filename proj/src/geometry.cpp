#include "glyphvec/geometry.hpp"

#include <algorithm>
#include <stdexcept>

#include "glyphvec/error.hpp"

namespace glyphvec {

namespace {

constexpr double kDegenerateTangentNorm = 1e-12;

double binomial(int n, int k) {
    // n <= 3 in practice; exact for all small n.
    double r = 1.0;
    for (int i = 1; i <= k; ++i)
        r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

// Derivative control vectors: c'(t) has degree n-1 with coefficients
// n * (b_{i+1} - b_i).
Vector2 derivative_at(const BezierCurve& curve, double t) {
    const auto& b = curve.control_points();
    const int n = curve.degree();
    Vector2 d{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        double w = static_cast<double>(n) * bernstein_basis(i, n - 1, t);
        d = d + w * (b[static_cast<std::size_t>(i) + 1] - b[static_cast<std::size_t>(i)]);
    }
    return d;
}

void rdp_recurse(const std::vector<Point2>& v, std::size_t first, std::size_t last,
                 double epsilon, std::vector<bool>& keep) {
    if (last <= first + 1)
        return;
    double max_dist = -1.0;
    std::size_t max_idx = first;
    for (std::size_t i = first + 1; i < last; ++i) {
        double d = point_segment_distance(v[i], v[first], v[last]);
        if (d > max_dist) {
            max_dist = d;
            max_idx = i;
        }
    }
    if (max_dist > epsilon) {
        keep[max_idx] = true;
        rdp_recurse(v, first, max_idx, epsilon, keep);
        rdp_recurse(v, max_idx, last, epsilon, keep);
    }
}

} // namespace

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    Vector2 ab = b - a;
    double len2 = dot(ab, ab);
    if (len2 == 0.0)
        return distance(p, a);
    double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + t * ab);
}

BezierCurve::BezierCurve(std::vector<Point2> control_points) : points_(std::move(control_points)) {
    if (points_.size() < 2 || points_.size() > 4)
        throw PreconditionError("BezierCurve needs 2 to 4 control points, got " +
                                std::to_string(points_.size()));
    for (const Point2& p : points_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw PreconditionError("BezierCurve control point is not finite");
}

double bernstein_basis(int i, int n, double t) {
    if (i < 0 || n < 0 || i > n)
        throw PreconditionError("bernstein_basis: index out of range");
    if (!(t >= 0.0 && t <= 1.0))
        throw PreconditionError("bernstein_basis: t outside [0,1]");
    return binomial(n, i) * std::pow(t, i) * std::pow(1.0 - t, n - i);
}

Point2 evaluate_curve(const BezierCurve& curve, double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw PreconditionError("evaluate_curve: t outside [0,1]");
    const auto& b = curve.control_points();
    const int n = curve.degree();
    double x = 0.0, y = 0.0;
    for (int i = 0; i <= n; ++i) {
        double w = bernstein_basis(i, n, t);
        x += w * b[static_cast<std::size_t>(i)].x;
        y += w * b[static_cast<std::size_t>(i)].y;
    }
    return {x, y};
}

Vector2 tangent_at(const BezierCurve& curve, double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw PreconditionError("tangent_at: t outside [0,1]");
    Vector2 d = derivative_at(curve, t);
    double n = d.norm();
    if (n < kDegenerateTangentNorm)
        return {0.0, 0.0};
    return {d.dx / n, d.dy / n};
}

std::vector<std::pair<Point2, Vector2>> sample_uniform(const BezierCurve& curve, int k) {
    if (k < 2)
        throw PreconditionError("sample_uniform: k must be >= 2");
    std::vector<std::pair<Point2, Vector2>> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        double t = static_cast<double>(i) / static_cast<double>(k - 1);
        out.emplace_back(evaluate_curve(curve, t), tangent_at(curve, t));
    }
    return out;
}

double arc_length(const BezierCurve& curve, int segments) {
    if (segments < 1)
        throw PreconditionError("arc_length: segments must be >= 1");
    double total = 0.0;
    Point2 prev = evaluate_curve(curve, 0.0);
    for (int i = 1; i <= segments; ++i) {
        Point2 cur = evaluate_curve(curve, static_cast<double>(i) / segments);
        total += distance(prev, cur);
        prev = cur;
    }
    return total;
}

BezierCurve reverse_curve(const BezierCurve& curve) {
    std::vector<Point2> pts(curve.control_points().rbegin(), curve.control_points().rend());
    return BezierCurve(std::move(pts));
}

Polyline rdp_simplify(const Polyline& path, double epsilon) {
    if (path.vertices.size() < 2)
        throw PreconditionError("rdp_simplify: polyline needs at least 2 vertices");
    if (!(epsilon > 0.0))
        throw PreconditionError("rdp_simplify: epsilon must be positive");
    const auto& v = path.vertices;
    std::vector<bool> keep(v.size(), false);
    keep.front() = keep.back() = true;
    rdp_recurse(v, 0, v.size() - 1, epsilon, keep);
    Polyline out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (keep[i])
            out.vertices.push_back(v[i]);
    return out;
}

} // namespace glyphvec
