#include "glyphvec/extraction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "glyphvec/error.hpp"

namespace glyphvec {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Neighborhood offsets in Zhang-Suen order: N, NE, E, SE, S, SW, W, NW.
constexpr std::array<std::array<int, 2>, 8> kRing = {
    {{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};

int ring_value(const BinaryImage& mask, int x, int y, int k) {
    int nx = x + kRing[static_cast<std::size_t>(k)][0];
    int ny = y + kRing[static_cast<std::size_t>(k)][1];
    return mask.in_bounds(nx, ny) && mask.at(nx, ny) ? 1 : 0;
}

int neighbor_count(const BinaryImage& mask, int x, int y) {
    int b = 0;
    for (int k = 0; k < 8; ++k)
        b += ring_value(mask, x, y, k);
    return b;
}

// Rutovitz crossing number: 0->1 transitions around the ring.
int crossing_number(const BinaryImage& mask, int x, int y) {
    int a = 0;
    for (int k = 0; k < 8; ++k) {
        int cur = ring_value(mask, x, y, k);
        int next = ring_value(mask, x, y, (k + 1) % 8);
        if (cur == 0 && next == 1)
            ++a;
    }
    return a;
}

} // namespace

void ExtractionConfig::validate() const {
    if (binarize_threshold && (*binarize_threshold < 1 || *binarize_threshold > 255))
        throw PreconditionError("binarize_threshold must be in [1,255]");
    if (!(rdp_epsilon > 0.0) || !(merge_gap > 0.0) || !(merge_angle > 0.0) ||
        min_path_pixels < 1 || !(fit_tolerance > 0.0))
        throw PreconditionError("ExtractionConfig fields must be positive");
}

// ------------------------------------------------------------ binarize

namespace {

int otsu_threshold(const RasterImage& image) {
    std::array<long, 256> hist{};
    for (std::uint8_t p : image.pixels)
        ++hist[p];
    const double total = static_cast<double>(image.pixels.size());

    double sum_all = 0.0;
    for (int v = 0; v < 256; ++v)
        sum_all += static_cast<double>(v) * static_cast<double>(hist[v]);

    double best_var = -1.0;
    int best_t = 0;
    double w0 = 0.0, sum0 = 0.0;
    for (int t = 0; t < 256; ++t) {
        w0 += static_cast<double>(hist[t]);
        if (w0 == 0.0)
            continue;
        double w1 = total - w0;
        if (w1 == 0.0)
            break;
        sum0 += static_cast<double>(t) * static_cast<double>(hist[t]);
        double mu0 = sum0 / w0;
        double mu1 = (sum_all - sum0) / w1;
        double var = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
        if (var > best_var) {
            best_var = var;
            best_t = t;
        }
    }
    // Classes are [0..t] and [t+1..255]; binarize keeps pixels < threshold.
    return best_t + 1;
}

} // namespace

BinaryImage binarize(const RasterImage& image, const ExtractionConfig& config) {
    if (image.width < 1 || image.height < 1 ||
        image.pixels.size() != static_cast<std::size_t>(image.width) * image.height)
        throw PreconditionError("binarize: malformed RasterImage");

    int threshold = config.binarize_threshold ? *config.binarize_threshold
                                              : otsu_threshold(image);

    BinaryImage mask(image.width, image.height);
    std::size_t fg = 0;
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        bool on = image.pixels[i] < threshold;
        mask.bits[i] = on ? 1 : 0;
        fg += on;
    }
    // Glyphs are dark-on-light; flip polarity for inverted inputs.
    if (fg * 2 > image.pixels.size()) {
        for (auto& b : mask.bits)
            b ^= 1;
        fg = image.pixels.size() - fg;
    }
    if (fg == 0)
        throw EmptyGlyphError("binarize: no foreground pixels");
    return mask;
}

// --------------------------------------------------------- skeletonize

BinaryImage skeletonize(const BinaryImage& binary) {
    if (binary.foreground_count() == 0)
        throw PreconditionError("skeletonize: empty foreground");

    BinaryImage mask = binary;
    std::vector<std::pair<int, int>> marked;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int phase = 0; phase < 2; ++phase) {
            // Mark against a fixed snapshot (parallel Zhang-Suen conditions).
            marked.clear();
            for (int y = 0; y < mask.height; ++y) {
                for (int x = 0; x < mask.width; ++x) {
                    if (!mask.at(x, y))
                        continue;
                    int b = neighbor_count(mask, x, y);
                    if (b < 2 || b > 6)
                        continue;
                    if (crossing_number(mask, x, y) != 1)
                        continue;
                    int n = ring_value(mask, x, y, 0);
                    int e = ring_value(mask, x, y, 2);
                    int s = ring_value(mask, x, y, 4);
                    int w = ring_value(mask, x, y, 6);
                    bool ok = phase == 0 ? (n * e * s == 0 && e * s * w == 0)
                                         : (n * e * w == 0 && n * s * w == 0);
                    if (ok)
                        marked.emplace_back(x, y);
                }
            }
            // Delete sequentially, re-checking simplicity against the current
            // image so connectivity and hole structure survive batch deletion
            // (the parallel rule alone can erase a 2x2 block outright).
            for (auto [x, y] : marked) {
                int b = neighbor_count(mask, x, y);
                if (b < 2 || b > 6)
                    continue;
                if (crossing_number(mask, x, y) != 1)
                    continue;
                mask.set(x, y, false);
                changed = true;
            }
        }
    }
    return mask;
}

// ----------------------------------------------------- SkeletonGraph

SkeletonGraph SkeletonGraph::build(const BinaryImage& skeleton) {
    SkeletonGraph g;
    for (int x = 0; x < skeleton.width; ++x)
        for (int y = 0; y < skeleton.height; ++y)
            if (skeleton.at(x, y))
                g.nodes_.push_back({x, y});
    // nodes_ is sorted by (col,row) by construction
    g.adjacency_.resize(g.nodes_.size());

    auto is_on = [&](int c, int r) { return skeleton.in_bounds(c, r) && skeleton.at(c, r); };

    for (std::size_t i = 0; i < g.nodes_.size(); ++i) {
        PixelCoord a = g.nodes_[i];
        for (const auto& off : kRing) {
            PixelCoord b{a.col + off[0], a.row + off[1]};
            if (!is_on(b.col, b.row))
                continue;
            bool diagonal = off[0] != 0 && off[1] != 0;
            // A diagonal edge is redundant when an orthogonal common
            // neighbor already links the two pixels.
            if (diagonal && (is_on(a.col, b.row) || is_on(b.col, a.row)))
                continue;
            auto j = g.find_node(b);
            g.adjacency_[i].push_back(*j);
        }
        std::sort(g.adjacency_[i].begin(), g.adjacency_[i].end());
    }
    return g;
}

std::size_t SkeletonGraph::edge_count() const {
    std::size_t twice = 0;
    for (const auto& adj : adjacency_)
        twice += adj.size();
    return twice / 2;
}

std::optional<std::size_t> SkeletonGraph::find_node(PixelCoord c) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), c);
    if (it == nodes_.end() || !(*it == c))
        return std::nullopt;
    return static_cast<std::size_t>(it - nodes_.begin());
}

SkeletonGraph build_pixel_graph(const BinaryImage& skeleton) {
    return SkeletonGraph::build(skeleton);
}

// -------------------------------------------------------- segmentation

namespace {

// Per-node flags for consumed undirected edges, indexed like the
// adjacency lists.
struct EdgeVisits {
    explicit EdgeVisits(const SkeletonGraph& g) : graph(g), used(g.node_count()) {
        for (std::size_t i = 0; i < g.node_count(); ++i)
            used[i].assign(g.neighbors(i).size(), false);
    }

    bool is_used(std::size_t from, std::size_t to) const {
        return used[from][slot(from, to)];
    }
    void mark(std::size_t from, std::size_t to) {
        used[from][slot(from, to)] = true;
        used[to][slot(to, from)] = true;
    }
    std::size_t slot(std::size_t from, std::size_t to) const {
        const auto& adj = graph.neighbors(from);
        return static_cast<std::size_t>(
            std::lower_bound(adj.begin(), adj.end(), to) - adj.begin());
    }

    const SkeletonGraph& graph;
    std::vector<std::vector<bool>> used;
};

PixelPath trace_path(const SkeletonGraph& g, EdgeVisits& visits, std::size_t start,
                     std::size_t first_next) {
    PixelPath path;
    path.pixels.push_back(g.node(start));
    std::size_t prev = start;
    std::size_t cur = first_next;
    visits.mark(start, first_next);
    path.pixels.push_back(g.node(cur));
    while (g.degree(cur) == 2 && cur != start) {
        const auto& adj = g.neighbors(cur);
        std::size_t next = adj[0] == prev ? adj[1] : adj[0];
        visits.mark(cur, next);
        prev = cur;
        cur = next;
        path.pixels.push_back(g.node(cur));
    }
    path.closed = cur == start;
    path.touches_junction = g.degree(start) >= 3 || g.degree(cur) >= 3;
    return path;
}

} // namespace

std::vector<PixelPath> segment_paths(const SkeletonGraph& graph, int min_path_pixels) {
    std::vector<PixelPath> paths;
    EdgeVisits visits(graph);

    // Open paths start at terminals (degree != 2), lowest node first.
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        if (graph.degree(i) == 2)
            continue;
        if (graph.degree(i) == 0) {
            PixelPath dot;
            dot.pixels.push_back(graph.node(i));
            paths.push_back(std::move(dot));
            continue;
        }
        for (std::size_t next : graph.neighbors(i))
            if (!visits.is_used(i, next))
                paths.push_back(trace_path(graph, visits, i, next));
    }
    // Leftover edges belong to isolated cycles; split each at its
    // lexicographically smallest node.
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
        for (std::size_t next : graph.neighbors(i)) {
            if (!visits.is_used(i, next)) {
                paths.push_back(trace_path(graph, visits, i, next));
                break;
            }
        }
    }

    if (min_path_pixels > 1) {
        std::erase_if(paths, [&](const PixelPath& p) {
            return p.touches_junction && !p.closed &&
                   static_cast<int>(p.pixels.size()) < min_path_pixels;
        });
    }
    return paths;
}

// ------------------------------------------------------------- merging

namespace {

struct MergeCandidate {
    double angle_deg;
    double gap;
    std::size_t a, b;
    int combo; // 0: a.back-b.front, 1: a.back-b.back, 2: a.front-b.front, 3: a.front-b.back

    bool operator<(const MergeCandidate& o) const {
        if (angle_deg != o.angle_deg)
            return angle_deg < o.angle_deg;
        if (gap != o.gap)
            return gap < o.gap;
        if (a != o.a)
            return a < o.a;
        if (b != o.b)
            return b < o.b;
        return combo < o.combo;
    }
};

Vector2 unit_or_zero(Vector2 v) {
    double n = v.norm();
    return n > 0.0 ? Vector2{v.dx / n, v.dy / n} : Vector2{0.0, 0.0};
}

// Travel direction at the chosen terminal, pointing out of the polyline.
Vector2 exit_direction(const Polyline& p, bool at_back) {
    const auto& v = p.vertices;
    return at_back ? unit_or_zero(v[v.size() - 1] - v[v.size() - 2])
                   : unit_or_zero(v[0] - v[1]);
}

Polyline oriented(const Polyline& p, bool reversed) {
    if (!reversed)
        return p;
    Polyline out;
    out.vertices.assign(p.vertices.rbegin(), p.vertices.rend());
    return out;
}

Polyline join(const Polyline& a, const Polyline& b) {
    Polyline out = a;
    std::size_t start = b.vertices.front() == a.vertices.back() ? 1 : 0;
    out.vertices.insert(out.vertices.end(), b.vertices.begin() + start, b.vertices.end());
    return out;
}

} // namespace

std::vector<Polyline> merge_paths(const std::vector<Polyline>& paths,
                                  const ExtractionConfig& config) {
    std::vector<Polyline> active;
    for (const Polyline& p : paths) {
        if (p.vertices.size() < 2)
            throw PreconditionError("merge_paths: polyline needs at least 2 vertices");
        active.push_back(p);
    }

    while (active.size() > 1) {
        std::vector<MergeCandidate> candidates;
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                for (int combo = 0; combo < 4; ++combo) {
                    bool a_back = combo < 2;
                    bool b_front = combo % 2 == 0;
                    Point2 ta = a_back ? active[i].vertices.back() : active[i].vertices.front();
                    Point2 tb = b_front ? active[j].vertices.front() : active[j].vertices.back();
                    double gap = distance(ta, tb);
                    if (gap > config.merge_gap)
                        continue;
                    // Turning angle across the join: direction entering the
                    // join from a vs direction leaving it into b.
                    Vector2 da = exit_direction(active[i], a_back);
                    Vector2 db = -1.0 * exit_direction(active[j], b_front);
                    double c = std::clamp(dot(da, db), -1.0, 1.0);
                    double angle = std::acos(c) * 180.0 / kPi;
                    if (angle < config.merge_angle)
                        candidates.push_back({angle, gap, i, j, combo});
                }
            }
        }
        if (candidates.empty())
            break;
        MergeCandidate best = *std::min_element(candidates.begin(), candidates.end());
        const Polyline a = oriented(active[best.a], best.combo >= 2);
        const Polyline b = oriented(active[best.b], best.combo % 2 == 1);
        active[best.a] = join(a, b);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best.b));
    }
    return active;
}

// -------------------------------------------------------------- fitting

namespace {

std::vector<double> chord_parameters(const std::vector<Point2>& v) {
    std::vector<double> u(v.size(), 0.0);
    for (std::size_t i = 1; i < v.size(); ++i)
        u[i] = u[i - 1] + distance(v[i - 1], v[i]);
    double total = u.back();
    for (auto& t : u)
        t /= total;
    u.back() = 1.0;
    return u;
}

// Least-squares fit of fixed degree with interpolated endpoints.
// Returns nullopt when the normal system is singular.
std::optional<BezierCurve> lsq_fit(const std::vector<Point2>& v, const std::vector<double>& u,
                                   int degree) {
    Point2 first = v.front();
    Point2 last = v.back();
    if (degree == 1)
        return BezierCurve(first, last);

    if (degree == 2) {
        double m = 0.0, rx = 0.0, ry = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            double b0 = bernstein_basis(0, 2, u[k]);
            double b1 = bernstein_basis(1, 2, u[k]);
            double b2 = bernstein_basis(2, 2, u[k]);
            m += b1 * b1;
            rx += b1 * (v[k].x - b0 * first.x - b2 * last.x);
            ry += b1 * (v[k].y - b0 * first.y - b2 * last.y);
        }
        if (m < 1e-12)
            return std::nullopt;
        return BezierCurve(std::vector<Point2>{first, {rx / m, ry / m}, last});
    }

    // degree == 3: 2x2 normal equations per coordinate
    double m11 = 0.0, m12 = 0.0, m22 = 0.0;
    double rx1 = 0.0, rx2 = 0.0, ry1 = 0.0, ry2 = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        double b0 = bernstein_basis(0, 3, u[k]);
        double b1 = bernstein_basis(1, 3, u[k]);
        double b2 = bernstein_basis(2, 3, u[k]);
        double b3 = bernstein_basis(3, 3, u[k]);
        double ex = v[k].x - b0 * first.x - b3 * last.x;
        double ey = v[k].y - b0 * first.y - b3 * last.y;
        m11 += b1 * b1;
        m12 += b1 * b2;
        m22 += b2 * b2;
        rx1 += b1 * ex;
        rx2 += b2 * ex;
        ry1 += b1 * ey;
        ry2 += b2 * ey;
    }
    double det = m11 * m22 - m12 * m12;
    if (std::abs(det) < 1e-12)
        return std::nullopt;
    Point2 c1{(rx1 * m22 - rx2 * m12) / det, (ry1 * m22 - ry2 * m12) / det};
    Point2 c2{(m11 * rx2 - m12 * rx1) / det, (m11 * ry2 - m12 * ry1) / det};
    return BezierCurve(std::vector<Point2>{first, c1, c2, last});
}

struct FitError {
    double max = 0.0;
    std::size_t worst = 0;
};

FitError max_residual(const BezierCurve& c, const std::vector<Point2>& v,
                      const std::vector<double>& u) {
    FitError e;
    for (std::size_t k = 0; k < v.size(); ++k) {
        double d = distance(evaluate_curve(c, u[k]), v[k]);
        if (d > e.max) {
            e.max = d;
            e.worst = k;
        }
    }
    return e;
}

void fit_recursive(const std::vector<Point2>& v, double tolerance,
                   std::vector<BezierCurve>& out, int depth) {
    std::vector<double> u = chord_parameters(v);
    std::optional<BezierCurve> fallback;
    FitError split_at;
    split_at.worst = v.size() / 2;
    for (int degree = 1; degree <= 3; ++degree) {
        if (v.size() < static_cast<std::size_t>(degree) + 1)
            break;
        auto curve = lsq_fit(v, u, degree);
        if (!curve)
            continue;
        FitError e = max_residual(*curve, v, u);
        if (e.max <= tolerance) {
            out.push_back(std::move(*curve));
            return;
        }
        // Split location comes from the highest-degree fit attempted.
        split_at = e;
        fallback = std::move(curve);
    }
    if (depth >= 32 || v.size() == 2) {
        out.push_back(fallback ? std::move(*fallback) : BezierCurve(v.front(), v.back()));
        return;
    }
    // Cubic still over tolerance: split at the worst vertex and refit.
    std::size_t s = std::clamp<std::size_t>(split_at.worst, 1, v.size() - 2);
    std::vector<Point2> left(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(s) + 1);
    std::vector<Point2> right(v.begin() + static_cast<std::ptrdiff_t>(s), v.end());
    fit_recursive(left, tolerance, out, depth + 1);
    fit_recursive(right, tolerance, out, depth + 1);
}

} // namespace

std::vector<BezierCurve> fit_strokes(const std::vector<Polyline>& polylines,
                                     const ExtractionConfig& config) {
    std::vector<BezierCurve> curves;
    for (const Polyline& p : polylines) {
        if (p.vertices.size() < 2)
            throw PreconditionError("fit_strokes: polyline needs at least 2 vertices");
        fit_recursive(p.vertices, config.fit_tolerance, curves, 0);
    }
    return curves;
}

// ------------------------------------------------------------ pipeline

StrokeSequence extract_glyph(const RasterImage& image, const ExtractionConfig& config) {
    config.validate();
    BinaryImage mask = binarize(image, config);
    BinaryImage skeleton = skeletonize(mask);
    SkeletonGraph graph = build_pixel_graph(skeleton);
    std::vector<PixelPath> paths = segment_paths(graph, config.min_path_pixels);

    std::vector<Polyline> simplified;
    for (const PixelPath& path : paths) {
        if (path.pixels.size() < 2)
            continue; // isolated pixels carry no direction
        Polyline raw;
        raw.vertices.reserve(path.pixels.size());
        for (PixelCoord c : path.pixels)
            raw.vertices.push_back({static_cast<double>(c.col), static_cast<double>(c.row)});
        simplified.push_back(rdp_simplify(raw, config.rdp_epsilon));
    }
    if (simplified.empty())
        throw EmptyGlyphError("extract_glyph: no usable skeleton paths");

    std::vector<Polyline> merged = merge_paths(simplified, config);
    std::vector<BezierCurve> curves = fit_strokes(merged, config);
    if (curves.empty())
        throw EmptyGlyphError("extract_glyph: no strokes fitted");

    // Letterbox the control-point bounding box into [0,1]^2: the longer
    // axis spans 0.9, the glyph is centered, y points up.
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = max_x;
    for (const auto& c : curves) {
        for (Point2 p : c.control_points()) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    }
    double extent = std::max(max_x - min_x, max_y - min_y);
    double scale = extent > 0.0 ? 0.9 / extent : 0.0;
    double cx = 0.5 * (min_x + max_x);
    double cy = 0.5 * (min_y + max_y);

    StrokeSequence seq;
    seq.space = CoordinateSpace::normalized();
    for (const auto& c : curves) {
        std::vector<Point2> pts;
        pts.reserve(c.control_points().size());
        for (Point2 p : c.control_points())
            pts.push_back({0.5 + (p.x - cx) * scale, 0.5 - (p.y - cy) * scale});
        seq.strokes.emplace_back(std::move(pts));
    }
    return seq;
}

} // namespace glyphvec
