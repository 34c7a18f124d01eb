#pragma once

#include <optional>
#include <vector>

#include "glyphvec/geometry.hpp"
#include "glyphvec/image.hpp"

namespace glyphvec {

// Integer pixel coordinate of a skeleton node. Ordering is lexicographic
// on (col, row) and is the tie-break order used throughout extraction.
struct PixelCoord {
    int col = 0;
    int row = 0;

    friend bool operator==(PixelCoord a, PixelCoord b) { return a.col == b.col && a.row == b.row; }
    friend bool operator<(PixelCoord a, PixelCoord b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    }
};

// 8-connected pixel graph of a thinned glyph. Nodes are the skeleton's
// foreground pixels; edges join 8-neighbors, except diagonal pairs that
// share an orthogonal common neighbor (suppressed to avoid triangles).
class SkeletonGraph {
public:
    static SkeletonGraph build(const BinaryImage& skeleton);

    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<PixelCoord>& nodes() const { return nodes_; }
    PixelCoord node(std::size_t i) const { return nodes_[i]; }
    // Neighbor node indices, sorted ascending.
    const std::vector<std::size_t>& neighbors(std::size_t i) const { return adjacency_[i]; }
    std::size_t degree(std::size_t i) const { return adjacency_[i].size(); }
    std::size_t edge_count() const;
    std::optional<std::size_t> find_node(PixelCoord c) const;

private:
    std::vector<PixelCoord> nodes_; // sorted by (col, row)
    std::vector<std::vector<std::size_t>> adjacency_;
};

// Maximal run of skeleton pixels between path terminals. Interior nodes
// have degree 2; a closed ring repeats its seam node at both ends.
struct PixelPath {
    std::vector<PixelCoord> pixels;
    bool closed = false;
    bool touches_junction = false; // either terminal has degree >= 3
};

struct ExtractionConfig {
    // Luminance threshold; pixels strictly darker are foreground.
    // Unset means Otsu's method.
    std::optional<int> binarize_threshold;
    double rdp_epsilon = 2.0;    // px
    double merge_gap = 3.0;      // px
    double merge_angle = 30.0;   // degrees
    int min_path_pixels = 4;     // junction-attached paths shorter than this are burrs
    double fit_tolerance = 2.0;  // px

    void validate() const;
};

// Step 1: threshold to a foreground mask. Polarity auto-flips when more
// than half the pixels land in the foreground. Throws EmptyGlyphError on
// a blank result.
BinaryImage binarize(const RasterImage& image, const ExtractionConfig& config);

// Step 2: morphological thinning to a one-pixel-wide centerline that
// keeps the 8-connected component structure of the input.
BinaryImage skeletonize(const BinaryImage& binary);

// Step 3a: pixel graph (see SkeletonGraph).
SkeletonGraph build_pixel_graph(const BinaryImage& skeleton);

// Step 3b: split the graph into paths at junctions and endpoints. Every
// edge lands in exactly one path; isolated cycles become closed paths
// split at their smallest node. Junction-attached paths shorter than
// min_path_pixels are dropped as skeletonization burrs.
std::vector<PixelPath> segment_paths(const SkeletonGraph& graph, int min_path_pixels = 1);

// Step 4a: iterative proximity/alignment merging of simplified polylines.
std::vector<Polyline> merge_paths(const std::vector<Polyline>& paths,
                                  const ExtractionConfig& config);

// Step 4b: least-squares Bézier fitting (degree 1..3, endpoints
// interpolated, chord-length parameters). A polyline whose cubic fit
// exceeds fit_tolerance is split at its worst vertex and refitted.
std::vector<BezierCurve> fit_strokes(const std::vector<Polyline>& polylines,
                                     const ExtractionConfig& config);

// Full pipeline: binarize -> skeletonize -> graph -> paths -> simplify ->
// merge -> fit -> normalize to [0,1]^2 (aspect preserved, 5% margin,
// y up). Throws EmptyGlyphError when no strokes can be produced.
StrokeSequence extract_glyph(const RasterImage& image, const ExtractionConfig& config = {});

} // namespace glyphvec
