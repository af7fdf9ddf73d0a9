#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "ptb/farey.hpp"

namespace ptb {

enum class Sidedness { TwoSided, OneSided };
enum class Parity { Even, Odd };

// Role of one side of a saddle octagon: the four arcs run parallel to the
// bottom/top slope curves, the four verticals are {x_i} x I segments on the
// boundary torus of the thickened level.
enum class ArcRole { BottomArc, Vertical, TopArc };

struct OctagonEdge {
    ArcRole role = ArcRole::Vertical;
    const char* label = "";  // "l-", "p1", "m+", "p2", "l+", "p3", "m-", "p4"
};

// One standard saddle, an octagon spanning consecutive levels of the
// thickened torus.  Edge j runs from corner j-1 to corner j (mod 8).
struct SaddlePiece {
    long index = 0;
    Slope bottom_slope = Slope::infinity();
    Slope top_slope = Slope::infinity();
    std::array<OctagonEdge, 8> edges;  // edges[j] is octagon edge j+1
};

// Identification of octagon edge `edge_a` of face `face_a` with `edge_b` of
// `face_b`.  `reversed` means the two boundary traversals run through the
// common arc in opposite directions (start of one meets end of the other).
struct Gluing {
    long face_a = 0;
    int edge_a = 0;  // 1..8
    long face_b = 0;
    int edge_b = 0;
    bool reversed = false;
};

// Quotient cell complex of k stacked saddles, with the level-k boundary
// returned to level 0 by the monodromy.  Instances are addressed as
// (face, corner 0..7) and (face, edge 1..8); the class maps give the cell
// of the quotient each instance lands in.
struct SurfaceComplex {
    long k = 0;  // number of saddles == levels
    std::vector<SaddlePiece> pieces;
    std::vector<Gluing> gluings;

    std::vector<std::array<long, 8>> vertex_class;  // [face][corner] -> id
    std::vector<std::array<long, 8>> edge_class;    // [face][edge-1] -> id
    std::vector<std::vector<std::pair<long, int>>> vertex_members;
    std::vector<std::vector<std::pair<long, int>>> edge_members;

    long vertex_count = 0;
    long edge_count = 0;
    long face_count = 0;
    long boundary_edge_count = 0;  // edge classes on exactly one face
    long interior_edge_count = 0;  // edge classes on exactly two faces
    long chi = 0;                  // V - E + F of the quotient

    std::vector<int> epsilon;  // per saddle: det of its slope frame, +1/-1
    int closure_sign = 1;      // sign relating A.(level-0 frame) to level k

    Sidedness sided = Sidedness::TwoSided;

    // Boundary of a regular neighborhood, built for odd k (null otherwise).
    std::shared_ptr<const SurfaceComplex> orientation_double;
};

// Characteristic-submanifold bookkeeping for the surface of a path.
struct GutsReport {
    long k = 0;
    Parity parity = Parity::Even;
    long square_neighborhoods = 0;
    long seifert_solid_tori = 0;
    long handlebody_ibundle = 0;  // 0 or 1
    bool guts_empty = true;
    long chi_surface = 0;          // -k (even) or -2k for the doubled surface
    double agol_lower_bound = 0.0;  // -2 V3 * chi(guts), zero when guts are empty
};

// Builds the saddle surface of a closed edge path: one octagon per path edge,
// arcs matched level to level by the slope frames, closure via A.  Throws
// InvalidPath when consecutive slopes are not Farey-adjacent or the path does
// not close up under A.
SurfaceComplex build_surface(const EdgePath& path, const MatSL2& A);

// Verdict from propagating a transverse co-orientation across the glued
// faces and looking for a reversing cycle.
Sidedness sidedness(const SurfaceComplex& c);

// Report on the path's surface: component counts of the characteristic
// submanifold by period parity, with chi cross-checked constructively.
GutsReport guts_report(const EdgePath& path);

}  // namespace ptb
