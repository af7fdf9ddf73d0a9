#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ptb/farey.hpp"

namespace ptb {

// Ideal tetrahedron layered between two consecutive levels of the strip.
// Its spanning parallelogram has corner 0 at the origin, corner 1 at w1,
// corner 2 at w1 + w2 and corner 3 at w2, where w1 and w2 are the plane
// lifts (q, p) of the two slopes the levels share.  The bottom level is the
// parallelogram cut along one diagonal, the top level cut along the other.
struct Tetrahedron {
    long index = 0;   // layer j: spans strip triangles j and j+1
    char letter = '?';

    std::array<std::array<Int, 2>, 4> corners;  // lattice positions (q, p)

    // Edges are the corner pairs 01, 12, 23, 03, 02, 13 in that order; the
    // sides carry the shared slopes, the diagonals the dropped/added ones.
    std::array<Slope, 6> edge_slopes = {Slope::infinity(), Slope::infinity(),
                                        Slope::infinity(), Slope::infinity(),
                                        Slope::infinity(), Slope::infinity()};
    std::array<int, 6> edge_pair = {1, 2, 1, 2, 0, 0};  // 0 alpha, 1 beta, 2 gamma

    int bottom_diagonal = 4;  // edge index (4 or 5) of the bottom-level cut
    int top_diagonal = 5;     // and of the top-level cut

    // Faces are labelled by the omitted corner.  The bottom faces are the
    // two triangles of the cut along bottom_diagonal, the top faces the
    // other two.
    std::array<int, 2> bottom_face_ids() const;
    std::array<int, 2> top_face_ids() const;
};

// Corners of face f in increasing order (corner f is omitted).
std::array<int, 3> face_corners(int f);

// Edge index of the corner pair {a, b}.
int edge_index(int a, int b);

// Top face `face_a` of layer `tet_a` glued to bottom face `face_b` of the
// next layer `tet_b` (wrapping from the last layer to layer 0 through the
// monodromy).
struct FacePairing {
    long tet_a = 0;
    int face_a = 0;
    long tet_b = 0;
    int face_b = 0;
};

// One edge of the glued-up manifold: the tetrahedron edges identified with
// it, as (tetrahedron, edge 0..5) slots plus the (tetrahedron, angle pair)
// view used by the angle equations.
struct EdgeClass {
    std::vector<std::pair<long, int>> slots;
    std::vector<std::pair<long, int>> angle_slots;
};

struct LayeredTriangulation {
    TwistWord word;
    MatSL2 monodromy = MatSL2::identity();
    long n = 0;  // tetrahedron count == letters in the word

    std::vector<Tetrahedron> tets;
    std::vector<FacePairing> pairings;               // 2n, every face once
    std::vector<EdgeClass> edge_classes;             // n, by least slot
    std::vector<std::array<long, 6>> edge_class_of;  // [tet][edge] -> class
};

// One tetrahedron per word letter, realized as the diagonal-flip layer
// between consecutive strip levels; face pairings are found by matching the
// plane regions the faces occupy, and edge classes by union-find over the
// induced edge identifications.
LayeredTriangulation build_layered_triangulation(const TwistWord& w);

// Linear angle constraints: one row per tetrahedron (angle sum pi) followed
// by one row per edge class (angle sum 2 pi).  Column 3j + p is angle pair
// p of tetrahedron j; the right-hand side is in units of pi.
struct GluingSystem {
    Eigen::MatrixXi coeffs;
    Eigen::VectorXi rhs;
};

GluingSystem gluing_equations(const LayeredTriangulation& t);

// Dihedral angles (alpha_j, beta_j, gamma_j) per tetrahedron, radians.
struct AngleStructure {
    long n = 0;
    std::vector<std::array<double, 3>> angles;
};

// Shape parameters induced by an angle structure, with the complex gluing
// defect: max over edge classes of |sum of log-shapes - 2 pi i|.
struct ShapeSolution {
    std::vector<std::complex<double>> shapes;
    double residual = 0.0;
};

// Maximizes the concave total-volume objective over the interior of the
// angle polytope by feasible-direction Newton ascent with backtracking,
// started from the all-pi/3 point projected onto the constraints; converged
// when the projected gradient falls below tol.  Throws NoInteriorPoint when
// the polytope has no interior and NonConvergence past the step limit.
std::pair<AngleStructure, ShapeSolution> solve_geometric(const LayeredTriangulation& t,
                                                         double tol = 1e-13);

// The function theta -> 1/2 sum_{m>=1} sin(2 m theta)/m^2: odd, pi-periodic,
// evaluated by the power series around 0 to full double precision.
double lobachevsky(double theta);

// Volume of the regular ideal tetrahedron, computed (never hard-coded).
double regular_ideal_volume();

struct VolumeResult {
    double volume = 0.0;
    long n = 0;
    double bound = 0.0;  // n times the regular ideal volume
    bool bound_satisfied = false;
    double equality_gap = 0.0;  // bound - volume
};

// Total volume of a solved structure and the per-letter upper bound check.
VolumeResult volume(const AngleStructure& a, double bound_tol = 1e-9);

}  // namespace ptb
