#ifndef ASYMCOM_PATH_HPP
#define ASYMCOM_PATH_HPP

#include "asymcom/poly.hpp"

#include <vector>

namespace asymcom {

enum class Plane { X, Y };

// Piecewise-linear path in the complex plane.
struct Path {
    std::vector<cplx> nodes;
    Plane plane = Plane::Y;

    double length() const;
};

// Root-encircling loop specification: winding[j] loops around roots[j], each
// on a circle of radius radii[j], all with the given orientation (+1 = ccw).
struct Contour {
    std::vector<int> winding;
    std::vector<double> radii;
    int orientation = 1;
};

Contour default_contour(const RootSet& roots, int root_index, int loops = 1);

double distance_to_segment(cplx a, cplx b, cplx p);

// Total winding number of a closed polygonal path around p.
int winding_number(const std::vector<cplx>& closed_nodes, cplx p);

// Deforms path segments that come within eps_root of a root, inserting
// polygonal arcs that pass the root on the left of the travel direction.
// Throws EndpointTooClose if a node is itself within eps_root of a root.
Path deform_path(const Path& path, const RootSet& roots, double eps_root);

// Closed polygonal realization of a contour: from base_y, for each root with
// nonzero winding, travel to its circle, loop, and return.  The connecting
// legs are deformed around the other roots.
Path contour_to_path(const Contour& contour, const RootSet& roots, cplx base_y,
                     double eps_root, int circle_nodes = 96);

// Arclength positions of points lying (in order) on the polygonal path.
std::vector<double> path_params(const Path& xpath, const std::vector<cplx>& xs);

// Polygonal circle around p (ccw for orientation=+1), closed, starting and
// ending at p + r.
std::vector<cplx> circle_nodes_around(cplx p, double r, int orientation, int loops,
                                      int nodes_per_loop = 96, double start_angle = 0.0);

} // namespace asymcom

#endif
