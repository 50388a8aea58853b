#include "asymcom/path.hpp"
#include "asymcom/errors.hpp"

#include <algorithm>
#include <cmath>

namespace asymcom {

double Path::length() const {
    double L = 0.0;
    for (size_t i = 1; i < nodes.size(); ++i) L += std::abs(nodes[i] - nodes[i - 1]);
    return L;
}

Contour default_contour(const RootSet& roots, int root_index, int loops) {
    Contour c;
    c.winding.assign(roots.roots.size(), 0);
    c.winding.at(root_index) = loops;
    double r = roots.min_separation / 3.0;
    if (!std::isfinite(r)) r = 0.5;
    c.radii.assign(roots.roots.size(), r);
    c.orientation = 1;
    return c;
}

double distance_to_segment(cplx a, cplx b, cplx p) {
    const cplx ab = b - a;
    const double L2 = std::norm(ab);
    if (L2 == 0.0) return std::abs(p - a);
    double t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / L2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
}

int winding_number(const std::vector<cplx>& closed_nodes, cplx p) {
    double total = 0.0;
    for (size_t i = 1; i < closed_nodes.size(); ++i) {
        const cplx u = closed_nodes[i - 1] - p;
        const cplx v = closed_nodes[i] - p;
        total += std::arg(v / u);
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

std::vector<cplx> circle_nodes_around(cplx p, double r, int orientation, int loops,
                                      int nodes_per_loop, double start_angle) {
    std::vector<cplx> out;
    const int total = nodes_per_loop * loops;
    out.reserve(total + 1);
    for (int i = 0; i <= total; ++i) {
        double th = start_angle + orientation * 2.0 * M_PI * double(i) / nodes_per_loop;
        out.push_back(p + r * std::polar(1.0, th));
    }
    return out;
}

namespace {

// Inserts arc nodes replacing the part of segment (a,b) that enters the
// eps-disk of root p.  Arc radius is slightly above eps so the polygonal
// chords keep the clearance.
void deform_segment(cplx a, cplx b, const RootSet& roots, double eps,
                    std::vector<cplx>& out) {
    // Find the first offending root along the segment.
    const cplx ab = b - a;
    const double L = std::abs(ab);
    double best_t = 2.0;
    int best_j = -1;
    const double rho = 1.12 * eps;
    for (size_t j = 0; j < roots.roots.size(); ++j) {
        const cplx p = roots.roots[j];
        if (distance_to_segment(a, b, p) >= eps) continue;
        double t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / (L * L);
        // Entry parameter of the rho-disk.
        double d = std::abs(p - (a + t * ab));
        double half = std::sqrt(std::max(rho * rho - d * d, 0.0)) / L;
        double t1 = t - half;
        if (t1 > 1e-12 && t1 < best_t) { best_t = t1; best_j = int(j); }
    }
    if (best_j < 0) { out.push_back(b); return; }

    const cplx p = roots.roots[best_j];
    double t = ((p - a).real() * ab.real() + (p - a).imag() * ab.imag()) / (L * L);
    double d = std::abs(p - (a + t * ab));
    double half = std::sqrt(std::max(rho * rho - d * d, 0.0)) / L;
    double t1 = std::max(t - half, 0.0);
    double t2 = std::min(t + half, 1.0);
    const cplx q1 = a + t1 * ab;
    const cplx q2 = a + t2 * ab;

    // Arc from q1 to q2 on radius rho, passing on the left of the travel
    // direction (caller convention; see Contour docs).
    const cplx dir = ab / L;
    const cplx left = cplx(0.0, 1.0) * dir;
    double th1 = std::arg(q1 - p);
    double th2 = std::arg(q2 - p);
    // Choose the sweep whose midpoint lies on the left side.
    double sweep = th2 - th1;
    while (sweep <= -M_PI) sweep += 2.0 * M_PI;
    while (sweep > M_PI) sweep -= 2.0 * M_PI;
    double mid = th1 + sweep / 2.0;
    cplx mid_pt = std::polar(1.0, mid);
    if (mid_pt.real() * left.real() + mid_pt.imag() * left.imag() < 0.0)
        sweep += (sweep <= 0.0 ? 2.0 * M_PI : -2.0 * M_PI);

    const int narc = std::max(8, int(std::ceil(std::abs(sweep) / (M_PI / 12.0))));
    out.push_back(p + rho * std::polar(1.0, th1));
    for (int i = 1; i <= narc; ++i)
        out.push_back(p + rho * std::polar(1.0, th1 + sweep * double(i) / narc));

    // Continue with the remainder of the segment (may hit further roots).
    deform_segment(q2, b, roots, eps, out);
}

} // namespace

Path deform_path(const Path& path, const RootSet& roots, double eps_root) {
    for (const auto& node : path.nodes)
        if (distance_to_roots(node, roots) < eps_root)
            throw EndpointTooClose("path node within eps_root of a root");

    Path out;
    out.plane = path.plane;
    if (path.nodes.empty()) return out;
    out.nodes.push_back(path.nodes.front());
    for (size_t i = 1; i < path.nodes.size(); ++i)
        deform_segment(path.nodes[i - 1], path.nodes[i], roots, eps_root, out.nodes);

    // Drop consecutive duplicates.
    auto& n = out.nodes;
    n.erase(std::unique(n.begin(), n.end(),
                        [](cplx u, cplx v) { return std::abs(u - v) < 1e-15; }),
            n.end());
    return out;
}

Path contour_to_path(const Contour& contour, const RootSet& roots, cplx base_y,
                     double eps_root, int circle_nodes) {
    if (contour.winding.size() != roots.roots.size())
        throw MathError("BadContour", "winding size does not match root count");
    bool any = false;
    for (int w : contour.winding) any = any || (w != 0);
    if (!any) throw MathError("BadContour", "winding must not be all zero");

    Path out;
    out.plane = Plane::Y;
    out.nodes.push_back(base_y);
    cplx cur = base_y;
    for (size_t j = 0; j < contour.winding.size(); ++j) {
        if (contour.winding[j] == 0) continue;
        const cplx p = roots.roots[j];
        const double r = contour.radii.at(j);
        if (r >= roots.min_separation / 2.0)
            throw MathError("BadContour", "radius must be below min_separation/2");
        // Entry point on the circle, toward the current position.
        const cplx u = (cur - p) / std::abs(cur - p);
        const cplx entry = p + r * u;
        // Leg to the circle, deformed around the other roots.
        RootSet others;
        others.min_separation = roots.min_separation;
        for (size_t k = 0; k < roots.roots.size(); ++k)
            if (k != j) others.roots.push_back(roots.roots[k]);
        Path leg;
        leg.nodes = {cur, entry};
        leg = deform_path(leg, others, eps_root);
        out.nodes.insert(out.nodes.end(), leg.nodes.begin() + 1, leg.nodes.end());

        int loops = std::abs(contour.winding[j]);
        int orient = (contour.winding[j] > 0 ? 1 : -1) * contour.orientation;
        auto circ = circle_nodes_around(p, r, orient, loops, circle_nodes, std::arg(u));
        out.nodes.insert(out.nodes.end(), circ.begin() + 1, circ.end());
        // Walk back to base so the composite is a closed loop at base_y.
        for (auto it = leg.nodes.rbegin() + 1; it != leg.nodes.rend(); ++it)
            out.nodes.push_back(*it);
        cur = base_y;
    }
    return out;
}

} // namespace asymcom

namespace asymcom {

std::vector<double> path_params(const Path& xpath, const std::vector<cplx>& xs) {
    const auto& n = xpath.nodes;
    std::vector<double> cum(n.size(), 0.0);
    for (size_t i = 1; i < n.size(); ++i) cum[i] = cum[i - 1] + std::abs(n[i] - n[i - 1]);
    std::vector<double> out;
    size_t seg = 0;
    for (cplx x : xs) {
        // advance the segment cursor while the next segment fits x better
        auto fit = [&](size_t s, double& t) {
            const cplx a = n[s], b = n[s + 1];
            const double L2 = std::norm(b - a);
            t = (L2 == 0.0) ? 0.0 : std::clamp(((x - a) * std::conj(b - a)).real() / L2, 0.0, 1.0);
            return std::abs(x - (a + t * (b - a)));
        };
        double t;
        double d = fit(seg, t);
        while (seg + 2 < n.size()) {
            double t2;
            const double d2 = fit(seg + 1, t2);
            if (d2 <= d + 1e-14) { ++seg; t = t2; d = d2; } else break;
        }
        out.push_back(cum[seg] + t * std::abs(n[seg + 1] - n[seg]));
    }
    return out;
}

} // namespace asymcom
