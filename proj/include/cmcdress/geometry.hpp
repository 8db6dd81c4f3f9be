#pragma once

#include <iosfwd>
#include <vector>

#include "cmcdress/lattice.hpp"

namespace cmcdress {

// Spinor produced by the Sym formula,
//   Psi = d/dtheta F(e^{i theta})|_0 F(1)^{-1} + (i/2) F(1) sigma3 F(1)^{-1}.
Mat2 sym_spinor(const TwistedLoop& frame);

// The R^3 point of the spinor; defect reports its distance from the traceless
// anti-Hermitian form (identity frame maps to (0, 0, -1)).
Vec3 sym_point(const TwistedLoop& frame, double* defect = nullptr);

struct DiscreteSurface {
    Window window;
    double r1{0.0}, r2{0.0};
    std::vector<Vec3> points;   // row-major, n outer
    double spinor_defect{0.0};  // worst defect over the window
    const Vec3& at(int m, int n) const;
};
DiscreteSurface build_surface(const DressedLattice& lattice);

// Closed-form edge vectors: the frame value at 1 conjugates a matrix built
// from the Lax coefficients of the edge.
Vec3 u_edge_vector(const DressedLattice& lattice, int m, int n);
Vec3 v_edge_vector(const DressedLattice& lattice, int m, int n);

// Edge lengths predicted by the metric coefficients alone.
double u_edge_length(double r1, double p);
double v_edge_length(double r2, double q);

// Compares surface-point differences against the closed forms.
struct EdgeCheckReport {
    double u_vector{0.0};  // relative deviation of measured u edges
    double v_vector{0.0};
    double u_length{0.0};  // relative deviation of measured u edge lengths
    double v_length{0.0};
    double worst() const;
};
EdgeCheckReport verify_edges(const DressedLattice& lattice, const DiscreteSurface& surface);

// Wavefront OBJ: one v line per site (row-major, n outer), 1-based quads.
void export_obj(const DiscreteSurface& surface, std::ostream& out);

// CSV m,n,len_u,len_v over the sites that carry both edges.
void export_metric_csv(const LaxField& lax, std::ostream& out);

} // namespace cmcdress
