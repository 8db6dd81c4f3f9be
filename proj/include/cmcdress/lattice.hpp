#pragma once

#include <vector>

#include "cmcdress/cylinder.hpp"
#include "cmcdress/iwasawa.hpp"

namespace cmcdress {

struct Window {
    int m0{0}, m1{0}, n0{0}, n1{0};  // inclusive site ranges
    int width() const { return m1 - m0 + 1; }
    int height() const { return n1 - n0 + 1; }
    bool contains(int m, int n) const {
        return m >= m0 && m <= m1 && n >= n0 && n <= n1;
    }
};

class DressedLattice {
public:
    DressedLattice(CylinderData cylinder, Window window);

    const CylinderData& cylinder() const { return cyl_; }
    const Window& window() const { return win_; }
    int degree() const { return cyl_.U0.degree(); }

    const TwistedLoop& frame(int m, int n) const;
    const TwistedLoop& plus(int m, int n) const;
    void set_site(int m, int n, TwistedLoop frame, TwistedLoop plus);

    DressedLattice restricted(const Window& window) const;

private:
    std::size_t index(int m, int n) const;
    CylinderData cyl_;
    Window win_;
    std::vector<TwistedLoop> frames_;
    std::vector<TwistedLoop> plus_;
};

struct LatticeBuildOptions {
    IwasawaOptions factorization;
    bool column_first = true;  // fill the m = 0 column, then rows; false: transposed order
};

// One dressing step across a generator: factors plus * generator and carries
// the unitary part onto the frame.
struct DressStep {
    TwistedLoop frame;
    TwistedLoop plus;
    double residual;
};
DressStep dress_step(const TwistedLoop& frame, const TwistedLoop& plus,
                     const TwistedLoop& generator, const IwasawaOptions& options = {});

// Dresses the vacuum with a plus-loop seed over the window (the walk passes
// through the origin, where the frame is the identity and the plus factor is
// the normalized seed).
DressedLattice build_lattice(const CylinderData& cylinder, const TwistedLoop& seed,
                             const Window& window, const LatticeBuildOptions& options = {});

// Factors seed * vacuum_frame(m, n) in one shot; cross-checks the walked build.
DressStep factor_site(const CylinderData& cylinder, const TwistedLoop& seed, int m, int n,
                      const IwasawaOptions& options = {});

// Coefficients of one transition matrix, read off after multiplying by the
// matching delta: the result must be a three-band Laurent polynomial
//   u edges:  1/l [[0, r1 p], [r1/p, 0]] + [[alpha, 0], [0, conj alpha]]
//             + l [[0, -r1/p], [-r1 p, 0]]
//   v edges:  1/l [[0, i r2 q], [i r2/q, 0]] + [[beta, 0], [0, conj beta]]
//             + l [[0, i r2/q], [i r2 q, 0]]
struct EdgeCoefficients {
    Complex metric;     // p on u edges, q on v edges
    Complex potential;  // alpha on u edges, beta on v edges
    double residual;    // worst deviation from the band template
};
// structure_tol bounds the tolerated template residual; above it the frames
// do not form an extended frame and extraction fails.
EdgeCoefficients extract_u_edge(const DressedLattice& lattice, int m, int n,
                                double structure_tol = 0.1);
EdgeCoefficients extract_v_edge(const DressedLattice& lattice, int m, int n,
                                double structure_tol = 0.1);

struct LaxField {
    Window window;
    double r1{0.0}, r2{0.0};
    std::vector<EdgeCoefficients> u;  // edges (m, n) -> (m+1, n), m in [m0, m1)
    std::vector<EdgeCoefficients> v;  // edges (m, n) -> (m, n+1), n in [n0, n1)
    const EdgeCoefficients& u_edge(int m, int n) const;
    const EdgeCoefficients& v_edge(int m, int n) const;
};
LaxField extract_lax(const DressedLattice& lattice, double structure_tol = 0.1);

// Worst relative residuals of the compatibility system over all plaquettes.
struct IntegrabilityReport {
    double zero_curvature{0.0};  // U V' = V U' for the band-template matrices
    double closing{0.0};         // p p' = q q'
    double alpha_update{0.0};    // alpha step across a v edge
    double beta_update{0.0};     // beta step across a u edge
    double sinh_gordon{0.0};     // discrete sinh-Gordon relation
    double band_template{0.0};   // transitions against the three-band form
    double metric_compat{0.0};   // |alpha|^2 + r1^2 (p - 1/p)^2 = 1 and the beta analog
    double metric_reality{0.0};  // imaginary mass and positivity of p and q
    double unitarity{0.0};       // frame unitarity on the circle
    double worst() const;
};
IntegrabilityReport verify_integrability(const DressedLattice& lattice);

// Integrates log p = -(omega + omega_u)/2, log q = -(omega + omega_v)/2 over a
// spanning tree from the gauge value at the root (the origin when the window
// contains it). residual is the worst violation over all edges, including any
// imaginary mass the logs pick up.
struct OmegaField {
    Window window;
    std::vector<double> omega;  // row-major, n outer
    double residual{0.0};
    double at(int m, int n) const;
};
OmegaField reconstruct_omega(const LaxField& lax, double omega_origin = 0.0);

} // namespace cmcdress
