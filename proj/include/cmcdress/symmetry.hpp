#pragma once

#include <string>

#include "cmcdress/lattice.hpp"

namespace cmcdress {

// Witness of the frame transformation law
//   F_{m+k,n+l} = chi F_mn k^{(-1)^{m+n+1}},  k = diag(e^{i phase/2}, e^{-i phase/2}).
struct SymmetryCertificate {
    int k{0}, l{0};
    TwistedLoop chi{0, true};
    double phase{0.0};                // in [0, 2 pi)
    double max_residual{0.0};         // worst frame-law deviation, coefficient max norm
    double holomorphy_estimate{0.0};  // decay radius of chi
};

enum class SymmetryStage { metric, phase, frame };
const char* to_string(SymmetryStage stage);

struct SymmetryResult {
    bool accepted{false};
    SymmetryCertificate certificate;
    SymmetryStage failed_stage{SymmetryStage::metric};
    std::string reason;
    double metric_residual{0.0};
    double phase_residual{0.0};
    double frame_residual{0.0};
};

struct SymmetryOptions {
    double accept_tol{1e-6};
    double alpha_floor{1e-6};  // potentials below this carry no usable phase
    int min_sites{8};
};

// Three-stage test of the shift (k, l): metric invariance of p and q, phase
// coherence of the potential ratios, and the frame law with chi = F_{k,l} k.
SymmetryResult detect_symmetry(const DressedLattice& lattice, const LaxField& lax, int k, int l,
                               const SymmetryOptions& options = {});

struct EuclideanMotion {
    Mat2 rotation;  // rotation spinor, acts on points by conjugation
    Vec3 translation;
};

// Motion carried by the certificate: rotation spinor chi(1), translation
// spinor d/dtheta chi|_0 chi(1)^{-1}.
EuclideanMotion euclidean_motion(const SymmetryCertificate& certificate);
Vec3 apply_motion(const EuclideanMotion& motion, const Vec3& x);
EuclideanMotion compose(const EuclideanMotion& second, const EuclideanMotion& first);

// True when the motion is the identity: chi(1) = +-I and zero theta derivative.
bool is_period(const SymmetryCertificate& certificate, double tol = 1e-6);

} // namespace cmcdress
