#pragma once

#include <functional>
#include <vector>

#include "torun/grid.hpp"

namespace torun {

// Conformal annulus, either round {r < |z| < 1} or a flat cylinder
// [0, R] x R/2piZ.
struct Annulus {
    enum class Kind { ROUND, CYLINDER };

    Kind kind = Kind::ROUND;
    double param = 0.5; // inner radius r (ROUND) or height R (CYLINDER)

    static Annulus round(double r);
    static Annulus cylinder(double R);
};

// m(ROUND(r)) = -ln(r)/(2pi), m(CYLINDER(R)) = R/(2pi).
double annulus_modulus(const Annulus& a);

// Closed-geodesic length of the annulus with modulus m: pi/m.
double geodesic_length_from_modulus(double m);

// Pointwise dilatation of a map with Beltrami coefficient value mu:
// (1 + |mu|)/(1 - |mu|).
double dilatation_from_mu(cd mu_value);

// Entries of a finite-difference differential in cylinder coordinates:
// [du/dx, du/dphi; dv/dx, dv/dphi] for the image w = u + iv.
struct JacobianSample {
    double a = 0.0, b = 0.0;
    double c = 0.0, d = 0.0;

    double det() const { return a * d - b * c; }
};

// Map samples on the cylinder [0, R] x [0, 2pi): x inclusive with spacing
// R/(nx-1), phi periodic with spacing 2pi/nphi, both row-major in x.
struct CylinderMapSamples {
    double R = 0.0;
    int nx = 0;
    int nphi = 0;
    std::vector<cd> image;           // image[ix * nphi + j] = w(x_ix, phi_j)
    std::vector<JacobianSample> jac; // same layout

    // Differentials by evaluating w at stencil points directly (centered,
    // second-order one-sided at the x boundaries). w lives on the cover:
    // no periodicity in phi is assumed, so affine maps are handled exactly.
    static CylinderMapSamples from_function(const std::function<cd(double, double)>& w,
                                            double R, int nx, int nphi);

    // Differentials from the stored samples alone: centered in x (one-sided
    // second-order at the boundaries), centered in phi with the seam
    // corrected by winding * 2pi*i per full loop.
    static CylinderMapSamples from_samples(double R, int nx, int nphi,
                                           std::vector<cd> image, int winding);

    double x_of(int i) const { return R * i / (nx - 1); }
    double phi_of(int j) const { return kTwoPi * j / nphi; }
};

struct DilatationField {
    int nx = 0;
    int nphi = 0;
    std::vector<double> values; // sigma_max / sigma_min per sample
    double max_dilatation = 0.0;
};

// Singular-value ratio of each sampled differential. Samples with
// nonpositive determinant are reported as infinite dilatation.
DilatationField map_dilatation_field(const CylinderMapSamples& samples);

struct GrotzschReport {
    double area_g = 0.0; // integral of |det J| dx dphi (trapezoid x, rectangle phi)
    double area = 0.0;   // 2*pi*R
    double K = 0.0;
    double max_dilatation = 0.0;
    double refinement_diff = 0.0;
    double slack = 0.0;
    double modulus_a1 = 0.0;          // R/(2pi)
    double modulus_lower_bound = 0.0; // m(image) >= K^{-1} m(A1)
    bool certified = false;
};

// Length-area certificate: checks Area_g >= K^{-1} * 2piR - slack, where
// slack = max(10 * refinement difference, 1e-9 * area_g). Requires K to
// dominate the measured dilatation. Throws property_failure when the bound
// fails beyond slack.
GrotzschReport grotzsch_area_certify(const CylinderMapSamples& samples, double K);

} // namespace torun
