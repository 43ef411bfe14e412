#include "torun/qc.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <utility>

namespace torun {

Annulus Annulus::round(double r) {
    if (!(r > 0.0 && r < 1.0))
        throw invalid_input("Annulus::round: inner radius must lie in (0, 1)");
    return Annulus{Kind::ROUND, r};
}

Annulus Annulus::cylinder(double R) {
    if (!(R > 0.0)) throw invalid_input("Annulus::cylinder: height must be positive");
    return Annulus{Kind::CYLINDER, R};
}

double annulus_modulus(const Annulus& a) {
    switch (a.kind) {
    case Annulus::Kind::ROUND: return -std::log(a.param) / kTwoPi;
    case Annulus::Kind::CYLINDER: return a.param / kTwoPi;
    }
    throw invalid_input("annulus_modulus: unknown annulus kind");
}

double geodesic_length_from_modulus(double m) {
    if (!(m > 0.0)) throw invalid_input("geodesic_length_from_modulus: modulus must be positive");
    return (kTwoPi / 2.0) / m;
}

double dilatation_from_mu(cd mu_value) {
    const double a = std::abs(mu_value);
    if (!(a < 1.0)) throw invalid_input("dilatation_from_mu: |mu| must be < 1");
    return (1.0 + a) / (1.0 - a);
}

namespace {

void validate_cylinder_grid(double R, int nx, int nphi) {
    if (!(R > 0.0)) throw invalid_input("CylinderMapSamples: height must be positive");
    if (nx < 3) throw invalid_input("CylinderMapSamples: nx must be >= 3");
    if (nphi < 4) throw invalid_input("CylinderMapSamples: nphi must be >= 4");
}

JacobianSample to_jacobian(cd wx, cd wphi) {
    return JacobianSample{wx.real(), wphi.real(), wx.imag(), wphi.imag()};
}

} // namespace

CylinderMapSamples CylinderMapSamples::from_function(
    const std::function<cd(double, double)>& w, double R, int nx, int nphi) {
    validate_cylinder_grid(R, nx, nphi);
    if (!w) throw invalid_input("CylinderMapSamples: map must be callable");

    CylinderMapSamples s;
    s.R = R;
    s.nx = nx;
    s.nphi = nphi;
    s.image.resize(static_cast<std::size_t>(nx) * nphi);
    s.jac.resize(s.image.size());

    const double hx = R / (nx - 1);
    const double hphi = kTwoPi / nphi;
    for (int i = 0; i < nx; ++i) {
        const double x = s.x_of(i);
        for (int j = 0; j < nphi; ++j) {
            const double phi = s.phi_of(j);
            const std::size_t idx = static_cast<std::size_t>(i) * nphi + j;
            s.image[idx] = w(x, phi);

            cd wx;
            if (i == 0)
                wx = (-3.0 * w(x, phi) + 4.0 * w(x + hx, phi) - w(x + 2.0 * hx, phi)) /
                     (2.0 * hx);
            else if (i == nx - 1)
                wx = (3.0 * w(x, phi) - 4.0 * w(x - hx, phi) + w(x - 2.0 * hx, phi)) /
                     (2.0 * hx);
            else
                wx = (w(x + hx, phi) - w(x - hx, phi)) / (2.0 * hx);
            const cd wphi = (w(x, phi + hphi) - w(x, phi - hphi)) / (2.0 * hphi);
            s.jac[idx] = to_jacobian(wx, wphi);
        }
    }
    return s;
}

CylinderMapSamples CylinderMapSamples::from_samples(double R, int nx, int nphi,
                                                    std::vector<cd> image, int winding) {
    validate_cylinder_grid(R, nx, nphi);
    if (image.size() != static_cast<std::size_t>(nx) * nphi)
        throw invalid_input("CylinderMapSamples: sample count does not match the grid");

    CylinderMapSamples s;
    s.R = R;
    s.nx = nx;
    s.nphi = nphi;
    s.image = std::move(image);
    s.jac.resize(s.image.size());

    const double hx = R / (nx - 1);
    const double hphi = kTwoPi / nphi;
    const cd seam = cd(0.0, kTwoPi * winding);
    auto at = [&](int i, int j) {
        return s.image[static_cast<std::size_t>(i) * nphi + j];
    };
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < nphi; ++j) {
            cd wx;
            if (i == 0)
                wx = (-3.0 * at(0, j) + 4.0 * at(1, j) - at(2, j)) / (2.0 * hx);
            else if (i == nx - 1)
                wx = (3.0 * at(i, j) - 4.0 * at(i - 1, j) + at(i - 2, j)) / (2.0 * hx);
            else
                wx = (at(i + 1, j) - at(i - 1, j)) / (2.0 * hx);

            const cd right = j + 1 < nphi ? at(i, j + 1) : at(i, 0) + seam;
            const cd left = j > 0 ? at(i, j - 1) : at(i, nphi - 1) - seam;
            const cd wphi = (right - left) / (2.0 * hphi);
            s.jac[static_cast<std::size_t>(i) * nphi + j] = to_jacobian(wx, wphi);
        }
    return s;
}

namespace {

double sample_dilatation(const JacobianSample& J) {
    const double s1 = std::hypot(J.a + J.d, J.b - J.c);
    const double s2 = std::hypot(J.a - J.d, J.b + J.c);
    const double smax = (s1 + s2) / 2.0;
    const double smin = (s1 - s2) / 2.0;
    if (!(smin > 0.0)) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

// trapezoid weights in x, rectangle rule in the periodic phi direction;
// strides coarsen the quadrature for the refinement estimate
double graph_area(const CylinderMapSamples& s, int stride_x, int stride_phi) {
    const double hx = s.R / (s.nx - 1);
    const double hphi = kTwoPi / s.nphi;

    std::vector<int> rows;
    for (int i = 0; i < s.nx; i += stride_x) rows.push_back(i);
    if (rows.back() != s.nx - 1) rows.push_back(s.nx - 1);

    double total = 0.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int i = rows[r];
        const double x_prev = r == 0 ? 0.0 : hx * rows[r - 1];
        const double x_next = r + 1 == rows.size() ? s.R : hx * rows[r + 1];
        const double wx = (x_next - x_prev) / 2.0;

        double row = 0.0;
        for (int j = 0; j < s.nphi; j += stride_phi)
            row += std::fabs(s.jac[static_cast<std::size_t>(i) * s.nphi + j].det());
        total += wx * row * (hphi * stride_phi);
    }
    return total;
}

} // namespace

DilatationField map_dilatation_field(const CylinderMapSamples& samples) {
    if (samples.jac.size() != static_cast<std::size_t>(samples.nx) * samples.nphi)
        throw invalid_input("map_dilatation_field: samples carry no Jacobians");

    DilatationField field;
    field.nx = samples.nx;
    field.nphi = samples.nphi;
    field.values.resize(samples.jac.size());
    for (std::size_t i = 0; i < samples.jac.size(); ++i) {
        field.values[i] = sample_dilatation(samples.jac[i]);
        if (field.values[i] > field.max_dilatation)
            field.max_dilatation = field.values[i];
    }
    return field;
}

GrotzschReport grotzsch_area_certify(const CylinderMapSamples& samples, double K) {
    if (!(K >= 1.0)) throw invalid_input("grotzsch_area_certify: K must be >= 1");
    const DilatationField dil = map_dilatation_field(samples);
    if (!(K >= dil.max_dilatation)) {
        char buf[112];
        std::snprintf(buf, sizeof buf,
                      "grotzsch_area_certify: K = %.6g below measured dilatation %.6g", K,
                      dil.max_dilatation);
        throw invalid_input(buf);
    }

    GrotzschReport rep;
    rep.K = K;
    rep.max_dilatation = dil.max_dilatation;
    rep.area = kTwoPi * samples.R;
    rep.area_g = graph_area(samples, 1, 1);
    const int stride_phi = samples.nphi % 2 == 0 ? 2 : 1;
    rep.refinement_diff = std::fabs(rep.area_g - graph_area(samples, 2, stride_phi));
    rep.slack = std::fmax(10.0 * rep.refinement_diff, 1e-9 * rep.area_g);
    rep.modulus_a1 = samples.R / kTwoPi;
    rep.modulus_lower_bound = rep.modulus_a1 / K;
    rep.certified = rep.area_g >= rep.area / K - rep.slack;
    if (!rep.certified) {
        char buf[144];
        std::snprintf(buf, sizeof buf,
                      "length-area bound failed: Area_g = %.12g < K^-1 Area = %.12g "
                      "beyond slack %.3g",
                      rep.area_g, rep.area / K, rep.slack);
        throw property_failure(buf);
    }
    return rep;
}

} // namespace torun
