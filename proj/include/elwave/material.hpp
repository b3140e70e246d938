#pragma once

// 2D stiffness tensors in Voigt form, Legendre ellipticity validation, and the
// Christoffel plane-wave eigenproblem.
//
// Voigt convention: plain entries C_{alpha beta} exactly as displayed in the
// constitutive matrix, no shear scaling. The ellipticity test applies the
// engineering-strain factors explicitly (Mandel scaling of the shear row/column).

#include <utility>

#include <Eigen/Eigenvalues>

#include "elwave/common.hpp"

namespace elwave {

/// Stiffness tensor C_{ijkl} packed as the symmetric Voigt matrix
/// [C11 C12 C13; C12 C22 C23; C13 C23 C33], plus density (Im rho >= 0 allowed,
/// stored but exercised only with real densities).
struct StiffnessTensor2D {
    Eigen::Matrix3d voigt = Eigen::Matrix3d::Zero();
    Complex rho{1.0, 0.0};

    StiffnessTensor2D() = default;
    StiffnessTensor2D(double c11, double c12, double c13, double c22, double c23, double c33,
                      Complex density = Complex{1.0, 0.0}) {
        voigt << c11, c12, c13, c12, c22, c23, c13, c23, c33;
        rho = density;
    }

    /// Smallest eigenvalue of the Mandel-scaled Voigt matrix: the best constant
    /// c0 in (C:A):A >= c0 ||A||^2 over symmetric A.
    double ellipticity_constant() const {
        Eigen::Matrix3d m = voigt;
        const double s = std::sqrt(2.0);
        m(0, 2) *= s; m(2, 0) *= s;
        m(1, 2) *= s; m(2, 1) *= s;
        m(2, 2) *= 2.0;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    bool is_elliptic() const { return ellipticity_constant() > 0.0; }

    /// sigma = C : grad(u) (minor symmetry: acts on the symmetric part).
    Mat2c stress(const Mat2c& grad_u) const {
        const Complex e11 = grad_u(0, 0);
        const Complex e22 = grad_u(1, 1);
        const Complex g12 = grad_u(0, 1) + grad_u(1, 0); // engineering shear
        const Complex s1 = voigt(0, 0) * e11 + voigt(0, 1) * e22 + voigt(0, 2) * g12;
        const Complex s2 = voigt(0, 1) * e11 + voigt(1, 1) * e22 + voigt(1, 2) * g12;
        const Complex s3 = voigt(0, 2) * e11 + voigt(1, 2) * e22 + voigt(2, 2) * g12;
        Mat2c sig;
        sig << s1, s3, s3, s2;
        return sig;
    }
};

/// Homogeneous isotropic exterior: Lame constants and density, with the derived
/// compressional and shear wavenumbers per frequency.
struct IsotropicBackground {
    double lambda = 1.0;
    double mu = 1.0;
    double rho0 = 1.0;

    IsotropicBackground() = default;
    IsotropicBackground(double lam, double mu_, double rho) : lambda(lam), mu(mu_), rho0(rho) {
        if (!(mu > 0.0) || !(2.0 * lambda + 2.0 * mu > 0.0) || !(rho0 > 0.0))
            throw DomainError("IsotropicBackground: need mu > 0, lambda + mu > 0, rho0 > 0");
    }

    double kp(double omega) const { return omega * std::sqrt(rho0 / (lambda + 2.0 * mu)); }
    double ks(double omega) const { return omega * std::sqrt(rho0 / mu); }
};

/// Voigt matrix of an isotropic medium: [l+2m, l, 0; l, l+2m, 0; 0, 0, m].
inline StiffnessTensor2D isotropic_stiffness(double lambda, double mu, Complex rho = Complex{1.0, 0.0}) {
    if (!(mu > 0.0) || !(lambda + mu > 0.0))
        throw DomainError("isotropic_stiffness: ellipticity requires mu > 0 and lambda + mu > 0");
    return StiffnessTensor2D(lambda + 2.0 * mu, lambda, 0.0, lambda + 2.0 * mu, 0.0, mu, rho);
}

/// Christoffel matrix A_C = M1 d1^2 + M2 d1 d2 + M3 d2^2 for a unit direction d.
inline Mat2 christoffel(const StiffnessTensor2D& c, const Vec2& d) {
    if (std::abs(d.norm() - 1.0) > 1e-12)
        throw DomainError("christoffel: direction must be a unit vector");
    const auto& v = c.voigt;
    Mat2 m1, m2, m3;
    m1 << v(0, 0), v(0, 2), v(0, 2), v(2, 2);
    m2 << 2.0 * v(0, 2), v(0, 1) + v(2, 2), v(0, 1) + v(2, 2), 2.0 * v(1, 2);
    m3 << v(2, 2), v(1, 2), v(1, 2), v(1, 1);
    return m1 * d[0] * d[0] + m2 * d[0] * d[1] + m3 * d[1] * d[1];
}

/// M[i][k] = sum_{j,l} C_{ijkl} a_j b_l; contraction(c, nu, nu) is the
/// Christoffel matrix in the normal direction.
inline Mat2 contraction(const StiffnessTensor2D& c, const Vec2& a, const Vec2& b) {
    auto vi = [](int i, int j) { return (i == j) ? i : 2; };
    Mat2 m = Mat2::Zero();
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j)
                for (int l = 0; l < 2; ++l) m(i, k) += c.voigt(vi(i, j), vi(k, l)) * a[j] * b[l];
    return m;
}

struct PlaneWaveMode {
    double velocity = 0.0; // phase velocity v
    Vec2 polarization = Vec2::Zero();
};

/// Eigenpairs of the Christoffel matrix: A_C p = rho v^2 p, sorted by descending
/// rho v^2 (quasi-P first). Requires a real positive density.
inline std::pair<PlaneWaveMode, PlaneWaveMode> plane_wave_modes(const StiffnessTensor2D& c, const Vec2& d) {
    if (c.rho.imag() != 0.0)
        throw DomainError("plane_wave_modes: complex density not supported by the Christoffel oracle");
    const double rho = c.rho.real();
    if (!(rho > 0.0)) throw DomainError("plane_wave_modes: density must be positive");
    const Mat2 a = christoffel(c, d);
    Eigen::SelfAdjointEigenSolver<Mat2> es(a);
    if (!(es.eigenvalues()(0) > 0.0))
        throw DomainError("plane_wave_modes: Christoffel matrix is not positive definite");
    PlaneWaveMode fast{std::sqrt(es.eigenvalues()(1) / rho), es.eigenvectors().col(1)};
    PlaneWaveMode slow{std::sqrt(es.eigenvalues()(0) / rho), es.eigenvectors().col(0)};
    return {fast, slow};
}

} // namespace elwave
