#pragma once

#include "bresse/spectral_system.hpp"

namespace bresse {

/// Linear functional U -> coeffs . U on a mode state.
struct LinearForm {
    Eigen::RowVectorXcd coeffs;

    cplx operator()(const StateVector& u) const { return (coeffs * u)(0); }
    LinearForm operator+(const LinearForm& o) const { return {coeffs + o.coeffs}; }
    LinearForm operator-(const LinearForm& o) const { return {coeffs - o.coeffs}; }
    friend LinearForm operator*(cplx c, const LinearForm& f) { return {c * f.coeffs}; }
};

/// Named linear forms of one mode, including the shear combination
/// i xi phi - psi - l omega and the axial combination i xi omega - l phi.
struct ModeForms {
    LinearForm phi, phi_t, psi, psi_t, omega, omega_t;
    LinearForm theta1, theta2, theta1_t, theta2_t;
    LinearForm shear, axial;

    ModeForms(SystemKind kind, double xi, double l);
};

/// Real quadratic functional F(U) = U^H H U with H Hermitian, assembled
/// from terms Re(c a(U) conj(b(U))).
class HermitianForm {
public:
    explicit HermitianForm(int dim) : h_(ComplexMatrix::Zero(dim, dim)) {}

    HermitianForm& add_re(cplx c, const LinearForm& a, const LinearForm& b);
    HermitianForm& add_square(double w, const LinearForm& a) { return add_re(w, a, a); }
    HermitianForm& add(const HermitianForm& other, double scale = 1.0);

    double operator()(const StateVector& u) const { return u.dot(h_ * u).real(); }

    /// d/dt F(U(t)) when U' = du: 2 Re(U^H H U').
    double derivative(const StateVector& u, const StateVector& du) const { return 2.0 * u.dot(h_ * du).real(); }

    /// Hermitian matrix of d/dt F along U' = A U, i.e. H A + A^H H.
    HermitianForm along(const ComplexMatrix& a) const;

    const ComplexMatrix& matrix() const noexcept { return h_; }

private:
    ComplexMatrix h_;
};

} // namespace bresse
