#include "bresse/hermitian_form.hpp"

namespace bresse {

namespace {

LinearForm unit_form(int n, int slot) {
    LinearForm f{Eigen::RowVectorXcd::Zero(n)};
    if (slot >= 0) f.coeffs(slot) = 1.0;
    return f;
}

} // namespace

ModeForms::ModeForms(SystemKind kind, double xi, double l) {
    const int n = state_dimension(kind);
    const StateLayout s = StateLayout::of(kind);
    phi = unit_form(n, s.phi);
    phi_t = unit_form(n, s.phi_t);
    psi = unit_form(n, s.psi);
    psi_t = unit_form(n, s.psi_t);
    omega = unit_form(n, s.omega);
    omega_t = unit_form(n, s.omega_t);
    theta1 = unit_form(n, s.theta1);
    theta2 = unit_form(n, s.theta2);
    theta1_t = unit_form(n, s.theta1_t);
    theta2_t = unit_form(n, s.theta2_t);
    const cplx ixi{0.0, xi};
    shear = ixi * phi - psi - cplx(l) * omega;
    axial = ixi * omega - cplx(l) * phi;
}

HermitianForm& HermitianForm::add_re(cplx c, const LinearForm& a, const LinearForm& b) {
    // c a(U) conj(b(U)) = U^H (c b^H a) U
    const ComplexMatrix m = c * (b.coeffs.adjoint() * a.coeffs);
    h_ += 0.5 * (m + m.adjoint());
    return *this;
}

HermitianForm& HermitianForm::add(const HermitianForm& other, double scale) {
    h_ += scale * other.h_;
    return *this;
}

HermitianForm HermitianForm::along(const ComplexMatrix& a) const {
    HermitianForm d(static_cast<int>(h_.rows()));
    d.h_ = h_ * a + a.adjoint() * h_;
    return d;
}

} // namespace bresse
