#include "levyspde/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace levyspde {

DirichletSpectrum dirichlet_spectrum(int K, double length) {
    if (K < 1) {
        throw std::invalid_argument("mode count must be positive, got " + std::to_string(K));
    }
    if (!(length > 0.0)) {
        throw std::invalid_argument("domain length must be positive");
    }
    DirichletSpectrum s;
    s.mode_count = K;
    s.domain_length = length;
    s.eigenvalues.resize(static_cast<std::size_t>(K));
    for (int k = 1; k <= K; ++k) {
        const double w = k * std::numbers::pi / length;
        s.eigenvalues[static_cast<std::size_t>(k - 1)] = w * w;
    }
    return s;
}

FemSpace assemble_fem(int M) {
    if (M < 2) {
        throw std::invalid_argument("FEM needs at least 2 cells (one interior node), got " +
                                    std::to_string(M));
    }
    FemSpace f;
    f.cell_count = M;
    f.mesh_width = 1.0 / M;
    const int n = M - 1;
    const double h = f.mesh_width;
    f.mass = Eigen::MatrixXd::Zero(n, n);
    f.stiffness = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        f.mass(i, i) = 4.0 * h / 6.0;
        f.stiffness(i, i) = 2.0 / h;
        if (i + 1 < n) {
            f.mass(i, i + 1) = f.mass(i + 1, i) = h / 6.0;
            f.stiffness(i, i + 1) = f.stiffness(i + 1, i) = -1.0 / h;
        }
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(f.stiffness, f.mass);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("generalized eigensolve failed for M=" + std::to_string(M));
    }
    f.eigenvalues = es.eigenvalues();
    f.eigenvectors = es.eigenvectors();
    // fix the sign so that the first nodal entry is nonnegative
    for (int j = 0; j < n; ++j) {
        if (f.eigenvectors(0, j) < 0.0) {
            f.eigenvectors.col(j) *= -1.0;
        }
    }
    return f;
}

double fem_eigenvalue_closed_form(int M, int j) {
    const double h = 1.0 / M;
    const double c = std::cos(j * std::numbers::pi * h);
    return 6.0 / (h * h) * (1.0 - c) / (2.0 + c);
}

Eigen::MatrixXd cross_gram(const FemSpace& fem, const DirichletSpectrum& spec) {
    if (spec.domain_length != 1.0) {
        throw std::invalid_argument("cross_gram requires the unit interval");
    }
    const int n = fem.interior_dim();
    const double h = fem.mesh_width;
    Eigen::MatrixXd G(n, spec.mode_count);
    for (int k = 1; k <= spec.mode_count; ++k) {
        const double w = k * std::numbers::pi;
        // integral of a hat centred at x_i against sin(w x) equals
        // sin(w x_i) * 4 sin^2(w h / 2) / (w^2 h)
        const double s = std::sin(0.5 * w * h);
        const double factor = std::numbers::sqrt2 * 4.0 * s * s / (w * w * h);
        for (int i = 0; i < n; ++i) {
            G(i, k - 1) = factor * std::sin(w * (i + 1) * h);
        }
    }
    return G;
}

Eigen::VectorXd l2_project_mode(const FemSpace& fem, const DirichletSpectrum& spec, int k) {
    if (k < 1 || k > spec.mode_count) {
        throw std::invalid_argument("mode index out of range: " + std::to_string(k));
    }
    const int n = fem.interior_dim();
    const double h = fem.mesh_width;
    const double w = k * std::numbers::pi;
    const double s = std::sin(0.5 * w * h);
    const double factor = std::numbers::sqrt2 * 4.0 * s * s / (w * w * h);
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) {
        g(i) = factor * std::sin(w * (i + 1) * h);
    }
    const Eigen::VectorXd c = fem.mass.llt().solve(g);
    return fem.eigenvectors.transpose() * (fem.mass * c);
}

Eigen::MatrixXd projection_coordinates(const FemSpace& fem, const DirichletSpectrum& spec) {
    // V^T M M^{-1} G = V^T G
    return fem.eigenvectors.transpose() * cross_gram(fem, spec);
}

double dot_norm(const DotHVector& v, const DirichletSpectrum& spec, double alpha) {
    if (v.coefficients.size() > static_cast<std::size_t>(spec.mode_count)) {
        throw std::invalid_argument("vector has more coefficients than the spectrum has modes");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < v.coefficients.size(); ++i) {
        const double c = v.coefficients[i];
        sum += alpha == 0.0 ? c * c : std::pow(spec.eigenvalues[i], alpha) * c * c;
    }
    return std::sqrt(sum);
}

}  // namespace levyspde
