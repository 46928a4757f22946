#pragma once

#include <Eigen/Dense>

#include <vector>

namespace levyspde {

// Dirichlet Laplacian on (0, L): lambda_k = (k pi / L)^2, phi_k = sqrt(2/L) sin(k pi x / L).
struct DirichletSpectrum {
    int mode_count = 0;
    double domain_length = 1.0;
    std::vector<double> eigenvalues;  // eigenvalues[k-1] = lambda_k

    double eigenvalue(int k) const { return eigenvalues.at(static_cast<std::size_t>(k - 1)); }
};

DirichletSpectrum dirichlet_spectrum(int K, double length = 1.0);

// Uniform P1 finite elements on (0,1) with M cells and M-1 interior nodes.
struct FemSpace {
    int cell_count = 0;
    double mesh_width = 0.0;
    Eigen::MatrixXd mass;
    Eigen::MatrixXd stiffness;
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // columns mass-orthonormal

    int interior_dim() const { return cell_count - 1; }
};

FemSpace assemble_fem(int M);

// (6/h^2)(1 - cos(j pi h)) / (2 + cos(j pi h))
double fem_eigenvalue_closed_form(int M, int j);

// G(i, k-1) = integral of hat_i against sqrt(2) sin(k pi x).
Eigen::MatrixXd cross_gram(const FemSpace& fem, const DirichletSpectrum& spec);

// Coordinates of P_h phi_k in the discrete eigenvector basis.
Eigen::VectorXd l2_project_mode(const FemSpace& fem, const DirichletSpectrum& spec, int k);

// All projection coordinates at once: column k-1 holds l2_project_mode(.., k).
Eigen::MatrixXd projection_coordinates(const FemSpace& fem, const DirichletSpectrum& spec);

struct DotHVector {
    std::vector<double> coefficients;
    double order = 0.0;
};

double dot_norm(const DotHVector& v, const DirichletSpectrum& spec, double alpha);

}  // namespace levyspde
