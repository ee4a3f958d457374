#pragma once
#include "osilp/la.hpp"

// Non-negative Gaussian-RBF feature matrix over embedded constraint indices.
// The dual measure over the constraint set is approximated as u = phi * w
// with w >= 0; since every phi entry is strictly positive, w >= 0 is
// sufficient for u >= 0 componentwise.

namespace osilp {

struct BasisSpec {
    int m = 0;               // constraint count
    int q = 0;               // number of basis columns (weight dimension)
    double alpha = 0.6;      // coarse-layer share of q
    double rho_coarse = 0.6; // adjacent overlap, coarse layer
    double rho_fine = 0.3;   // adjacent overlap, fine layer
};

struct Basis {
    int m = 0, q = 0;
    Mat phi;          // m x q, strictly positive
    Vec centers;      // q, in [0,1]
    Vec bandwidths;   // q, positive
    Vec embed;        // m, u_i = (i - 0.5)/m for i = 1..m
    int k_coarse = 0; // leading k_coarse columns are the coarse layer
    int k_fine = 0;
    Vec col_norm2;    // q, Euclidean norms of phi columns
};

// Layout: K_c = ceil(alpha*q) coarse columns with centers (k-1)/(K_c-1) and
// bandwidth sigma(rho_coarse); K_f = q - K_c fine columns with centers
// frac(Delta/2 + (l-1)*Delta) and bandwidth sigma(rho_fine), where
// Delta = 1/(K_c-1) and sigma(rho) = Delta / (2*ln(1/rho)).
// Duplicate centers are kept; K_f = 0 is allowed. Columns are unnormalized.
Basis build_rbf_basis(const BasisSpec& spec);

// a^T * phi (length q). If a >= 0 then the result is >= 0.
Vec project_columns(const Basis& basis, const Vec& a);

// phi * w (length m); requires w >= 0 componentwise, output is >= 0.
Vec eval_dual(const Basis& basis, const Vec& w);

}  // namespace osilp
