#pragma once

#include "spw/model.hpp"

namespace spw {

// Trigonometric model of bandwidth `degree` N: dimension 2N+1, basis
// functions e^{i n theta} / sqrt(2 pi) ordered n = 0, -1, +1, -2, +2, ...
// so the sqrt eigenvalues |n| come out ascending.  The single generator is
// d/dtheta, diagonal with entries i*n.  Nodes are node_count equispaced
// angles with uniform weight 2 pi / node_count; node_count defaults to
// 2N+1 and anything smaller is rejected as undersampled (the quadrature
// must be exact on products of basis functions).
SpectralModel circle_model(int degree, int node_count = 0);

// Spherical-harmonic model of bandwidth N: dimension (N+1)^2, basis Y_n^m
// ordered by degree n = 0..N and then m = -n..n, sqrt eigenvalues
// sqrt(n(n+1)).  Three generators span the rotation algebra: D_3 = i Jz and
// D_1, D_2 built from the ladder operators J+- acting within each degree
// block, with -sum_j D_j^2 = n(n+1) I blockwise.  Nodes are a
// Gauss-Legendre grid in cos(theta) crossed with equispaced longitudes;
// defaults (N+1) x (2N+1) are the smallest exact choice and smaller grids
// are rejected as undersampled.
SpectralModel sphere_model(int degree, int n_lat = 0, int n_lon = 0);

// Model from an explicit dense symmetric Laplacian (row-major, n x n,
// n <= 2048).  The matrix is diagonalized with the project's Jacobi solver;
// eigenvalues in [-1e-10, 0) are clamped to zero, anything more negative is
// rejected.  Vertices double as the node set with unit weights, and the
// eigenvector matrix provides exact point evaluation.  No generators.
SpectralModel graph_model(const std::vector<std::vector<double>>& laplacian);

// Normalized associated Legendre function, orthonormal on [-1, 1] in x for
// fixed m, with the Condon-Shortley sign.  Exposed for tests.
double normalized_legendre(int n, int m, double x);

// Storage-order helpers shared by the samplers: the circle interleaves
// mode numbers 0, -1, +1, -2, +2, ...; the sphere runs degree blocks with
// order m = -n..n inside block n.
int circle_mode_number(int index);
std::pair<int, int> sphere_degree_order(int index);

}  // namespace spw
