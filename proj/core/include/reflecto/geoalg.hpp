#pragma once

#include "reflecto/linalg.hpp"

namespace reflecto::geoalg {

/// Magnitudes below this (after scaling by input norms) are treated as exact
/// zero when deciding degeneracy.
inline constexpr double kDegenerate = 1e-12;

/// Signed volume of the parallelotope spanned by d vectors in R^d: the
/// determinant of the d x d matrix whose rows are the given vectors.
/// Callers take the absolute value when they need the unsigned volume.
double signed_volume(const std::vector<Vec>& rows);

/// Vector w dual to the wedge of d-1 vectors in R^d, defined by
/// dot(u, w) = signed_volume(u, v_1, ..., v_{d-1}) for every u.
/// Equivalently the cofactor expansion along a basis row. Orthogonal to
/// every input vector; requires d >= 2.
Vec generalized_cross(const std::vector<Vec>& vs);

/// l2 norm of the generalized cross product: the (d-1)-volume of the base
/// parallelotope spanned by the inputs.
double wedge_l2_norm(const std::vector<Vec>& vs);

/// ||x||_2 / ||x||_1, in [1/sqrt(d), 1]. Larger means sparser.
double sparsity_factor(const Vec& x);

/// Euclidean distance from x to the hyperplane through `base` with normal
/// `normal`: |(x - base) . normal| / ||normal||_2.
double dist_to_hyperplane(const Vec& x, const Vec& base, const Vec& normal);

}  // namespace reflecto::geoalg
