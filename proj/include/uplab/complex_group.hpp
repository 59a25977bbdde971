#pragma once

#include <span>
#include <string>
#include <vector>

#include "uplab/numerics.hpp"

namespace uplab::group {

using numerics::cplx;

struct WeylElement {
    std::vector<double> matrix;  // rank x rank, row-major, orthogonal
    int det;                     // +1 or -1
};

/**
 * Root and Weyl data of a complex semisimple group that is a direct product
 * of SL(2,C) factors. Coordinates on a: H = (H_1, ..., H_l), each factor
 * embedding diag(H_j, -H_j). Every positive root has multiplicity 2.
 *
 * Functionals lambda in a* are written in the same coordinates,
 * lambda(H) = sum lambda_j H_j. The Killing form gives ||H||_B = 4 |H|
 * per factor, hence ||lambda||_B = |lambda| / 4 and ||rho||_B^2 = l / 4.
 */
class GroupModel {
public:
    static GroupModel sl2c();
    /// Direct product of `factors` copies of SL(2,C).
    static GroupModel sl2c_power(std::size_t factors);
    /// "sl2c" or "sl2c×sl2c" (also accepted: "sl2cxsl2c").
    static GroupModel preset(const std::string& name);

    const std::string& name() const noexcept { return name_; }
    std::size_t rank() const noexcept { return rank_; }
    const std::vector<std::vector<double>>& positive_roots() const noexcept { return roots_; }
    const std::vector<int>& multiplicities() const noexcept { return mult_; }
    const std::vector<double>& rho() const noexcept { return rho_; }
    const std::vector<WeylElement>& weyl() const noexcept { return weyl_; }
    std::size_t weyl_order() const noexcept { return weyl_.size(); }
    /// ||H||_B / |H| (4 for SL(2,C)).
    double b_norm_scale() const noexcept { return b_scale_; }

    double b_norm(std::span<const double> H) const;
    /// Dual norm of a functional: ||lambda||_B = |lambda| / b_norm_scale.
    double dual_b_norm(std::span<const double> lambda) const;
    double rho_b_norm_sq() const;

    std::vector<double> act(const WeylElement& s, std::span<const double> v) const;

    /// Closure under composition, root-set preservation and the half-sum
    /// identity for rho. Throws InvalidData on failure.
    void validate() const;

private:
    GroupModel() = default;

    std::string name_;
    std::size_t rank_ = 0;
    std::vector<std::vector<double>> roots_;
    std::vector<int> mult_;
    std::vector<double> rho_;
    std::vector<WeylElement> weyl_;
    double b_scale_ = 4.0;
};

// Pointwise objects -----------------------------------------------------------

/// phi(H) = sum_{s in W} det(s) exp((s rho)(H)); 2 sinh 2H for SL(2,C).
double phi_weight(const GroupModel& G, std::span<const double> H);
double phi_weight(const GroupModel& G, double H);  // rank one

/// log |phi(H)| without overflow (rank one, -inf at H = 0).
double log_abs_phi_weight(const GroupModel& G, double H);

/// Harish-Chandra c-function, normalizing phi_lambda(0) = 1; 2i/lambda per
/// SL(2,C) factor. Throws WallSingularity when some lambda_j = 0.
cplx c_function(const GroupModel& G, std::span<const double> lambda);
cplx c_function(const GroupModel& G, double lambda);

/// 1 / c(lambda) (entire: -i lambda/2 per factor).
cplx c_function_inverse(const GroupModel& G, std::span<const double> lambda);
cplx c_function_inverse(const GroupModel& G, double lambda);

/// phi_lambda(H) = c(lambda) sum_s det(s) exp(-i (s lambda)(H)) / phi(H).
/// Near the walls (lambda_j or H_j close to 0) the removable singularity is
/// evaluated from the factorized limit 2 sin(lambda H)/(lambda sinh 2H).
cplx spherical_function(const GroupModel& G, std::span<const double> lambda, std::span<const double> H);
cplx spherical_function(const GroupModel& G, double lambda, double H);

/// phi_0(H) = prod 2H_j / sinh 2H_j.
double phi_zero(const GroupModel& G, std::span<const double> H);
double phi_zero(const GroupModel& G, double H);
double log_phi_zero(const GroupModel& G, double H);

// Spherical transform (rank one) ----------------------------------------------

/// Values of f~ on a set of frequencies. W-invariant: f~(-lambda) = f~(lambda).
class SphericalTransform {
public:
    SphericalTransform(std::vector<double> lambda, std::vector<cplx> values);

    const std::vector<double>& lambda() const noexcept { return lambda_; }
    const std::vector<cplx>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return lambda_.size(); }
    double max_abs() const noexcept;

    /// max |F(lambda) - F(-lambda)| over frequency pairs present, relative to max |F|.
    double weyl_asymmetry() const;

private:
    std::vector<double> lambda_;
    std::vector<cplx> values_;
};

inline constexpr double kBoundaryLeakTolerance = 1e-10;
inline constexpr double kWeylTolerance = 1e-6;

/// f~(lambda) = int_a f(H) phi_lambda(H) phi(H)^2 dH by trapezoid quadrature
/// over the whole grid. Throws BoundaryLeak if |f phi^2| has not decayed to
/// 1e-10 of its maximum at the grid ends.
SphericalTransform spherical_transform_direct(const GroupModel& G, const numerics::SampledFunction& f,
                                              std::span<const double> lambda);
SphericalTransform spherical_transform_direct(const GroupModel& G, const numerics::SampledFunction& f);

struct ReducedTransform {
    numerics::SampledFunction g;       // f phi (W-odd)
    numerics::SpectralFunction g_hat;  // Euclidean transform of g
    SphericalTransform transform;      // c(lambda) |W| g^(lambda)
};

/// f~(lambda) = c(lambda) |W| g^(lambda) with g = f phi; f is symmetrized
/// over W first. At lambda = 0 the limit 2 |W| int H g(H) dH is used.
ReducedTransform spherical_transform_reduced_detail(const GroupModel& G, const numerics::SampledFunction& f,
                                                    std::span<const double> lambda);
SphericalTransform spherical_transform_reduced(const GroupModel& G, const numerics::SampledFunction& f,
                                               std::span<const double> lambda);
SphericalTransform spherical_transform_reduced(const GroupModel& G, const numerics::SampledFunction& f);

/// Inverts the reduction: g^ = F / (c |W|), g by inverse Fourier transform,
/// f = g / phi. The grid must avoid phi = 0 (a symmetric half-step grid);
/// F must be W-invariant to 1e-6 (WallSingularity otherwise).
numerics::SampledFunction inverse_spherical(const GroupModel& G, const SphericalTransform& F,
                                            const numerics::Grid& grid);

/// W-symmetrization (f(H) + f(-H)) / 2 on grids that contain the mirror nodes.
numerics::SampledFunction weyl_symmetrize(const numerics::SampledFunction& f);

}  // namespace uplab::group
