#include "uplab/complex_group.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace uplab::group {

using numerics::Grid;
using numerics::SampledFunction;
using numerics::SpectralFunction;

namespace {

constexpr double kWallArgument = 1e-3;  // below this the factorized limit branch is used
constexpr double kLargeArgument = 100.0;

double sinc(double x) {
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

// 2H / sinh 2H, stable for all H
double shc(double H) {
    const double x = 2.0 * std::abs(H);
    if (x < 1e-4) return 1.0 - x * x / 6.0;
    if (x > 700.0) return std::exp(std::log(2.0 * x) - x);
    return x / std::sinh(x);
}

double log_sinh(double x) { return x - std::log(2.0) + std::log1p(-std::exp(-2.0 * x)); }

void require_rank_one(const GroupModel& G) {
    if (G.rank() != 1) {
        throw Error(ErrorKind::InvalidArgument,
                    "transforms on sampled functions are implemented for rank one; model '" + G.name() + "' has rank " +
                        std::to_string(G.rank()));
    }
}

void require_dim(const GroupModel& G, std::span<const double> v) {
    if (v.size() != G.rank()) throw Error(ErrorKind::InvalidArgument, "vector length differs from the rank");
}

double det(std::vector<double> m, std::size_t n) {
    double d = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(m[r * n + c]) > std::abs(m[p * n + c])) p = r;
        }
        if (m[p * n + c] == 0.0) return 0.0;
        if (p != c) {
            for (std::size_t k = 0; k < n; ++k) std::swap(m[p * n + k], m[c * n + k]);
            d = -d;
        }
        d *= m[c * n + c];
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = m[r * n + c] / m[c * n + c];
            for (std::size_t k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
        }
    }
    return d;
}

bool same(std::span<const double> a, std::span<const double> b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > 1e-12) return false;
    }
    return true;
}

}  // namespace

// GroupModel -------------------------------------------------------------------

GroupModel GroupModel::sl2c() { return sl2c_power(1); }

GroupModel GroupModel::sl2c_power(std::size_t factors) {
    if (factors == 0 || factors > 8) throw Error(ErrorKind::InvalidArgument, "supported products have 1..8 factors");
    GroupModel G;
    G.rank_ = factors;
    G.name_ = "sl2c";
    for (std::size_t j = 1; j < factors; ++j) G.name_ += "×sl2c";
    for (std::size_t j = 0; j < factors; ++j) {
        std::vector<double> alpha(factors, 0.0);
        alpha[j] = 2.0;
        G.roots_.push_back(alpha);
        G.mult_.push_back(2);
    }
    G.rho_.assign(factors, 0.0);
    for (std::size_t r = 0; r < G.roots_.size(); ++r) {
        for (std::size_t j = 0; j < factors; ++j) G.rho_[j] += 0.5 * G.mult_[r] * G.roots_[r][j];
    }
    // W = {diag(+-1, ..., +-1)}
    for (std::size_t mask = 0; mask < (std::size_t{1} << factors); ++mask) {
        WeylElement s;
        s.matrix.assign(factors * factors, 0.0);
        s.det = 1;
        for (std::size_t j = 0; j < factors; ++j) {
            const bool flip = (mask >> j) & 1U;
            s.matrix[j * factors + j] = flip ? -1.0 : 1.0;
            if (flip) s.det = -s.det;
        }
        G.weyl_.push_back(std::move(s));
    }
    return G;
}

GroupModel GroupModel::preset(const std::string& name) {
    if (name == "sl2c") return sl2c();
    if (name == "sl2c×sl2c" || name == "sl2cxsl2c" || name == "sl2c*sl2c") return sl2c_power(2);
    throw Error(ErrorKind::InvalidArgument, "unknown group preset '" + name + "'");
}

double GroupModel::b_norm(std::span<const double> H) const {
    require_dim(*this, H);
    double s = 0.0;
    for (double x : H) s += x * x;
    return b_scale_ * std::sqrt(s);
}

double GroupModel::dual_b_norm(std::span<const double> lambda) const {
    require_dim(*this, lambda);
    double s = 0.0;
    for (double x : lambda) s += x * x;
    return std::sqrt(s) / b_scale_;
}

double GroupModel::rho_b_norm_sq() const {
    const double n = dual_b_norm(rho_);
    return n * n;
}

std::vector<double> GroupModel::act(const WeylElement& s, std::span<const double> v) const {
    require_dim(*this, v);
    std::vector<double> out(rank_, 0.0);
    for (std::size_t i = 0; i < rank_; ++i) {
        for (std::size_t j = 0; j < rank_; ++j) out[i] += s.matrix[i * rank_ + j] * v[j];
    }
    return out;
}

void GroupModel::validate() const {
    const std::size_t n = rank_;
    auto find = [&](const std::vector<double>& m) {
        return std::any_of(weyl_.begin(), weyl_.end(), [&](const WeylElement& w) { return same(w.matrix, m); });
    };
    for (const auto& s : weyl_) {
        if (std::abs(det(s.matrix, n) - s.det) > 1e-12) throw Error(ErrorKind::InvalidData, "Weyl determinant sign mismatch");
        std::vector<double> inv(n * n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) inv[i * n + j] = s.matrix[j * n + i];
        }
        if (!find(inv)) throw Error(ErrorKind::InvalidData, "Weyl group not closed under inverse");
        for (const auto& t : weyl_) {
            std::vector<double> prod(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    for (std::size_t k = 0; k < n; ++k) prod[i * n + j] += s.matrix[i * n + k] * t.matrix[k * n + j];
                }
            }
            if (!find(prod)) throw Error(ErrorKind::InvalidData, "Weyl group not closed under composition");
        }
        for (const auto& alpha : roots_) {
            auto image = act(s, alpha);
            bool ok = false;
            for (const auto& beta : roots_) {
                std::vector<double> neg(beta);
                for (auto& x : neg) x = -x;
                ok = ok || same(image, beta) || same(image, neg);
            }
            if (!ok) throw Error(ErrorKind::InvalidData, "Weyl element does not preserve the root set");
        }
    }
    std::vector<double> half_sum(n, 0.0);
    for (std::size_t r = 0; r < roots_.size(); ++r) {
        for (std::size_t j = 0; j < n; ++j) half_sum[j] += 0.5 * mult_[r] * roots_[r][j];
    }
    if (!same(half_sum, rho_)) throw Error(ErrorKind::InvalidData, "rho is not the half-sum of positive roots");
}

// Pointwise ------------------------------------------------------------------------

double phi_weight(const GroupModel& G, std::span<const double> H) {
    require_dim(G, H);
    double sum = 0.0;
    for (const auto& s : G.weyl()) {
        const auto srho = G.act(s, G.rho());
        double e = 0.0;
        for (std::size_t j = 0; j < G.rank(); ++j) e += srho[j] * H[j];
        sum += s.det * std::exp(e);
    }
    return sum;
}

double phi_weight(const GroupModel& G, double H) { return phi_weight(G, std::span<const double>(&H, 1)); }

double log_abs_phi_weight(const GroupModel& G, double H) {
    require_rank_one(G);
    if (H == 0.0) return -std::numeric_limits<double>::infinity();
    // |e^{2H} - e^{-2H}| = 2 sinh 2|H|
    return std::log(2.0) + log_sinh(2.0 * std::abs(H));
}

cplx c_function(const GroupModel& G, std::span<const double> lambda) {
    require_dim(G, lambda);
    cplx c{1.0, 0.0};
    for (double l : lambda) {
        if (l == 0.0) throw Error(ErrorKind::WallSingularity, "c(lambda) is singular on the Weyl walls");
        c *= cplx(0.0, 2.0 / l);
    }
    return c;
}

cplx c_function(const GroupModel& G, double lambda) { return c_function(G, std::span<const double>(&lambda, 1)); }

cplx c_function_inverse(const GroupModel& G, std::span<const double> lambda) {
    require_dim(G, lambda);
    cplx c{1.0, 0.0};
    for (double l : lambda) c *= cplx(0.0, -0.5 * l);
    return c;
}

cplx c_function_inverse(const GroupModel& G, double lambda) {
    return c_function_inverse(G, std::span<const double>(&lambda, 1));
}

cplx spherical_function(const GroupModel& G, std::span<const double> lambda, std::span<const double> H) {
    require_dim(G, lambda);
    require_dim(G, H);
    bool near_wall = false;
    for (std::size_t j = 0; j < G.rank(); ++j) {
        const double h = std::abs(H[j]);
        near_wall = near_wall || h < kWallArgument || h > kLargeArgument || std::abs(lambda[j] * H[j]) < kWallArgument;
    }
    if (near_wall) {
        // factorized limit: prod_j sinc(lambda_j H_j) * 2H_j / sinh 2H_j
        double v = 1.0;
        for (std::size_t j = 0; j < G.rank(); ++j) v *= sinc(lambda[j] * H[j]) * shc(H[j]);
        return v;
    }
    cplx sum{};
    for (const auto& s : G.weyl()) {
        const auto sl = G.act(s, lambda);
        double phase = 0.0;
        for (std::size_t j = 0; j < G.rank(); ++j) phase += sl[j] * H[j];
        sum += static_cast<double>(s.det) * std::polar(1.0, -phase);
    }
    return c_function(G, lambda) * sum / phi_weight(G, H);
}

cplx spherical_function(const GroupModel& G, double lambda, double H) {
    return spherical_function(G, std::span<const double>(&lambda, 1), std::span<const double>(&H, 1));
}

double phi_zero(const GroupModel& G, std::span<const double> H) {
    require_dim(G, H);
    double v = 1.0;
    for (double h : H) v *= shc(h);
    return v;
}

double phi_zero(const GroupModel& G, double H) { return phi_zero(G, std::span<const double>(&H, 1)); }

double log_phi_zero(const GroupModel& G, double H) {
    require_rank_one(G);
    const double x = 2.0 * std::abs(H);
    if (x < 1e-2) return std::log(shc(H));
    return std::log(x) - log_sinh(x);
}

// SphericalTransform ------------------------------------------------------------------

SphericalTransform::SphericalTransform(std::vector<double> lambda, std::vector<cplx> values)
    : lambda_(std::move(lambda)), values_(std::move(values)) {
    if (lambda_.size() != values_.size()) throw Error(ErrorKind::InvalidArgument, "lambda and value counts differ");
    for (std::size_t j = 1; j < lambda_.size(); ++j) {
        if (!(lambda_[j] > lambda_[j - 1])) throw Error(ErrorKind::InvalidArgument, "lambda values must increase");
    }
    for (const auto& z : values_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorKind::InvalidData, "non-finite spherical transform value");
        }
    }
}

double SphericalTransform::max_abs() const noexcept {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z));
    return m;
}

double SphericalTransform::weyl_asymmetry() const {
    const double scale = max_abs();
    if (scale == 0.0) return 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < lambda_.size(); ++j) {
        const double target = -lambda_[j];
        const auto it = std::lower_bound(lambda_.begin(), lambda_.end(), target - 1e-9 * (1.0 + std::abs(target)));
        if (it == lambda_.end() || std::abs(*it - target) > 1e-9 * (1.0 + std::abs(target))) continue;
        const auto k = static_cast<std::size_t>(it - lambda_.begin());
        worst = std::max(worst, std::abs(values_[j] - values_[k]));
    }
    return worst / scale;
}

// Transforms --------------------------------------------------------------------------

namespace {

void check_boundary_decay(const GroupModel& G, const SampledFunction& f) {
    const Grid& grid = f.grid();
    double peak = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        peak = std::max(peak, std::abs(f[k]) * std::pow(phi_weight(G, grid.node(k)), 2));
    }
    if (!std::isfinite(peak)) throw Error(ErrorKind::BoundaryLeak, "f phi^2 overflows on the grid");
    if (peak == 0.0) return;
    const std::size_t last = grid.size() - 1;
    const double edge = std::max(std::abs(f[0]) * std::pow(phi_weight(G, grid.node(0)), 2),
                                 std::abs(f[last]) * std::pow(phi_weight(G, grid.node(last)), 2));
    if (edge > kBoundaryLeakTolerance * peak) {
        std::ostringstream msg;
        msg << "|f phi^2| at the grid boundary is " << edge / peak << " of its maximum";
        throw Error(ErrorKind::BoundaryLeak, msg.str());
    }
}

}  // namespace

SampledFunction weyl_symmetrize(const SampledFunction& f) {
    const Grid& grid = f.grid();
    std::vector<cplx> v(f.values().begin(), f.values().end());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (const auto m = grid.mirror_index(k)) v[k] = 0.5 * (f[k] + f[*m]);
    }
    return SampledFunction(grid, std::move(v), f.label());
}

SphericalTransform spherical_transform_direct(const GroupModel& G, const SampledFunction& f,
                                              std::span<const double> lambda) {
    require_rank_one(G);
    check_boundary_decay(G, f);
    const Grid& grid = f.grid();
    const double h = grid.step();
    std::vector<double> weight(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) weight[k] = std::pow(phi_weight(G, grid.node(k)), 2);
    std::vector<cplx> out(lambda.size());
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        cplx acc{};
        for (std::size_t k = 0; k < grid.size(); ++k) {
            if (f[k] == cplx{} || weight[k] == 0.0) continue;
            acc += f[k] * spherical_function(G, lambda[j], grid.node(k)) * weight[k];
        }
        out[j] = h * acc;
    }
    return SphericalTransform(std::vector<double>(lambda.begin(), lambda.end()), std::move(out));
}

SphericalTransform spherical_transform_direct(const GroupModel& G, const SampledFunction& f) {
    const auto lambda = f.grid().dual_frequencies();
    return spherical_transform_direct(G, f, lambda);
}

ReducedTransform spherical_transform_reduced_detail(const GroupModel& G, const SampledFunction& f,
                                                    std::span<const double> lambda) {
    require_rank_one(G);
    check_boundary_decay(G, f);
    const auto fs = weyl_symmetrize(f);
    const Grid& grid = f.grid();
    std::vector<cplx> gv(grid.size());
    cplx first_moment{};
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double H = grid.node(k);
        gv[k] = fs[k] * phi_weight(G, H);
        first_moment += H * gv[k];
    }
    first_moment *= grid.step();
    SampledFunction g(grid, std::move(gv), "g=f*phi");
    auto g_hat = numerics::fourier_transform(g, lambda);
    const double order = static_cast<double>(G.weyl_order());
    std::vector<cplx> values(lambda.size());
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        values[j] = lambda[j] == 0.0 ? 2.0 * order * first_moment : c_function(G, lambda[j]) * order * g_hat.values()[j];
    }
    SphericalTransform F(std::vector<double>(lambda.begin(), lambda.end()), std::move(values));
    return ReducedTransform{std::move(g), std::move(g_hat), std::move(F)};
}

SphericalTransform spherical_transform_reduced(const GroupModel& G, const SampledFunction& f,
                                               std::span<const double> lambda) {
    return spherical_transform_reduced_detail(G, f, lambda).transform;
}

SphericalTransform spherical_transform_reduced(const GroupModel& G, const SampledFunction& f) {
    const auto lambda = f.grid().dual_frequencies();
    return spherical_transform_reduced(G, f, lambda);
}

SampledFunction inverse_spherical(const GroupModel& G, const SphericalTransform& F, const Grid& grid) {
    require_rank_one(G);
    const double asym = F.weyl_asymmetry();
    if (asym > kWeylTolerance) {
        std::ostringstream msg;
        msg << "transform is not W-invariant (relative asymmetry " << asym << ")";
        throw Error(ErrorKind::WallSingularity, msg.str());
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (phi_weight(G, grid.node(k)) == 0.0) {
            throw Error(ErrorKind::WallSingularity, "grid contains a zero of phi; use a half-step grid");
        }
    }
    const double order = static_cast<double>(G.weyl_order());
    std::vector<cplx> gh(F.size());
    for (std::size_t j = 0; j < F.size(); ++j) gh[j] = F.values()[j] * c_function_inverse(G, F.lambda()[j]) / order;
    const auto g = numerics::inverse_fourier_transform(SpectralFunction(F.lambda(), std::move(gh)), grid);
    std::vector<cplx> fv(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) fv[k] = g[k] / phi_weight(G, grid.node(k));
    return SampledFunction(grid, std::move(fv), "inverse_spherical");
}

}  // namespace uplab::group
