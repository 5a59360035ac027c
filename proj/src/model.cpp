/*
 Copyright 2026 riskctl contributors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "riskctl/model.hpp"

#include "riskctl/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riskctl {

// ---------------------------------------------------------------------------
// SdeModel
// ---------------------------------------------------------------------------

void SdeModel::validate() const {
    if (state_dim <= 0 || control_dim <= 0 || noise_dim <= 0)
        throw ConfigError("SdeModel: state_dim, control_dim, noise_dim must be positive");
    if (uncontrolled_dim < 0 || uncontrolled_dim > state_dim)
        throw ConfigError("SdeModel: uncontrolled_dim must lie in [0, state_dim]");
    if (!drift || !control_matrix || !noise_matrix)
        throw ConfigError("SdeModel: drift, control_matrix and noise_matrix must be set");
}

Eigen::VectorXd SdeModel::eval_drift(const Eigen::VectorXd& x, double t) const {
    Eigen::VectorXd out(state_dim);
    drift(std::span<const double>(x.data(), x.size()), t, std::span<double>(out.data(), out.size()));
    return out;
}

Eigen::MatrixXd SdeModel::eval_control(const Eigen::VectorXd& x, double t) const {
    std::vector<double> buf(static_cast<std::size_t>(state_dim) * control_dim);
    control_matrix(std::span<const double>(x.data(), x.size()), t, buf);
    Eigen::MatrixXd out(state_dim, control_dim);
    for (int i = 0; i < state_dim; ++i)
        for (int j = 0; j < control_dim; ++j) out(i, j) = buf[static_cast<std::size_t>(i) * control_dim + j];
    return out;
}

Eigen::MatrixXd SdeModel::eval_noise(const Eigen::VectorXd& x, double t) const {
    std::vector<double> buf(static_cast<std::size_t>(state_dim) * noise_dim);
    noise_matrix(std::span<const double>(x.data(), x.size()), t, buf);
    Eigen::MatrixXd out(state_dim, noise_dim);
    for (int i = 0; i < state_dim; ++i)
        for (int j = 0; j < noise_dim; ++j) out(i, j) = buf[static_cast<std::size_t>(i) * noise_dim + j];
    return out;
}

Eigen::MatrixXd CostSpec::eval_weight(const Eigen::VectorXd& x, double t, int m) const {
    std::vector<double> buf(static_cast<std::size_t>(m) * m);
    control_weight(std::span<const double>(x.data(), x.size()), t, buf);
    Eigen::MatrixXd out(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) out(i, j) = buf[static_cast<std::size_t>(i) * m + j];
    return out;
}

// ---------------------------------------------------------------------------
// SafeSet
// ---------------------------------------------------------------------------

SafeSet SafeSet::annulus(Eigen::VectorXd outer_lo, Eigen::VectorXd outer_hi,
                         std::optional<Eigen::VectorXd> inner_lo,
                         std::optional<Eigen::VectorXd> inner_hi, double boundary_tol) {
    if (outer_lo.size() != outer_hi.size() || outer_lo.size() == 0)
        throw ConfigError("SafeSet: outer bounds must be nonempty and of equal dimension");
    for (int d = 0; d < outer_lo.size(); ++d)
        if (!(outer_lo[d] < outer_hi[d]))
            throw ConfigError("SafeSet: outer box must have positive extent in every dimension");
    if (inner_lo.has_value() != inner_hi.has_value())
        throw ConfigError("SafeSet: inner box needs both bounds");
    SafeSet s;
    s.kind_ = Kind::annulus;
    s.bound_lo_ = std::move(outer_lo);
    s.bound_hi_ = std::move(outer_hi);
    s.boundary_tol_ = boundary_tol;
    if (inner_lo) {
        if (inner_lo->size() != s.bound_lo_.size())
            throw ConfigError("SafeSet: inner box dimension mismatch");
        for (int d = 0; d < s.bound_lo_.size(); ++d) {
            if (!((*inner_lo)[d] < (*inner_hi)[d]))
                throw ConfigError("SafeSet: inner box must have positive extent");
            if (!((*inner_lo)[d] > s.bound_lo_[d] && (*inner_hi)[d] < s.bound_hi_[d]))
                throw ConfigError("SafeSet: inner box must lie strictly inside the outer box");
        }
        s.inner_lo_ = std::move(*inner_lo);
        s.inner_hi_ = std::move(*inner_hi);
    }
    return s;
}

SafeSet SafeSet::from_predicate(std::function<bool(std::span<const double>)> inside,
                                Eigen::VectorXd bound_lo, Eigen::VectorXd bound_hi,
                                double boundary_tol,
                                std::function<double(std::span<const double>)> distance) {
    if (!inside) throw ConfigError("SafeSet: predicate must be set");
    if (bound_lo.size() != bound_hi.size() || bound_lo.size() == 0)
        throw ConfigError("SafeSet: bounding box must be nonempty and of equal dimension");
    SafeSet s;
    s.kind_ = Kind::predicate;
    s.bound_lo_ = std::move(bound_lo);
    s.bound_hi_ = std::move(bound_hi);
    s.boundary_tol_ = boundary_tol;
    s.inside_ = std::move(inside);
    s.distance_ = std::move(distance);
    return s;
}

SafeSet SafeSet::with_boundary_tolerance(double tol) const {
    SafeSet s = *this;
    s.boundary_tol_ = tol;
    return s;
}

bool SafeSet::member(std::span<const double> x) const {
    if (kind_ == Kind::predicate) return inside_(x);
    for (int d = 0; d < bound_lo_.size(); ++d)
        if (!(x[static_cast<std::size_t>(d)] > bound_lo_[d] && x[static_cast<std::size_t>(d)] < bound_hi_[d]))
            return false;
    if (inner_lo_.size() > 0) {
        bool in_inner_closure = true;
        for (int d = 0; d < inner_lo_.size(); ++d)
            if (!(x[static_cast<std::size_t>(d)] >= inner_lo_[d] && x[static_cast<std::size_t>(d)] <= inner_hi_[d])) {
                in_inner_closure = false;
                break;
            }
        if (in_inner_closure) return false;
    }
    return true;
}

double SafeSet::annulus_boundary_distance(std::span<const double> x) const {
    // slab distance to the outer faces (negative outside)
    double d_outer = std::numeric_limits<double>::infinity();
    for (int d = 0; d < bound_lo_.size(); ++d) {
        const double xd = x[static_cast<std::size_t>(d)];
        d_outer = std::min(d_outer, std::min(xd - bound_lo_[d], bound_hi_[d] - xd));
    }
    if (inner_lo_.size() == 0) return d_outer;

    // distance to the inner box: positive Euclidean outside it, negative
    // slab depth inside it
    double sq = 0.0;
    double depth = std::numeric_limits<double>::infinity();
    bool inside_inner = true;
    for (int d = 0; d < inner_lo_.size(); ++d) {
        const double xd = x[static_cast<std::size_t>(d)];
        const double lo_gap = inner_lo_[d] - xd;
        const double hi_gap = xd - inner_hi_[d];
        const double outside = std::max({lo_gap, hi_gap, 0.0});
        sq += outside * outside;
        if (lo_gap >= 0.0 || hi_gap >= 0.0) inside_inner = false;
        depth = std::min(depth, std::min(-lo_gap, -hi_gap));
    }
    const double d_inner = inside_inner ? -depth : std::sqrt(sq);
    return std::min(d_outer, d_inner);
}

Region SafeSet::classify(std::span<const double> x) const {
    const double tol = boundary_tol_;
    if (kind_ == Kind::annulus) {
        const double d = annulus_boundary_distance(x);
        if (std::abs(d) <= tol) return Region::boundary;
        return d > 0.0 ? Region::interior : Region::exterior;
    }
    if (distance_) {
        const bool in = inside_(x);
        const double d = distance_(x);
        if (std::abs(d) <= tol) return Region::boundary;
        return in ? Region::interior : Region::exterior;
    }
    // probe-based classification for bare predicates
    const bool in = inside_(x);
    if (tol > 0.0) {
        std::vector<double> probe(x.begin(), x.end());
        for (std::size_t d = 0; d < probe.size(); ++d) {
            for (const double sgn : {-1.0, 1.0}) {
                probe[d] = x[d] + sgn * tol;
                if (inside_(probe) != in) return Region::boundary;
            }
            probe[d] = x[d];
        }
    }
    return in ? Region::interior : Region::exterior;
}

double SafeSet::distance_to_boundary(std::span<const double> x) const {
    if (kind_ == Kind::annulus) return std::max(0.0, annulus_boundary_distance(x));
    if (distance_) return std::max(0.0, distance_(x));
    throw ConfigError("SafeSet: predicate set without a distance function cannot "
                      "evaluate distance_to_boundary");
}

Eigen::VectorXd SafeSet::clamp_to_closure(std::span<const double> x,
                                          std::span<const double> x_prev) const {
    Eigen::VectorXd out = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
    if (kind_ == Kind::annulus) {
        for (int d = 0; d < bound_lo_.size(); ++d)
            out[d] = std::clamp(out[d], bound_lo_[d], bound_hi_[d]);
        if (inner_lo_.size() > 0) {
            bool strictly_inside_inner = true;
            for (int d = 0; d < inner_lo_.size(); ++d)
                if (!(out[d] > inner_lo_[d] && out[d] < inner_hi_[d])) {
                    strictly_inside_inner = false;
                    break;
                }
            if (strictly_inside_inner) {
                // push out through the nearest face
                int best_d = 0;
                double best_gap = std::numeric_limits<double>::infinity();
                double best_val = 0.0;
                for (int d = 0; d < inner_lo_.size(); ++d) {
                    const double lo_gap = out[d] - inner_lo_[d];
                    const double hi_gap = inner_hi_[d] - out[d];
                    if (lo_gap < best_gap) { best_gap = lo_gap; best_d = d; best_val = inner_lo_[d]; }
                    if (hi_gap < best_gap) { best_gap = hi_gap; best_d = d; best_val = inner_hi_[d]; }
                }
                out[best_d] = best_val;
            }
        }
        return out;
    }
    // predicate: bisect [x_prev, x] for the crossing point
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(x_prev.data(), static_cast<Eigen::Index>(x_prev.size()));
    Eigen::VectorXd b = out;
    if (!inside_(std::span<const double>(a.data(), a.size()))) return b; // no bracket
    Eigen::VectorXd mid(a.size());
    for (int it = 0; it < 60; ++it) {
        mid = 0.5 * (a + b);
        if (inside_(std::span<const double>(mid.data(), mid.size())))
            a = mid;
        else
            b = mid;
    }
    return 0.5 * (a + b);
}

// ---------------------------------------------------------------------------
// lambda
// ---------------------------------------------------------------------------

double verify_lambda(const SdeModel& model, const CostSpec& cost,
                     std::span<const std::pair<Eigen::VectorXd, double>> probe_points) {
    model.validate();
    if (probe_points.empty()) throw ConfigError("verify_lambda: probe_points must be nonempty");
    if (cost.eta < 0.0) throw ConfigError("CostSpec: eta must be nonnegative");

    constexpr double kRelTol = 1e-10;
    double lambda = 0.0;
    bool have_lambda = false;

    for (const auto& [x, t] : probe_points) {
        const Eigen::MatrixXd sigma = model.eval_noise(x, t);
        const Eigen::MatrixXd g = model.eval_control(x, t);
        const Eigen::MatrixXd R = cost.eval_weight(x, t, model.control_dim);

        Eigen::LLT<Eigen::MatrixXd> llt(R);
        if (llt.info() != Eigen::Success)
            throw ConfigError("CostSpec: control weight R is not positive definite at a probe point");

        const Eigen::MatrixXd S = sigma * sigma.transpose();
        const Eigen::MatrixXd M = g * llt.solve(g.transpose());

        const double mm = M.squaredNorm();
        const double ss = S.squaredNorm();
        if (mm == 0.0 && ss == 0.0) continue; // 0 = lambda * 0: uninformative
        if (mm == 0.0)
            throw NoCompatibleLambda("verify_lambda: sigma sigma^T nonzero where g R^-1 g^T vanishes");

        const double lam = (S.array() * M.array()).sum() / mm;
        const double resid = (S - lam * M).norm();
        const double scale = std::max(S.norm(), std::abs(lam) * M.norm());
        if (resid > kRelTol * std::max(scale, 1e-300))
            throw NoCompatibleLambda("verify_lambda: sigma sigma^T is not a scalar multiple of "
                                     "g R^-1 g^T at a probe point");
        if (lam <= 0.0)
            throw NoCompatibleLambda("verify_lambda: the compatibility constant must be positive "
                                     "(is the noise matrix zero?)");
        if (have_lambda) {
            if (std::abs(lam - lambda) > kRelTol * std::max(lambda, lam))
                throw NoCompatibleLambda("verify_lambda: the compatibility constant differs "
                                         "across probe points");
        } else {
            lambda = lam;
            have_lambda = true;
        }
    }
    if (!have_lambda)
        throw NoCompatibleLambda("verify_lambda: all probe points were degenerate (sigma = 0, g = 0)");
    return lambda;
}

std::vector<std::pair<Eigen::VectorXd, double>>
lambda_probe_lattice(const SafeSet& set, double t0, double T, int points_per_dim,
                     int time_samples) {
    const int n = set.dim();
    std::vector<std::pair<Eigen::VectorXd, double>> probes;
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    const int ppd = std::max(2, points_per_dim);
    const int ts = std::max(1, time_samples);
    while (true) {
        Eigen::VectorXd x(n);
        for (int d = 0; d < n; ++d) {
            const double frac = (idx[static_cast<std::size_t>(d)] + 0.5) / ppd;
            x[d] = set.bound_lo()[d] + frac * (set.bound_hi()[d] - set.bound_lo()[d]);
        }
        for (int s = 0; s < ts; ++s) {
            const double t = (ts == 1) ? t0 : t0 + (T - t0) * s / (ts - 1);
            probes.emplace_back(x, t);
        }
        int d = 0;
        for (; d < n; ++d) {
            if (++idx[static_cast<std::size_t>(d)] < ppd) break;
            idx[static_cast<std::size_t>(d)] = 0;
        }
        if (d == n) break;
    }
    return probes;
}

// ---------------------------------------------------------------------------
// boundary functions
// ---------------------------------------------------------------------------

namespace {
double smoothstep5(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}
} // namespace

double boundary_bump(const SafeSet& set, std::span<const double> x, double delta) {
    const double d = set.distance_to_boundary(x);
    if (delta <= 0.0) return d > 0.0 ? 1.0 : 0.0;
    return smoothstep5(d / delta);
}

double phi(std::span<const double> x, const CostSpec& cost, const SafeSet& set, bool smooth) {
    const Region r = set.classify(x);
    if (r == Region::exterior)
        throw OutsideDomain("phi: point is outside the closed safe set");
    if (!smooth) return r == Region::boundary ? cost.eta : cost.eval_terminal(x);
    const double b = boundary_bump(set, x, cost.bump_delta);
    if (b >= 1.0) return cost.eval_terminal(x); // psi exactly on the delta-inset
    return cost.eval_terminal(x) * b + cost.eta * (1.0 - b);
}

double phi_tilde(std::span<const double> x, const SafeSet& set, bool smooth, double bump_delta) {
    const Region r = set.classify(x);
    if (r == Region::exterior)
        throw OutsideDomain("phi_tilde: point is outside the closed safe set");
    if (!smooth) return r == Region::boundary ? 1.0 : 0.0;
    return 1.0 - boundary_bump(set, x, bump_delta);
}

} // namespace riskctl
