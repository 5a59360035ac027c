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

#ifndef RISKCTL_MODEL_HPP
#define RISKCTL_MODEL_HPP

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace riskctl {

/// Evaluable problem data. Matrix fields write row-major into `out`.
using ScalarField = std::function<double(std::span<const double> x, double t)>;
using VectorField = std::function<void(std::span<const double> x, double t, std::span<double> out)>;
using MatrixField = std::function<void(std::span<const double> x, double t, std::span<double> out)>;

/// Controlled diffusion dx = f dt + g u dt + sigma dw with the state split
/// into a non-directly-controlled head block (first `uncontrolled_dim` rows
/// of g and sigma are identically zero) and a directly controlled tail.
struct SdeModel {
    int state_dim = 0;        // n
    int control_dim = 0;      // m
    int noise_dim = 0;        // k
    int uncontrolled_dim = 0; // l in [0, n]

    VectorField drift;         // f(x,t): n
    MatrixField control_matrix; // g(x,t): n x m
    MatrixField noise_matrix;   // sigma(x,t): n x k

    /// Throws ConfigError on inconsistent dimensions or missing fields.
    void validate() const;

    // allocating conveniences for cold paths
    Eigen::VectorXd eval_drift(const Eigen::VectorXd& x, double t) const;
    Eigen::MatrixXd eval_control(const Eigen::VectorXd& x, double t) const;
    Eigen::MatrixXd eval_noise(const Eigen::VectorXd& x, double t) const;
};

enum class Region { interior, boundary, exterior };

/// Bounded open safe region. The built-in geometry is an axis-aligned
/// rectangular annulus (outer box minus the closure of an optional inner
/// box); arbitrary geometries can be supplied as a membership predicate.
class SafeSet {
public:
    /// Outer box with an optional strictly-inside obstacle box.
    static SafeSet annulus(Eigen::VectorXd outer_lo, Eigen::VectorXd outer_hi,
                           std::optional<Eigen::VectorXd> inner_lo = std::nullopt,
                           std::optional<Eigen::VectorXd> inner_hi = std::nullopt,
                           double boundary_tol = 0.0);

    /// Membership predicate with a bounding box (used for grid building).
    /// `distance` (distance to the boundary, >= 0 inside) is optional; when
    /// absent, boundary classification probes the predicate along each axis.
    static SafeSet from_predicate(std::function<bool(std::span<const double>)> inside,
                                  Eigen::VectorXd bound_lo, Eigen::VectorXd bound_hi,
                                  double boundary_tol,
                                  std::function<double(std::span<const double>)> distance = {});

    int dim() const { return static_cast<int>(bound_lo_.size()); }
    double boundary_tolerance() const { return boundary_tol_; }
    SafeSet with_boundary_tolerance(double tol) const;

    const Eigen::VectorXd& bound_lo() const { return bound_lo_; }
    const Eigen::VectorXd& bound_hi() const { return bound_hi_; }
    bool is_annulus() const { return kind_ == Kind::annulus; }
    bool has_obstacle() const { return inner_lo_.size() > 0; }
    const Eigen::VectorXd& inner_lo() const { return inner_lo_; }
    const Eigen::VectorXd& inner_hi() const { return inner_hi_; }

    /// Partition of the state space: within boundary_tolerance of the
    /// boundary -> boundary; inside the open region beyond it -> interior;
    /// everything else (including the obstacle) -> exterior.
    Region classify(std::span<const double> x) const;

    /// Distance from an interior point to the boundary (closed form for the
    /// annulus). Returns 0 on the boundary and for exterior points.
    double distance_to_boundary(std::span<const double> x) const;

    /// Point of the closed safe set nearest to x (annulus: closed-form
    /// projection; predicate: bisection along [x_prev, x], where x_prev must
    /// be inside). Used when a simulated step lands beyond the boundary.
    Eigen::VectorXd clamp_to_closure(std::span<const double> x,
                                     std::span<const double> x_prev) const;

private:
    enum class Kind { annulus, predicate };
    Kind kind_ = Kind::annulus;
    Eigen::VectorXd bound_lo_, bound_hi_; // outer box / bounding box
    Eigen::VectorXd inner_lo_, inner_hi_; // empty when no obstacle
    double boundary_tol_ = 0.0;
    std::function<bool(std::span<const double>)> inside_;
    std::function<double(std::span<const double>)> distance_;

    bool member(std::span<const double> x) const; // open-region membership, tol-free
    double annulus_boundary_distance(std::span<const double> x) const;
};

/// Cost data of the risk-minimizing problem. `lambda` is the Cole-Hopf
/// compatibility constant; compute it once with verify_lambda (it is a
/// global structural property, not a per-query one).
struct CostSpec {
    ScalarField terminal;       // psi(x)
    ScalarField running;        // V(x,t)
    MatrixField control_weight; // R(x,t): m x m, positive definite
    double eta = 0.0;           // boundary (exit) penalty, >= 0
    double lambda = 0.0;        // sigma sigma^T = lambda g R^-1 g^T
    double bump_delta = 0.0;    // boundary smoothing length

    double eval_terminal(std::span<const double> x) const { return terminal(x, 0.0); }
    double eval_running(std::span<const double> x, double t) const { return running(x, t); }
    Eigen::MatrixXd eval_weight(const Eigen::VectorXd& x, double t, int m) const;
};

/// Finds the positive constant lambda with sigma sigma^T = lambda g R^-1 g^T
/// at every probe point (relative tolerance 1e-10), or throws
/// NoCompatibleLambda when no single constant works — the problem is then
/// outside the linearizable class.
double verify_lambda(const SdeModel& model, const CostSpec& cost,
                     std::span<const std::pair<Eigen::VectorXd, double>> probe_points);

/// Coarse probe lattice over the safe set's bounding box and [t0, T]
/// (per-dim points^dim space points x time samples).
std::vector<std::pair<Eigen::VectorXd, double>>
lambda_probe_lattice(const SafeSet& set, double t0, double T, int points_per_dim = 4,
                     int time_samples = 3);

/// Quintic smoothstep bump of the distance to the boundary: 0 on the
/// boundary, 1 at distance >= delta. delta == 0 degenerates to the sharp
/// indicator (1 inside, 0 on the boundary).
double boundary_bump(const SafeSet& set, std::span<const double> x, double delta);

/// Boundary-condition function: psi(x) strictly inside, eta on the boundary;
/// with smooth=true the two branches are blended by the bump over
/// cost.bump_delta. Throws OutsideDomain for exterior x.
double phi(std::span<const double> x, const CostSpec& cost, const SafeSet& set, bool smooth);

/// phi specialized to the risk-estimation data (psi = 0, eta = 1).
double phi_tilde(std::span<const double> x, const SafeSet& set, bool smooth,
                 double bump_delta = 0.0);

} // namespace riskctl

#endif // RISKCTL_MODEL_HPP
