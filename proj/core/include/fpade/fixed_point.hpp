#pragma once

#include <vector>

namespace fpade {

/// Controls for the node iteration shared by the linear and non-linear solvers.
struct FixedPointOptions {
    /// Relaxation in (0, 1]: X <- X + damping * (Y - X).
    double damping = 1.0;
    int max_iter = 200;
    /// Stop once the largest node displacement drops below tol.
    double tol = 1e-10;
    /// Gauss order on Delta_0 for the node densities; 0 derives it from the geometry.
    int base_order = 0;
    /// Gauss order on each Delta_j; 0 derives it from the geometry.
    int branch_order = 0;
};

struct IterationRecord {
    int iteration = 0;
    /// Largest |Y - X| over all branches and nodes.
    double displacement = 0.0;
    /// Damping in force when the step was taken; halves after three
    /// consecutive increases of the displacement.
    double damping = 1.0;
};

} // namespace fpade
