#pragma once

#include <vector>

#include "wpme/domain.hpp"
#include "wpme/weights.hpp"

namespace wpme {

// Finite-volume mesh: cell centers, faces, nu-cell masses and mu-face
// conductances. Boundary coupling strength is the inverse resistance of the
// half cell, 1 / integral(1/rho_mu) from the wall to the first center; for
// weights degenerating fast enough at the wall the resistance diverges and
// the boundary decouples, which is exactly the regime where the zero trace
// is invisible to the weighted space.
struct Grid {
    std::vector<double> centers;
    std::vector<double> faces;   // size centers.size()+1
    std::vector<double> mass;    // nu measure of each cell
    std::vector<double> cond;    // interior face conductances, size M-1
    double cond_left = 0.0;      // wall coupling (used by Dirichlet-type BCs)
    double cond_right = 0.0;
    double gamma = 1.0;
    int merged_cells = 0;

    int size() const { return int(centers.size()); }
    double cell_width(int i) const { return faces[i + 1] - faces[i]; }
    double nu_total() const;
};

enum class GradeSide { none, left, right, both, automatic };

// Power-map graded mesh: clustering exponent gamma applied toward the
// endpoints where the weights are singular/degenerate (side=automatic probes
// the weights' local scaling). gamma = 1 gives a uniform mesh.
Grid build_grid(const WeightSpec& nu, const WeightSpec& mu, const Domain1D& dom, int M,
                double gamma = 1.0, GradeSide side = GradeSide::automatic);

} // namespace wpme
