#pragma once

#include <string>
#include <utility>
#include <vector>

#include "petcor/linalg.hpp"

namespace petcor {

/// Leader dynamics v' = S v, y0 = F v with F = [1, 0, ..., 0].
/// The leader is expected to be marginally stable (all eigenvalues of S on the
/// imaginary axis); a violation is reported through `warnings`, not rejected,
/// so unstable leaders can still be explored.
struct Exosystem {
    Matrix s;
    RowVector f;
    Vector v0;
    std::vector<std::string> warnings;

    static Exosystem make(Matrix s, Vector v0);
    static Exosystem make(Matrix s, RowVector f, Vector v0);

    int dim() const { return static_cast<int>(s.rows()); }
};

/// Leader state and output at time t: v(t) = e^{St} v0, y0 = F v(t).
/// Deterministic: equal t gives bit-identical results.
std::pair<Vector, double> leader_state(const Exosystem& exo, double t);

}  // namespace petcor
