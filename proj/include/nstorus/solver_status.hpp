#pragma once

namespace nstorus {

/// Outcome of a fixed-point iteration. non_contraction means the iterates
/// blew past the divergence guard; no_convergence means the iteration budget
/// ran out while increments were still above tolerance.
enum class SolveStatus { converged, no_convergence, non_contraction };

inline const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::no_convergence: return "no_convergence";
        case SolveStatus::non_contraction: return "non_contraction";
    }
    return "unknown";
}

}  // namespace nstorus
