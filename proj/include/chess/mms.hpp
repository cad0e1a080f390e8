#pragma once

#include <cstdint>

#include "chess/grid.hpp"

namespace chess {

/// Manufactured potential: amp * sum_j c_j cos(2 pi m_j . x + theta_j) / sum_j |c_j| |m_j|^2
/// over four random modes with |m_j|_1 <= 2, projected to mean zero.
/// sup |phi| <= amp and the complex Hessian has operator norm <= pi^2 amp, so
/// every eigenvalue of I + Hess(phi) lies in [1 - pi^2 amp, 1 + pi^2 amp].
Field make_mms(const TorusGrid& grid, double amp, std::uint64_t seed);

}  // namespace chess
