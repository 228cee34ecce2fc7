#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "locckit/bipartite.hpp"
#include "locckit/linalg.hpp"

namespace locckit::channels {

/// Completely positive map in Kraus form; trace preservation is a property,
/// not a construction requirement.
struct KrausChannel {
  std::vector<Mat> kraus;  // all dim_out x dim_in
  Eigen::Index dim_in = 0;
  Eigen::Index dim_out = 0;
};

KrausChannel make_channel(std::vector<Mat> kraus);

bool is_trace_preserving(const KrausChannel& c, const Tolerance& tol = {});

struct Povm {
  std::vector<Mat> elements;
};

bool povm_is_valid(const Povm& p, const Tolerance& tol = {});

struct RankOneElement {
  double weight;  // m_j
  Vec vector;     // unit phi_j, element = m_j |phi_j><phi_j|
};

/// Rank-one decomposition of each POVM element; throws NotRankOne when an
/// element has rank above one.
std::vector<RankOneElement> rank_one_decomposition(const Povm& p, const Tolerance& tol = {});

/// Quantum-classical channel of a complete measurement: Kraus
/// V_j = sqrt(m_j) |j><phi_j| mapping C^a to the r-dimensional outcome space.
KrausChannel qc_channel_from_povm(const Povm& p, const Tolerance& tol = {});

/// Kraus set {K_j (x) I_b}.
KrausChannel extend_with_identity(const KrausChannel& c, Eigen::Index dim_b);

Mat apply_channel(const KrausChannel& c, const Mat& rho);

/// Channel with Kraus {K2 K1} for all pairs; applies `first` then `second`.
KrausChannel compose(const KrausChannel& second, const KrausChannel& first);

/// Teleportation-style recovery for an orthonormal set S distinguished by the
/// (conjugated) basis {phi_x}: Kraus (<x| (x) R_x) with
/// R_x = sum_i |phi_i><phi_x| B_i^dag.  Requires the conditional Bob states
/// {B_i phi_x}_i to be mutually orthogonal for every x; reports the worst
/// offending pair otherwise.
KrausChannel build_recovery(const bipartite::StateSet& s, const std::vector<Vec>& alice_basis,
                            const Tolerance& tol = {});

/// Max over the code's matrix units (plus `trials` random code states) of
/// ||(R o E)(rho) - rho||_F.
double verify_recovery(const KrausChannel& recovery, const KrausChannel& noise,
                       const std::vector<Vec>& code_basis, int trials = 0, unsigned seed = 1);

}  // namespace locckit::channels
