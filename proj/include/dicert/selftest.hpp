#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dicert/bell.hpp"
#include "dicert/quantum.hpp"

namespace dicert {

// Canonical Jordan-block observables
//   X(a) = cos(a) sx + sin(a) sz,  Z(a) = cos(a) sx - sin(a) sz,  a in [0, pi/2].
std::pair<ComplexMatrix, ComplexMatrix> jordan_observables(double a);

// g(a) = (1 + sqrt2)(cos a + sin a - 1), in [0, 1] on [0, pi/2].
double dephasing_g(double a);

// Lambda(a)[rho] = (1+g)/2 rho + (1-g)/2 Gamma_a rho Gamma_a with
// Gamma_a = sigma_x on [0, pi/4], sigma_z on (pi/4, pi/2].
KrausChannel dephasing_map(double a);

// Local frame of one party: the operators playing the roles of sigma_x and
// sigma_z in that party's Jordan block, fixed by the ideal complementary pair
// through P = (X+Z)/sqrt2, Q = (X-Z)/sqrt2.
struct PartyFrame {
  ComplexMatrix p, q;
};
PartyFrame frame_from_pair(const ComplexMatrix& x_ideal, const ComplexMatrix& z_ideal);

// A self-testing instance: functional, per-party frames, target state and the
// quantum maximum attained by the target.
struct SelfTestProblem {
  std::string name;
  BellFunctional functional;
  std::vector<PartyFrame> frames;
  DensityMatrix target;
  double max_bell = 0;
};

SelfTestProblem chsh_selftest();
SelfTestProblem cu_phi_selftest(double phi);

// Bell operator realized with frame-conjugated Jordan observables at `angles`.
ComplexMatrix bell_operator_at(const SelfTestProblem& pb, const std::vector<double>& angles);

// M(a1..aN) = (Lambda(a1) (x) ... (x) Lambda(aN))[target]; the dephasing maps
// are self-adjoint, so Tr(tau M) equals the extracted overlap objective.
ComplexMatrix effective_target_at(const SelfTestProblem& pb, const std::vector<double>& angles);

// Canonical-frame variant acting on an explicit target (all frames trivial).
ComplexMatrix effective_target(const DensityMatrix& target, const std::vector<double>& angles);

struct InnerSolution {
  double value = 0;        // certified minimum of Tr(tau M) s.t. Tr(tau B) >= beta'
  double mu = 0;           // dual multiplier at the optimum
  double dual_gap = 0;     // witness objective minus dual value
  double constraint_slack = 0;  // Tr(witness B) - beta'
  bool feasible = false;
  ComplexMatrix witness;
};

// Lagrangian-dual solve of  min Tr(tau M) s.t. Tr(tau B) >= beta' over density
// matrices: h(mu) = lambda_min(M - mu B) + mu beta' is concave; its maximizer
// is located by bisection on the subgradient sign, and the witness is
// recovered from the bottom eigenspace of M - mu* B.
InnerSolution min_overlap_given_bell(const ComplexMatrix& m, const ComplexMatrix& b,
                                     double beta_prime);

struct SearchBudget {
  std::size_t grid_points = 0;   // per-angle grid size; 0 picks the per-problem default
  std::size_t nm_starts = 5;     // Nelder-Mead restarts from the best grid points
  double nm_tol = 1e-4;          // simplex-diameter convergence threshold
  std::size_t nm_max_iter = 300;

  static SearchBudget smoke();
};

struct AngleSearchResult {
  double value = 0;
  std::vector<double> angles;
  bool feasible = false;
  bool converged = true;  // refinement reached nm_tol within budget
  InnerSolution inner;
};

AngleSearchResult min_overlap_over_angles(const SelfTestProblem& pb, double beta_prime,
                                          const SearchBudget& budget);

struct BoundCurve {
  std::string name;
  double max_bell = 0;
  double threshold = 0;  // final envelope segment crossing of overlap 1/2
  std::vector<double> grid;
  std::vector<double> raw;                          // O_min samples (nan if infeasible)
  std::vector<std::pair<double, double>> envelope;  // lower convex hull vertices
  double max_dual_gap = 0;
  std::vector<std::string> warnings;
  std::string digest;
};

std::vector<double> default_grid(const SelfTestProblem& pb, std::size_t n);

BoundCurve bound_curve(const SelfTestProblem& pb, const std::vector<double>& grid,
                       const SearchBudget& budget);

// Piecewise-linear envelope evaluation (first segment extrapolated below the
// sampled range, clamped to [0, 1]).
double envelope_value(const BoundCurve& curve, double beta);

// sqrt(max(envelope(beta), 1/2)); the trivial floor sqrt(1/2) applies at and
// below the threshold.
double certified_fidelity_from_bell(const BoundCurve& curve, double beta);

std::string curve_digest(const SelfTestProblem& pb, const std::vector<double>& grid,
                         const SearchBudget& budget);

std::string to_json(const BoundCurve& curve);
BoundCurve curve_from_json(const std::string& text);
std::string curve_to_csv(const BoundCurve& curve);

}  // namespace dicert
