#pragma once

#include <map>
#include <string>
#include <vector>

#include "dicert/quantum.hpp"

namespace dicert {

// One correlator term: a per-party setting label over {X, Z, 1} ('1' means the
// party does not measure) and a real coefficient.
struct BellTerm {
  std::string labels;
  double coeff = 0;
};

struct BellFunctional {
  std::size_t parties = 0;
  std::vector<BellTerm> terms;
};

// CHSH = E_XX + E_XZ + E_ZX - E_ZZ (quantum maximum 2 sqrt 2).
BellFunctional chsh_functional();

// The four-party family B_phi of correlators with prefactor 1/20
// (quantum maximum 1); party order B1 A1 A2 B2.
BellFunctional b_phi_functional(double phi);

// Per-party two-setting observable assignment. Observables are Hermitian with
// +-1 eigenvalues (square to identity).
struct MeasurementAssignment {
  std::vector<ComplexMatrix> x_obs, z_obs;

  std::size_t parties() const { return x_obs.size(); }
  static MeasurementAssignment make(std::vector<ComplexMatrix> x, std::vector<ComplexMatrix> z);
};

// CHSH realization attaining 2 sqrt 2 on |phi2+>:
// A: sigma_x / sigma_z, B: (sigma_x +- sigma_z)/sqrt 2.
MeasurementAssignment chsh_assignment();

// Realization of B_phi whose unique maximal eigenstate (eigenvalue 1) is
// |xi_phi> = (CU_phi (x) 1)[|phi2+>|phi2+>] in the computational basis with
// party order B1 A1 A2 B2.
MeasurementAssignment b_phi_assignment(double phi);

// |xi_phi> as a 4-qubit pure state (order B1 A1 A2 B2).
PureState xi_phi_state(double phi);

// Hermitian Bell operator: sum of coeff * tensor(observables), identity for
// label '1'.
ComplexMatrix realize_operator(const BellFunctional& f, const MeasurementAssignment& m);

// Conditional outcome distributions indexed by settings string (one char of
// X/Z/1 per party) and outcome string (+/- per measuring party, party order).
struct Behavior {
  std::size_t parties = 0;
  std::map<std::string, std::map<std::string, double>> table;
};

// Exact quantum behavior of (rho, assignment) over all full setting tuples.
Behavior behavior_from_state(const DensityMatrix& rho, const MeasurementAssignment& m);

// Normalization and no-signaling diagnostics; returns warning strings.
std::vector<std::string> validate_behavior(const Behavior& b);

// Sum of coeff * E_term. Marginal correlators (label '1') are evaluated from
// any full setting extension of the tuple; no-signaling makes the choice of
// silent-party settings immaterial and the discrepancy across extensions is
// reported through validate_behavior.
double evaluate_on_behavior(const BellFunctional& f, const Behavior& b);

// Exact maximum over local deterministic strategies (4^parties enumeration).
double local_bound(const BellFunctional& f);

// ((sqrt2+1)(|cos phi| + |sin phi|) + 2) / (5 sqrt2); matches enumeration for
// every phi (the absolute values extend the stated form beyond [0, pi/2]).
double b_phi_local_bound_closed_form(double phi);

// CSV format: header `settings,outcomes,probability`.
Behavior load_behavior_csv(const std::string& path);
void save_behavior_csv(const Behavior& b, const std::string& path);
Behavior parse_behavior_csv(const std::string& text);
std::string behavior_to_csv(const Behavior& b);

struct PerturbationCheck {
  std::size_t party = 0;
  char direction = 'X';      // which observable was tilted
  double first_order = 0;    // (lam(+d) - lam(-d))/2, should vanish
  double curvature = 0;      // fitted c in lam(d) ~ lam(0) - c d^2, should be > 0
  bool stationary = false;
  bool concave = false;
};

struct CandidateReport {
  double lambda_max = 0;
  double gap = 0;              // lambda_max - second eigenvalue
  double target_overlap = 0;   // |<target|v_max>|^2
  bool unique_max_is_target = false;  // check (a)
  bool lambda_is_one = false;         // check (b)
  std::vector<PerturbationCheck> perturbations;  // check (c)
  bool perturbations_pass = false;
  bool passed() const { return unique_max_is_target && lambda_is_one && perturbations_pass; }
};

// Necessary-condition verification for a Bell-test candidate: unique maximal
// eigenstate equal to `target`, eigenvalue 1, and the maximal eigenvalue
// stationary and strictly concave under box perturbations
// X -> X(1 - d^2/2) + d Z and Z -> Z(1 - d^2/2) + d X per party.
CandidateReport verify_candidate(const BellFunctional& f, const MeasurementAssignment& m,
                                 const PureState& target, double delta);

std::string to_json(const CandidateReport& r);

}  // namespace dicert
