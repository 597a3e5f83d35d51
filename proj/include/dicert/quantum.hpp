#pragma once

#include <string>
#include <vector>

#include "dicert/linalg.hpp"

namespace dicert {

// Positive unit-trace operator with an explicit tensor factorization.
struct DensityMatrix {
  std::vector<std::size_t> factors;
  ComplexMatrix rho;

  std::size_t dim() const { return rho.rows(); }

  // Validates PSD (min eigenvalue >= -psd_clamp), unit trace and hermiticity.
  static DensityMatrix make(ComplexMatrix m, std::vector<std::size_t> factors);
  static DensityMatrix pure(const std::vector<cplx>& amps, std::vector<std::size_t> factors);
  static DensityMatrix maximally_mixed(std::vector<std::size_t> factors);
};

struct PureState {
  std::vector<std::size_t> factors;
  std::vector<cplx> amps;

  std::size_t dim() const { return amps.size(); }
  static PureState make(std::vector<cplx> amps, std::vector<std::size_t> factors);
  DensityMatrix density() const;
};

// |phi+_d> = 1/sqrt(d) sum_i |ii> on H_d (x) H_d.
PureState maximally_entangled(std::size_t d);

struct KrausChannel {
  std::size_t dim_in = 0, dim_out = 0;
  std::vector<ComplexMatrix> kraus;

  // Validates sum K^dag K == I within kraus_complete.
  static KrausChannel make(std::vector<ComplexMatrix> kraus);
  static KrausChannel identity(std::size_t d);
  static KrausChannel unitary(const ComplexMatrix& u);
  // Qubit depolarizing channel: rho -> (1-p) rho + p I/2.
  static KrausChannel depolarizing_qubit(double p);
  double completeness_defect() const;  // max |sum K^dag K - I|
};

// CU_phi = |0><0| (x) I + |1><1| (x) exp(-i phi X); CU_0 = I4, first factor
// is the control qubit.
KrausChannel cu_phi(double phi);

// Uhlmann fidelity F(rho, sigma) = Tr sqrt(sqrt(sigma) rho sqrt(sigma)).
double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// Hilbert-Schmidt overlap Tr(rho * target).
double overlap(const DensityMatrix& rho, const DensityMatrix& target);

// Apply channel on the listed tensor factors of rho. Square channels may act
// on any factor subset; dimension-changing channels must cover all factors.
DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho,
                            const std::vector<std::size_t>& on_factors);

// Choi state (E (x) 1)[|phi+><phi+|], factors {dim_out, dim_in}.
DensityMatrix choi_state(const KrausChannel& ch);

// Uhlmann fidelity between Choi states.
double choi_fidelity(const KrausChannel& ch, const KrausChannel& ref);

// ||E - Ebar||_diamond <= 2 dim_in sqrt(1 - F^2).
double diamond_bound(double fidelity, std::size_t dim_in);

// rho(eps) = (1-eps)|phi2+><phi2+| + eps I/4.
DensityMatrix white_noise_state(double eps_s);

// JSON schema {"dim":..., "factors":[...], "re":[[...]], "im":[[...]]}.
std::string to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const std::string& text);
std::string to_json(const KrausChannel& ch);
KrausChannel channel_from_json(const std::string& text);

}  // namespace dicert
