#include "dicert/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace dicert {

namespace {

std::size_t product(const std::vector<std::size_t>& v) {
  std::size_t p = 1;
  for (std::size_t d : v) p *= d;
  return p;
}

}  // namespace

DensityMatrix DensityMatrix::make(ComplexMatrix m, std::vector<std::size_t> factors) {
  if (factors.empty()) factors = {m.rows()};
  if (product(factors) != m.rows() || !m.square())
    throw std::invalid_argument("DensityMatrix: factor dimensions inconsistent");
  if (!m.is_hermitian(1e-10))
    throw std::invalid_argument("DensityMatrix: not Hermitian, defect " +
                                std::to_string(m.hermiticity_defect()));
  if (std::abs(m.trace() - cplx(1, 0)) > tol::trace_preserve * 10)
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(m.trace().real()) +
                                " != 1");
  const auto evals = eigvalsh(m, 1e-9);
  if (evals.front() < -tol::psd_clamp)
    throw std::invalid_argument("DensityMatrix: negative eigenvalue " +
                                std::to_string(evals.front()));
  return DensityMatrix{std::move(factors), std::move(m)};
}

DensityMatrix DensityMatrix::pure(const std::vector<cplx>& amps,
                                  std::vector<std::size_t> factors) {
  return PureState::make(amps, std::move(factors)).density();
}

DensityMatrix DensityMatrix::maximally_mixed(std::vector<std::size_t> factors) {
  const std::size_t d = product(factors);
  ComplexMatrix m = ComplexMatrix::identity(d);
  m *= cplx(1.0 / static_cast<double>(d), 0);
  return DensityMatrix{std::move(factors), std::move(m)};
}

PureState PureState::make(std::vector<cplx> amps, std::vector<std::size_t> factors) {
  if (factors.empty()) factors = {amps.size()};
  if (product(factors) != amps.size())
    throw std::invalid_argument("PureState: factor dimensions inconsistent");
  double n2 = 0;
  for (const cplx& a : amps) n2 += std::norm(a);
  if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
    throw std::invalid_argument("PureState: norm " + std::to_string(std::sqrt(n2)) + " != 1");
  return PureState{std::move(factors), std::move(amps)};
}

DensityMatrix PureState::density() const {
  const std::size_t d = amps.size();
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i, j) = amps[i] * std::conj(amps[j]);
  return DensityMatrix{factors, std::move(m)};
}

PureState maximally_entangled(std::size_t d) {
  std::vector<cplx> amps(d * d, 0);
  const double c = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) amps[i * d + i] = c;
  return PureState{{d, d}, std::move(amps)};
}

double KrausChannel::completeness_defect() const {
  ComplexMatrix s(dim_in, dim_in);
  for (const auto& k : kraus) s += matmul(k.adjoint(), k);
  s -= ComplexMatrix::identity(dim_in);
  return s.max_abs();
}

KrausChannel KrausChannel::make(std::vector<ComplexMatrix> kraus) {
  if (kraus.empty()) throw std::invalid_argument("KrausChannel: empty Kraus list");
  KrausChannel ch;
  ch.dim_out = kraus.front().rows();
  ch.dim_in = kraus.front().cols();
  for (const auto& k : kraus)
    if (k.rows() != ch.dim_out || k.cols() != ch.dim_in)
      throw std::invalid_argument("KrausChannel: inconsistent Kraus shapes");
  ch.kraus = std::move(kraus);
  if (ch.completeness_defect() > tol::kraus_complete)
    throw std::invalid_argument("KrausChannel: not trace preserving, defect " +
                                std::to_string(ch.completeness_defect()));
  return ch;
}

KrausChannel KrausChannel::identity(std::size_t d) {
  return make({ComplexMatrix::identity(d)});
}

KrausChannel KrausChannel::unitary(const ComplexMatrix& u) { return make({u}); }

KrausChannel KrausChannel::depolarizing_qubit(double p) {
  if (p < 0 || p > 4.0 / 3.0) throw std::invalid_argument("depolarizing_qubit: p out of range");
  std::vector<ComplexMatrix> ks;
  ks.push_back(std::sqrt(1 - 3 * p / 4) * identity2());
  ks.push_back(std::sqrt(p / 4) * pauli_x());
  ks.push_back(std::sqrt(p / 4) * pauli_y());
  ks.push_back(std::sqrt(p / 4) * pauli_z());
  return make(std::move(ks));
}

KrausChannel cu_phi(double phi) {
  ComplexMatrix u(4, 4);
  // exp(-i phi X) = cos(phi) I - i sin(phi) X
  const cplx c(std::cos(phi), 0), ms(0, -std::sin(phi));
  u(0, 0) = 1;
  u(1, 1) = 1;
  u(2, 2) = c;
  u(3, 3) = c;
  u(2, 3) = ms;
  u(3, 2) = ms;
  return KrausChannel::unitary(u);
}

double uhlmann_fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("uhlmann_fidelity: dimension mismatch");
  const ComplexMatrix rs = matrix_sqrt_psd(sigma.rho);
  ComplexMatrix inner = matmul(matmul(rs, rho.rho), rs);
  // symmetrize rounding noise before the final eigensolve
  const auto evals = eigvalsh(0.5 * cplx(1, 0) * (inner + inner.adjoint()), 1.0);
  double f = 0;
  for (double lam : evals) {
    if (lam < -tol::psd_clamp && lam < -1e-9 * std::max(1.0, std::abs(evals.back())))
      throw std::runtime_error("uhlmann_fidelity: inner product not PSD, eigenvalue " +
                               std::to_string(lam));
    if (lam > 0) f += std::sqrt(lam);
  }
  return std::min(f, 1.0);
}

double overlap(const DensityMatrix& rho, const DensityMatrix& target) {
  if (rho.dim() != target.dim()) throw std::invalid_argument("overlap: dimension mismatch");
  cplx t = 0;
  for (std::size_t i = 0; i < rho.dim(); ++i)
    for (std::size_t k = 0; k < rho.dim(); ++k) t += rho.rho(i, k) * target.rho(k, i);
  return t.real();
}

DensityMatrix apply_channel(const KrausChannel& ch, const DensityMatrix& rho,
                            const std::vector<std::size_t>& on_factors) {
  std::size_t sel_dim = 1;
  for (std::size_t f : on_factors) {
    if (f >= rho.factors.size()) throw std::invalid_argument("apply_channel: factor out of range");
    sel_dim *= rho.factors[f];
  }
  if (sel_dim != ch.dim_in)
    throw std::invalid_argument("apply_channel: selected factors dim " + std::to_string(sel_dim) +
                                " != channel dim_in " + std::to_string(ch.dim_in));
  if (ch.completeness_defect() > tol::kraus_complete)
    throw std::invalid_argument("apply_channel: channel violates trace preservation");

  const bool full_cover = sel_dim == rho.dim();
  if (!full_cover && ch.dim_in != ch.dim_out)
    throw std::invalid_argument("apply_channel: dimension-changing channel on factor subset");

  if (full_cover && on_factors.size() == rho.factors.size()) {
    bool natural = true;
    for (std::size_t k = 0; k < on_factors.size(); ++k) natural &= on_factors[k] == k;
    if (natural) {
      ComplexMatrix out(ch.dim_out, ch.dim_out);
      for (const auto& k : ch.kraus) out += conjugate(k, rho.rho);
      return DensityMatrix::make(std::move(out), ch.dim_in == ch.dim_out
                                                     ? rho.factors
                                                     : std::vector<std::size_t>{ch.dim_out});
    }
  }

  // Permute the selected factors to the front, act there, permute back.
  std::vector<std::size_t> perm(on_factors);
  std::vector<bool> used(rho.factors.size(), false);
  for (std::size_t f : on_factors) used[f] = true;
  for (std::size_t f = 0; f < rho.factors.size(); ++f)
    if (!used[f]) perm.push_back(f);
  std::vector<std::size_t> inv(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) inv[perm[k]] = k;

  const ComplexMatrix permuted = permute_factors(rho.rho, rho.factors, perm);
  const std::size_t rest = rho.dim() / sel_dim;
  const ComplexMatrix irest = ComplexMatrix::identity(rest);
  ComplexMatrix out(rho.dim(), rho.dim());
  for (const auto& k : ch.kraus) out += conjugate(kron(k, irest), permuted);
  std::vector<std::size_t> pdims(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k) pdims[k] = rho.factors[perm[k]];
  return DensityMatrix::make(permute_factors(out, pdims, inv), rho.factors);
}

DensityMatrix choi_state(const KrausChannel& ch) {
  const std::size_t d = ch.dim_in;
  const PureState phi = maximally_entangled(d);
  const ComplexMatrix id = ComplexMatrix::identity(d);
  ComplexMatrix out(ch.dim_out * d, ch.dim_out * d);
  for (const auto& k : ch.kraus) out += conjugate(kron(k, id), phi.density().rho);
  return DensityMatrix::make(std::move(out), {ch.dim_out, d});
}

double choi_fidelity(const KrausChannel& ch, const KrausChannel& ref) {
  if (ch.dim_in != ref.dim_in || ch.dim_out != ref.dim_out)
    throw std::invalid_argument("choi_fidelity: channel dimension mismatch");
  return uhlmann_fidelity(choi_state(ch), choi_state(ref));
}

double diamond_bound(double fidelity, std::size_t dim_in) {
  if (fidelity < -1e-12 || fidelity > 1 + 1e-12)
    throw std::invalid_argument("diamond_bound: fidelity out of [0,1]");
  fidelity = std::clamp(fidelity, 0.0, 1.0);
  return 2.0 * static_cast<double>(dim_in) * std::sqrt(1.0 - fidelity * fidelity);
}

DensityMatrix white_noise_state(double eps_s) {
  if (eps_s < 0 || eps_s > 1) throw std::invalid_argument("white_noise_state: eps out of [0,1]");
  const DensityMatrix phi = maximally_entangled(2).density();
  ComplexMatrix m = cplx(1 - eps_s, 0) * phi.rho;
  for (std::size_t i = 0; i < 4; ++i) m(i, i) += eps_s / 4.0;
  return DensityMatrix{{2, 2}, std::move(m)};
}

namespace {

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  std::vector<std::vector<double>> re(m.rows(), std::vector<double>(m.cols()));
  std::vector<std::vector<double>> im(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      re[i][j] = m(i, j).real();
      im[i][j] = m(i, j).imag();
    }
  return {{"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  const auto re = j.at("re").get<std::vector<std::vector<double>>>();
  const auto im = j.at("im").get<std::vector<std::vector<double>>>();
  if (re.empty() || re.size() != im.size() || re[0].size() != im[0].size())
    throw std::invalid_argument("matrix JSON: re/im shape mismatch");
  ComplexMatrix m(re.size(), re[0].size());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (re[i].size() != m.cols() || im[i].size() != m.cols())
      throw std::invalid_argument("matrix JSON: ragged rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = cplx(re[i][j], im[i][j]);
  }
  return m;
}

}  // namespace

std::string to_json(const DensityMatrix& rho) {
  nlohmann::json j = matrix_to_json(rho.rho);
  j["dim"] = rho.dim();
  j["factors"] = rho.factors;
  return j.dump(2);
}

DensityMatrix density_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ComplexMatrix m = matrix_from_json(j);
  std::vector<std::size_t> factors;
  if (j.contains("factors")) factors = j.at("factors").get<std::vector<std::size_t>>();
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != m.rows())
    throw std::invalid_argument("density JSON: dim field inconsistent with matrix");
  return DensityMatrix::make(std::move(m), std::move(factors));
}

std::string to_json(const KrausChannel& ch) {
  nlohmann::json j;
  j["dim_in"] = ch.dim_in;
  j["dim_out"] = ch.dim_out;
  j["kraus"] = nlohmann::json::array();
  for (const auto& k : ch.kraus) j["kraus"].push_back(matrix_to_json(k));
  return j.dump(2);
}

KrausChannel channel_from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  std::vector<ComplexMatrix> ks;
  for (const auto& jk : j.at("kraus")) ks.push_back(matrix_from_json(jk));
  KrausChannel ch = KrausChannel::make(std::move(ks));
  if (j.contains("dim_in") && j.at("dim_in").get<std::size_t>() != ch.dim_in)
    throw std::invalid_argument("channel JSON: dim_in inconsistent with Kraus shapes");
  if (j.contains("dim_out") && j.at("dim_out").get<std::size_t>() != ch.dim_out)
    throw std::invalid_argument("channel JSON: dim_out inconsistent with Kraus shapes");
  return ch;
}

}  // namespace dicert
