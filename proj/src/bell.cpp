#include "dicert/bell.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace dicert {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;

ComplexMatrix scaled(const ComplexMatrix& m, double s) { return cplx(s, 0) * m; }

}  // namespace

BellFunctional chsh_functional() {
  BellFunctional f;
  f.parties = 2;
  f.terms = {{"XX", 1.0}, {"XZ", 1.0}, {"ZX", 1.0}, {"ZZ", -1.0}};
  return f;
}

BellFunctional b_phi_functional(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  const double w = 1.0 / 20.0;
  BellFunctional f;
  f.parties = 4;
  auto add = [&](const char* lab, double co) { f.terms.push_back({lab, co}); };
  add("XX11", 2 * kSqrt2 * w);
  add("ZX11", 2 * kSqrt2 * w);
  add("X1ZX", s * w);
  add("X1XX", -s * w);
  add("X1XZ", -s * w);
  add("X1ZZ", -s * w);
  add("Z1ZX", s * w);
  add("Z1XX", -s * w);
  add("Z1XZ", -s * w);
  add("Z1ZZ", -s * w);
  add("11ZX", c * kSqrt2 * w);
  add("11XZ", -c * kSqrt2 * w);
  add("11XX", c * kSqrt2 * w);
  add("11ZZ", c * kSqrt2 * w);
  add("1XZX", s * kSqrt2 * w);
  add("1XXX", -s * kSqrt2 * w);
  add("1XXZ", -s * kSqrt2 * w);
  add("1XZZ", -s * kSqrt2 * w);
  add("XXZX", c * w);
  add("XXXZ", -c * w);
  add("XXXX", c * w);
  add("XXZZ", c * w);
  add("ZXZX", c * w);
  add("ZXXZ", -c * w);
  add("ZXXX", c * w);
  add("ZXZZ", c * w);
  add("ZZZX", 2 * w);
  add("ZZXZ", -2 * w);
  add("ZZXX", 2 * w);
  add("ZZZZ", 2 * w);
  add("XZZX", -2 * w);
  add("XZXZ", 2 * w);
  add("XZXX", -2 * w);
  add("XZZZ", -2 * w);
  return f;
}

MeasurementAssignment MeasurementAssignment::make(std::vector<ComplexMatrix> x,
                                                  std::vector<ComplexMatrix> z) {
  if (x.size() != z.size()) throw std::invalid_argument("assignment: party count mismatch");
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (const ComplexMatrix* o : {&x[k], &z[k]}) {
      if (!o->is_hermitian(1e-10))
        throw std::invalid_argument("assignment: observable not Hermitian");
      ComplexMatrix sq = matmul(*o, *o);
      sq -= ComplexMatrix::identity(o->rows());
      if (sq.max_abs() > 1e-10)
        throw std::invalid_argument("assignment: observable does not square to identity");
    }
  }
  return MeasurementAssignment{std::move(x), std::move(z)};
}

MeasurementAssignment chsh_assignment() {
  const ComplexMatrix bp = scaled(pauli_x() + pauli_z(), 1 / kSqrt2);
  const ComplexMatrix bm = scaled(pauli_x() - pauli_z(), 1 / kSqrt2);
  return MeasurementAssignment::make({pauli_x(), bp}, {pauli_z(), bm});
}

MeasurementAssignment b_phi_assignment(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  const ComplexMatrix& sx = pauli_x();
  const ComplexMatrix& sy = pauli_y();
  const ComplexMatrix& sz = pauli_z();
  std::vector<ComplexMatrix> x(4, ComplexMatrix(2, 2)), z(4, ComplexMatrix(2, 2));
  x[0] = scaled(sx + sz, -1 / kSqrt2);
  z[0] = scaled(sx - sz, 1 / kSqrt2);
  x[1] = scaled(sz, -1.0);
  z[1] = sx;
  x[2] = scaled(sy, c) + scaled(sz, s);
  z[2] = scaled(sy, -s) + scaled(sz, c);
  x[3] = scaled(sz - sy, 1 / kSqrt2);
  z[3] = scaled(sz + sy, 1 / kSqrt2);
  return MeasurementAssignment::make(std::move(x), std::move(z));
}

PureState xi_phi_state(double phi) {
  const PureState pair = maximally_entangled(2);
  std::vector<cplx> amps(16, 0);
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) amps[a * 4 + b] = pair.amps[a] * pair.amps[b];
  DensityMatrix st = DensityMatrix::make(PureState::make(amps, {2, 2, 2, 2}).density().rho,
                                         {2, 2, 2, 2});
  st = apply_channel(cu_phi(phi), st, {1, 2});
  // recover the state vector from the rank-one projector
  EigenDecomposition d = eig_hermitian(st.rho, 1e-9);
  std::vector<cplx> out(16);
  for (std::size_t i = 0; i < 16; ++i) out[i] = d.eigenvectors(i, 15);
  // fix the global phase: make the largest amplitude real positive
  std::size_t imax = 0;
  for (std::size_t i = 0; i < 16; ++i)
    if (std::abs(out[i]) > std::abs(out[imax])) imax = i;
  const cplx ph = out[imax] / std::abs(out[imax]);
  for (cplx& v : out) v /= ph;
  return PureState::make(std::move(out), {2, 2, 2, 2});
}

ComplexMatrix realize_operator(const BellFunctional& f, const MeasurementAssignment& m) {
  if (m.parties() != f.parties)
    throw std::invalid_argument("realize_operator: party count mismatch");
  const std::size_t dim = std::size_t(1) << f.parties;
  ComplexMatrix out(dim, dim);
  for (const BellTerm& t : f.terms) {
    if (t.labels.size() != f.parties)
      throw std::invalid_argument("realize_operator: bad term label " + t.labels);
    std::vector<ComplexMatrix> ops;
    ops.reserve(f.parties);
    for (std::size_t k = 0; k < f.parties; ++k) {
      switch (t.labels[k]) {
        case 'X': ops.push_back(m.x_obs[k]); break;
        case 'Z': ops.push_back(m.z_obs[k]); break;
        case '1': ops.push_back(identity2()); break;
        default: throw std::invalid_argument("realize_operator: missing assignment for label");
      }
    }
    out += scaled(kron_all(ops), t.coeff);
  }
  return out;
}

Behavior behavior_from_state(const DensityMatrix& rho, const MeasurementAssignment& m) {
  const std::size_t n = m.parties();
  if (rho.dim() != (std::size_t(1) << n))
    throw std::invalid_argument("behavior_from_state: state dimension != 2^parties");
  Behavior b;
  b.parties = n;
  const std::size_t nsettings = std::size_t(1) << n;
  for (std::size_t sbits = 0; sbits < nsettings; ++sbits) {
    std::string settings(n, 'X');
    for (std::size_t k = 0; k < n; ++k)
      if ((sbits >> k) & 1) settings[k] = 'Z';
    // projectors (I +- O)/2 per party
    std::map<std::string, double> dist;
    const std::size_t nout = std::size_t(1) << n;
    for (std::size_t obits = 0; obits < nout; ++obits) {
      std::string outs(n, '+');
      std::vector<ComplexMatrix> projs;
      projs.reserve(n);
      for (std::size_t k = 0; k < n; ++k) {
        const int sign = ((obits >> k) & 1) ? -1 : 1;
        if (sign < 0) outs[k] = '-';
        const ComplexMatrix& o = settings[k] == 'X' ? m.x_obs[k] : m.z_obs[k];
        ComplexMatrix p = ComplexMatrix::identity(2);
        p += scaled(o, sign);
        p *= cplx(0.5, 0);
        projs.push_back(std::move(p));
      }
      const ComplexMatrix proj = kron_all(projs);
      cplx tr = 0;
      for (std::size_t i = 0; i < rho.dim(); ++i)
        for (std::size_t j = 0; j < rho.dim(); ++j) tr += rho.rho(i, j) * proj(j, i);
      dist[outs] = std::max(0.0, tr.real());
    }
    b.table[settings] = std::move(dist);
  }
  return b;
}

namespace {

double correlator_from_group(const std::map<std::string, double>& dist,
                             const std::vector<std::size_t>& measuring,
                             const std::string& group_settings) {
  double e = 0;
  for (const auto& [outs, p] : dist) {
    // outcome string covers the measuring parties of THIS group, in party order
    std::vector<std::size_t> group_measuring;
    for (std::size_t k = 0; k < group_settings.size(); ++k)
      if (group_settings[k] != '1') group_measuring.push_back(k);
    if (outs.size() != group_measuring.size())
      throw std::invalid_argument("behavior: outcome string length mismatch for settings " +
                                  group_settings);
    int sign = 1;
    for (std::size_t q = 0; q < group_measuring.size(); ++q) {
      bool counts = false;
      for (std::size_t k : measuring) counts |= k == group_measuring[q];
      if (counts && outs[q] == '-') sign = -sign;
    }
    e += sign * p;
  }
  return e;
}

}  // namespace

double evaluate_on_behavior(const BellFunctional& f, const Behavior& b) {
  if (f.parties != b.parties)
    throw std::invalid_argument("evaluate_on_behavior: party count mismatch");
  double value = 0;
  for (const BellTerm& t : f.terms) {
    std::vector<std::size_t> measuring;
    for (std::size_t k = 0; k < t.labels.size(); ++k)
      if (t.labels[k] != '1') measuring.push_back(k);

    auto it = b.table.find(t.labels);
    if (it != b.table.end()) {
      value += t.coeff * correlator_from_group(it->second, measuring, t.labels);
      continue;
    }
    // marginalize a full extension: silent parties default to setting X
    std::string full = t.labels;
    for (char& ch : full)
      if (ch == '1') ch = 'X';
    it = b.table.find(full);
    if (it == b.table.end())
      throw std::invalid_argument("behavior missing setting combination " + t.labels +
                                  " (no group " + full + " to marginalize)");
    value += t.coeff * correlator_from_group(it->second, measuring, full);
  }
  return value;
}

std::vector<std::string> validate_behavior(const Behavior& b) {
  std::vector<std::string> warnings;
  for (const auto& [settings, dist] : b.table) {
    double sum = 0;
    for (const auto& [outs, p] : dist) {
      if (p < -1e-12)
        warnings.push_back("negative probability in group " + settings);
      sum += p;
    }
    if (std::abs(sum - 1.0) > tol::behavior_norm)
      warnings.push_back("group " + settings + " sums to " + std::to_string(sum));
  }
  // no-signaling: the marginal correlator of any sub-tuple must not depend on
  // the silent parties' settings
  for (std::size_t k = 0; k < b.parties; ++k) {
    for (const auto& [settings, dist] : b.table) {
      if (settings[k] != 'X') continue;
      std::string other = settings;
      other[k] = 'Z';
      auto it = b.table.find(other);
      if (it == b.table.end()) continue;
      // compare marginal of all parties except k
      std::vector<std::size_t> rest;
      for (std::size_t q = 0; q < b.parties; ++q)
        if (q != k) rest.push_back(q);
      auto marginal = [&](const std::map<std::string, double>& d) {
        std::map<std::string, double> m;
        for (const auto& [outs, p] : d) {
          std::string key;
          for (std::size_t q : rest) key += outs[q];
          m[key] += p;
        }
        return m;
      };
      const auto ma = marginal(dist);
      const auto mb = marginal(it->second);
      double dev = 0;
      for (const auto& [key, p] : ma) {
        auto jt = mb.find(key);
        dev = std::max(dev, std::abs(p - (jt == mb.end() ? 0.0 : jt->second)));
      }
      if (dev > tol::behavior_norm)
        warnings.push_back("no-signaling violation " + std::to_string(dev) + " toggling party " +
                           std::to_string(k) + " at " + settings);
    }
  }
  return warnings;
}

double local_bound(const BellFunctional& f) {
  if (f.parties > 4)
    throw std::invalid_argument("local_bound: exact enumeration limited to 4 parties");
  const std::size_t nstrat = std::size_t(1) << (2 * f.parties);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t st = 0; st < nstrat; ++st) {
    double v = 0;
    for (const BellTerm& t : f.terms) {
      double term = t.coeff;
      for (std::size_t k = 0; k < f.parties; ++k) {
        if (t.labels[k] == '1') continue;
        const std::size_t bit = 2 * k + (t.labels[k] == 'Z' ? 1 : 0);
        if ((st >> bit) & 1) term = -term;
      }
      v += term;
    }
    best = std::max(best, v);
  }
  return best;
}

double b_phi_local_bound_closed_form(double phi) {
  const double c = std::abs(std::cos(phi)), s = std::abs(std::sin(phi));
  return ((kSqrt2 + 1) * (c + s) + 2) / (5 * kSqrt2);
}

Behavior parse_behavior_csv(const std::string& text) {
  Behavior b;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      if (line.find("settings") != std::string::npos) continue;
    }
    std::istringstream row(line);
    std::string settings, outs, prob;
    if (!std::getline(row, settings, ',') || !std::getline(row, outs, ',') ||
        !std::getline(row, prob, ','))
      throw std::invalid_argument("behavior CSV: malformed row '" + line + "'");
    if (b.parties == 0) b.parties = settings.size();
    if (settings.size() != b.parties)
      throw std::invalid_argument("behavior CSV: inconsistent settings length in '" + line + "'");
    std::size_t measuring = 0;
    for (char ch : settings) {
      if (ch != 'X' && ch != 'Z' && ch != '1')
        throw std::invalid_argument("behavior CSV: bad setting char in '" + settings + "'");
      if (ch != '1') ++measuring;
    }
    if (outs.size() != measuring)
      throw std::invalid_argument("behavior CSV: outcomes '" + outs + "' do not match settings '" +
                                  settings + "'");
    for (char ch : outs)
      if (ch != '+' && ch != '-')
        throw std::invalid_argument("behavior CSV: bad outcome char in '" + outs + "'");
    b.table[settings][outs] += std::stod(prob);
  }
  // normalize each settings group (supports raw counts)
  for (auto& [settings, dist] : b.table) {
    double sum = 0;
    for (auto& [outs, p] : dist) {
      if (p < 0) throw std::invalid_argument("behavior CSV: negative probability");
      sum += p;
    }
    if (sum <= 0) throw std::invalid_argument("behavior CSV: empty group " + settings);
    for (auto& [outs, p] : dist) p /= sum;
  }
  return b;
}

Behavior load_behavior_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open behavior file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_behavior_csv(ss.str());
}

std::string behavior_to_csv(const Behavior& b) {
  std::ostringstream out;
  out << "settings,outcomes,probability\n";
  out.precision(17);
  for (const auto& [settings, dist] : b.table)
    for (const auto& [outs, p] : dist) out << settings << ',' << outs << ',' << p << '\n';
  return out.str();
}

void save_behavior_csv(const Behavior& b, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write behavior file " + path);
  out << behavior_to_csv(b);
}

namespace {

double lambda_max_of(const ComplexMatrix& m) { return eigvalsh(m, 1e-6).back(); }

MeasurementAssignment perturb(const MeasurementAssignment& m, std::size_t party, char direction,
                              double delta) {
  MeasurementAssignment p = m;
  const ComplexMatrix& X = m.x_obs[party];
  const ComplexMatrix& Z = m.z_obs[party];
  if (direction == 'X')
    p.x_obs[party] = scaled(X, 1 - delta * delta / 2) + scaled(Z, delta);
  else
    p.z_obs[party] = scaled(Z, 1 - delta * delta / 2) + scaled(X, delta);
  return p;
}

}  // namespace

CandidateReport verify_candidate(const BellFunctional& f, const MeasurementAssignment& m,
                                 const PureState& target, double delta) {
  if (delta <= 0 || delta > 0.1)
    throw std::invalid_argument("verify_candidate: delta outside (0, 0.1]");
  CandidateReport r;
  const ComplexMatrix B = realize_operator(f, m);
  EigenDecomposition d = eig_hermitian(B, 1e-9);
  const std::size_t n = B.rows();
  r.lambda_max = d.eigenvalues[n - 1];
  r.gap = d.eigenvalues[n - 1] - d.eigenvalues[n - 2];
  cplx ov = 0;
  for (std::size_t i = 0; i < n; ++i) ov += std::conj(target.amps[i]) * d.eigenvectors(i, n - 1);
  r.target_overlap = std::norm(ov);
  r.unique_max_is_target = r.gap > 1e-6 && r.target_overlap >= 1 - 1e-9;
  r.lambda_is_one = std::abs(r.lambda_max - 1.0) <= 1e-9;

  r.perturbations_pass = true;
  for (std::size_t party = 0; party < f.parties; ++party) {
    for (char dir : {'X', 'Z'}) {
      auto lam = [&](double dd) {
        return lambda_max_of(realize_operator(f, perturb(m, party, dir, dd)));
      };
      const double l0 = r.lambda_max;
      const double lp = lam(delta), lm = lam(-delta);
      const double lp2 = lam(delta / 2), lm2 = lam(-delta / 2);
      PerturbationCheck pc;
      pc.party = party;
      pc.direction = dir;
      pc.first_order = (lp - lm) / 2;
      const double c1 = -(lp + lm - 2 * l0) / (delta * delta);
      const double c2 = -(lp2 + lm2 - 2 * l0) / (delta * delta / 4);
      pc.curvature = (4 * c2 - c1) / 3;  // Richardson extrapolation
      pc.stationary = std::abs(pc.first_order) <= 1e-6 * delta;
      pc.concave = pc.curvature > 1e-6;
      r.perturbations_pass = r.perturbations_pass && pc.stationary && pc.concave;
      r.perturbations.push_back(pc);
    }
  }
  return r;
}

std::string to_json(const CandidateReport& r) {
  nlohmann::json j;
  j["lambda_max"] = r.lambda_max;
  j["gap"] = r.gap;
  j["target_overlap"] = r.target_overlap;
  j["unique_max_is_target"] = r.unique_max_is_target;
  j["lambda_is_one"] = r.lambda_is_one;
  j["perturbations_pass"] = r.perturbations_pass;
  j["passed"] = r.passed();
  j["perturbations"] = nlohmann::json::array();
  for (const auto& pc : r.perturbations)
    j["perturbations"].push_back({{"party", pc.party},
                                  {"direction", std::string(1, pc.direction)},
                                  {"first_order", pc.first_order},
                                  {"curvature", pc.curvature},
                                  {"stationary", pc.stationary},
                                  {"concave", pc.concave}});
  return j.dump(2);
}

}  // namespace dicert
