#include "lieschatten/groups.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lieschatten {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Below this, sin(theta/2) or cos(theta/2) is treated as an exact zero and
// the Euler split collapses onto psi.
constexpr double kGimbalTol = 1e-13;
constexpr double kWrapSnap = 1e-13;

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0) r += period;
  if (r >= period - kWrapSnap * period) r = 0.0;
  return r;
}

double periodic_gap(double a, double b, double period) {
  const double d = wrap(a - b, period);
  return std::min(d, period - d);
}

bool in_euler_range(const GroupId& g, const Eigen::VectorXd& c) {
  const double psi_period = g.kind == GroupKind::SU2 ? 2 * kTwoPi : kTwoPi;
  return c(0) >= 0 && c(0) < kTwoPi && c(1) >= 0 && c(1) <= kPi && c(2) >= 0 &&
         c(2) < psi_period;
}

void require_same_group(const GroupPoint& x, const GroupPoint& y) {
  if (!(x.group == y.group)) {
    throw std::invalid_argument("group mismatch: " + x.group.name() + " vs " + y.group.name());
  }
}

}  // namespace

GroupId GroupId::torus(int n) {
  if (n < 1) throw std::invalid_argument("torus rank must be positive");
  return {GroupKind::Torus, n};
}

GroupId GroupId::parse(const std::string& name) {
  if (name == "su2") return su2();
  if (name == "so3") return so3();
  if (name.size() >= 2 && name[0] == 't') {
    int n = 0;
    for (std::size_t i = 1; i < name.size(); ++i) {
      if (name[i] < '0' || name[i] > '9' || n > 64) {
        throw std::invalid_argument("unknown group '" + name + "'");
      }
      n = 10 * n + (name[i] - '0');
    }
    if (n >= 1 && n <= 64 && name[1] != '0') return torus(n);
  }
  throw std::invalid_argument("unknown group '" + name + "' (expected t<n>, su2 or so3)");
}

std::string GroupId::name() const {
  switch (kind) {
    case GroupKind::Torus: return "t" + std::to_string(n);
    case GroupKind::SU2: return "su2";
    case GroupKind::SO3: return "so3";
  }
  return {};
}

GroupPoint GroupPoint::make(const GroupId& group, const Eigen::VectorXd& coords) {
  if (coords.size() != group.coord_dim()) {
    throw std::invalid_argument("coordinate vector has wrong length for " + group.name());
  }
  GroupPoint p{group, coords};
  if (group.is_torus()) {
    for (Eigen::Index i = 0; i < p.coords.size(); ++i) p.coords(i) = wrap(p.coords(i), 1.0);
    return p;
  }
  if (in_euler_range(group, coords)) return p;
  // Out-of-range angles: go through the matrix realization for a canonical split.
  if (group.kind == GroupKind::SU2) return su2_from_matrix(su2_matrix(p));
  return so3_from_matrix(so3_matrix(p));
}

GroupPoint GroupPoint::euler(const GroupId& group, double phi, double theta, double psi) {
  if (group.is_torus()) throw std::invalid_argument("Euler angles need su2 or so3");
  return make(group, Eigen::Vector3d(phi, theta, psi));
}

GroupPoint identity(const GroupId& group) {
  return {group, Eigen::VectorXd::Zero(group.coord_dim())};
}

Eigen::Matrix2cd su2_matrix(const GroupPoint& x) {
  const double phi = x.coords(0), theta = x.coords(1), psi = x.coords(2);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const std::complex<double> ep = std::polar(1.0, (phi + psi) / 2);
  const std::complex<double> em = std::polar(1.0, (phi - psi) / 2);
  Eigen::Matrix2cd u;
  u << c * ep, s * em, -s * std::conj(em), c * std::conj(ep);
  return u;
}

GroupPoint su2_from_matrix(const Eigen::Matrix2cd& u) {
  const GroupId g = GroupId::su2();
  const double a = std::abs(u(0, 0)), b = std::abs(u(0, 1));
  double phi = 0, theta = 0, psi = 0;
  if (b < kGimbalTol) {
    psi = 2 * std::arg(u(0, 0));
  } else if (a < kGimbalTol) {
    theta = kPi;
    psi = -2 * std::arg(u(0, 1));
  } else {
    theta = 2 * std::atan2(b, a);
    const double sum = std::arg(u(0, 0)), diff = std::arg(u(0, 1));
    phi = sum + diff;
    psi = sum - diff;
    // (phi, psi) -> (phi + 2pi k, psi + 2pi k) leaves the element unchanged.
    double k = std::floor(phi / kTwoPi);
    // a phi that would snap from just below 2pi to 0 must carry psi along
    if (phi - kTwoPi * k >= kTwoPi * (1 - kWrapSnap)) k += 1;
    phi -= kTwoPi * k;
    psi -= kTwoPi * k;
  }
  Eigen::Vector3d c(wrap(phi, kTwoPi), theta, wrap(psi, 2 * kTwoPi));
  return {g, c};
}

Eigen::Matrix3d so3_matrix(const GroupPoint& x) {
  using Eigen::AngleAxisd;
  using Eigen::Vector3d;
  return (AngleAxisd(x.coords(0), Vector3d::UnitZ()) * AngleAxisd(x.coords(1), Vector3d::UnitY()) *
          AngleAxisd(x.coords(2), Vector3d::UnitZ()))
      .toRotationMatrix();
}

GroupPoint so3_from_matrix(const Eigen::Matrix3d& r) {
  const double st = std::hypot(r(0, 2), r(1, 2));
  double phi = 0, theta = 0, psi = 0;
  if (st < kGimbalTol) {
    if (r(2, 2) > 0) {
      psi = std::atan2(r(1, 0), r(0, 0));
    } else {
      theta = kPi;
      psi = -std::atan2(-r(1, 0), r(1, 1));
    }
  } else {
    theta = std::atan2(st, r(2, 2));
    phi = std::atan2(r(1, 2), r(0, 2));
    psi = std::atan2(r(2, 1), -r(2, 0));
  }
  Eigen::Vector3d c(wrap(phi, kTwoPi), theta, wrap(psi, kTwoPi));
  return {GroupId::so3(), c};
}

GroupPoint multiply(const GroupPoint& x, const GroupPoint& y) {
  require_same_group(x, y);
  switch (x.group.kind) {
    case GroupKind::Torus: return GroupPoint::make(x.group, x.coords + y.coords);
    case GroupKind::SU2: return su2_from_matrix(su2_matrix(x) * su2_matrix(y));
    case GroupKind::SO3: return so3_from_matrix(so3_matrix(x) * so3_matrix(y));
  }
  return x;
}

GroupPoint inverse(const GroupPoint& x) {
  switch (x.group.kind) {
    case GroupKind::Torus: return GroupPoint::make(x.group, -x.coords);
    case GroupKind::SU2: return su2_from_matrix(su2_matrix(x).adjoint());
    case GroupKind::SO3: return so3_from_matrix(so3_matrix(x).transpose());
  }
  return x;
}

double point_distance(const GroupPoint& x, const GroupPoint& y) {
  require_same_group(x, y);
  switch (x.group.kind) {
    case GroupKind::Torus: {
      double d = 0;
      for (Eigen::Index i = 0; i < x.coords.size(); ++i) {
        d = std::max(d, periodic_gap(x.coords(i), y.coords(i), 1.0));
      }
      return d;
    }
    case GroupKind::SU2: return (su2_matrix(x) - su2_matrix(y)).cwiseAbs().maxCoeff();
    case GroupKind::SO3: return (so3_matrix(x) - so3_matrix(y)).cwiseAbs().maxCoeff();
  }
  return 0;
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= count; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      dp = count * (z * p1 - p2) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // ascending order
    nodes[i] = -z;
    nodes[count - 1 - i] = z;
    weights[i] = weights[count - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

QuadratureRule torus_quadrature(int n, int bandlimit, int points_per_axis) {
  if (bandlimit < 0) throw std::invalid_argument("bandlimit must be nonnegative");
  if (points_per_axis < 2 * bandlimit + 1) {
    throw std::invalid_argument("torus grid needs at least 2B+1 points per axis");
  }
  QuadratureRule rule;
  rule.group = GroupId::torus(n);
  rule.bandlimit = bandlimit;
  rule.grid_points = points_per_axis;
  const int m = points_per_axis;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(m);
  rule.nodes.reserve(total);
  rule.weights.assign(total, 1.0 / static_cast<double>(total));
  std::vector<int> idx(n, 0);
  for (std::size_t t = 0; t < total; ++t) {
    Eigen::VectorXd c(n);
    // last axis fastest
    for (int i = 0; i < n; ++i) c(i) = static_cast<double>(idx[i]) / m;
    rule.nodes.push_back({rule.group, c});
    for (int i = n - 1; i >= 0; --i) {
      if (++idx[i] < m) break;
      idx[i] = 0;
    }
  }
  return rule;
}

QuadratureRule haar_quadrature(const GroupId& group, int bandlimit) {
  if (bandlimit < 0) throw std::invalid_argument("bandlimit must be nonnegative");
  if (group.is_torus()) return torus_quadrature(group.n, bandlimit, 2 * bandlimit + 1);

  // phi and psi: uniform over the full period, theta: Gauss-Legendre in cos(theta).
  const int n_az = 2 * bandlimit + 2;
  const int n_gl = bandlimit + 1;
  const double psi_period = group.kind == GroupKind::SU2 ? 2 * kTwoPi : kTwoPi;
  std::vector<double> x, w;
  gauss_legendre(n_gl, x, w);

  QuadratureRule rule;
  rule.group = group;
  rule.bandlimit = bandlimit;
  rule.nodes.reserve(static_cast<std::size_t>(n_az) * n_gl * n_az);
  rule.weights.reserve(rule.nodes.capacity());
  const double az_weight = 1.0 / (static_cast<double>(n_az) * n_az);
  for (int a = 0; a < n_az; ++a) {
    const double phi = kTwoPi * a / n_az;
    for (int t = 0; t < n_gl; ++t) {
      const double theta = std::acos(x[t]);
      for (int b = 0; b < n_az; ++b) {
        const double psi = psi_period * b / n_az;
        rule.nodes.push_back({group, Eigen::Vector3d(phi, theta, psi)});
        rule.weights.push_back(az_weight * w[t] / 2.0);
      }
    }
  }
  return rule;
}

GroupPoint one_parameter(const GroupId& group, int axis, double t) {
  if (axis < 0 || axis >= group.dim()) throw std::invalid_argument("generator index out of range");
  if (group.is_torus()) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(group.n);
    c(axis) = t / kTwoPi;
    return GroupPoint::make(group, c);
  }
  switch (axis) {
    case 0:  // Rz(-pi/2) Ry(t) Rz(pi/2) rotates about x
      return multiply(multiply(GroupPoint::euler(group, 0, 0, -kPi / 2), GroupPoint::euler(group, 0, t, 0)),
                      GroupPoint::euler(group, 0, 0, kPi / 2));
    case 1: return GroupPoint::euler(group, 0, t, 0);
    default: return GroupPoint::euler(group, 0, 0, t);
  }
}

}  // namespace lieschatten
