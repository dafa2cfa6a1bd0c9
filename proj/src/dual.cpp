#include "lieschatten/dual.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace lieschatten {

namespace {

double parity_sign(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// d^j_{j,m}(theta), doubled arguments.
double top_row(int two_j, int two_m, double theta) {
  const int up = (two_j + two_m) / 2, down = (two_j - two_m) / 2;
  const double log_binom = std::lgamma(two_j + 1.0) - std::lgamma(up + 1.0) - std::lgamma(down + 1.0);
  return parity_sign(down) * std::exp(0.5 * log_binom) * std::pow(std::cos(theta / 2), up) *
         std::pow(std::sin(theta / 2), down);
}

// d^{j0}_{m'm} with j0 = max(|m'|, |m|).
double ladder_start(int two_mp, int two_m, double theta) {
  if (std::abs(two_mp) < std::abs(two_m)) {
    return parity_sign((two_mp - two_m) / 2) * ladder_start(two_m, two_mp, theta);
  }
  const int two_j0 = std::abs(two_mp);
  if (two_mp == two_j0) return top_row(two_j0, two_m, theta);
  return parity_sign((two_j0 + two_m) / 2) * top_row(two_j0, -two_m, theta);
}

struct TorusBox {
  int n;
  int radius;
  template <class F>
  void for_each(F&& f) const {
    std::vector<int> k(n, -radius);
    while (true) {
      f(k);
      int i = n - 1;
      for (; i >= 0; --i) {
        if (++k[i] <= radius) break;
        k[i] = -radius;
      }
      if (i < 0) return;
    }
  }
};

void sort_duals(std::vector<IrrepInfo>& duals) {
  std::sort(duals.begin(), duals.end(), [](const IrrepInfo& a, const IrrepInfo& b) {
    if (a.casimir != b.casimir) return a.casimir < b.casimir;
    return a.label < b.label;
  });
}

std::vector<IrrepInfo> enumerate_if(const GroupId& group, int box_radius, auto&& keep) {
  std::vector<IrrepInfo> out;
  if (group.is_torus()) {
    TorusBox{group.n, box_radius}.for_each([&](const std::vector<int>& k) {
      IrrepInfo info = irrep_info(IrrepLabel::torus(k));
      if (keep(info)) out.push_back(std::move(info));
    });
  } else {
    const int step = group.kind == GroupKind::SU2 ? 1 : 2;
    for (int two_l = 0; two_l <= box_radius; two_l += step) {
      IrrepInfo info = irrep_info(group.kind == GroupKind::SU2 ? IrrepLabel::su2(two_l)
                                                               : IrrepLabel::so3(two_l / 2));
      if (keep(info)) out.push_back(std::move(info));
    }
  }
  sort_duals(out);
  return out;
}

}  // namespace

IrrepLabel IrrepLabel::torus(std::vector<int> k) {
  const int n = static_cast<int>(k.size());
  return {GroupId::torus(n), std::move(k)};
}

int IrrepLabel::two_l() const {
  switch (group.kind) {
    case GroupKind::SU2: return index.at(0);
    case GroupKind::SO3: return 2 * index.at(0);
    case GroupKind::Torus: break;
  }
  throw std::logic_error("two_l() on a torus label");
}

int IrrepLabel::band() const {
  if (!group.is_torus()) return two_l();
  int b = 0;
  for (int k : index) b = std::max(b, std::abs(k));
  return b;
}

double IrrepLabel::casimir() const {
  if (group.is_torus()) {
    double s = 0;
    for (int k : index) s += static_cast<double>(k) * k;
    return s;
  }
  const double tl = two_l();
  return tl * (tl + 2) / 4.0;
}

std::string IrrepLabel::to_string() const {
  if (group.is_torus()) {
    if (index.size() == 1) return std::to_string(index[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < index.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(index[i]);
    }
    return s + ")";
  }
  const int tl = two_l();
  return tl % 2 == 0 ? std::to_string(tl / 2) : std::to_string(tl) + "/2";
}

IrrepInfo irrep_info(const IrrepLabel& label) {
  if (label.group.kind == GroupKind::SU2 && label.index.at(0) < 0) {
    throw std::invalid_argument("negative SU2 label");
  }
  if (label.group.kind == GroupKind::SO3 && label.index.at(0) < 0) {
    throw std::invalid_argument("negative SO3 label");
  }
  const double c = label.casimir();
  return {label, label.dim(), c, std::sqrt(1.0 + c)};
}

std::vector<IrrepInfo> enumerate_dual(const GroupId& group, double cutoff) {
  if (!(cutoff >= 1)) throw std::invalid_argument("dual cutoff must be >= 1");
  const double limit = cutoff * cutoff * (1 + 1e-14);
  int radius = 0;
  if (group.is_torus()) {
    radius = static_cast<int>(std::floor(std::sqrt(limit - 1)));
  } else {
    // 1 + l(l+1) <= cutoff^2  <=>  2l <= sqrt(4 cutoff^2 - 3) - 1
    radius = static_cast<int>(std::floor(std::sqrt(4 * limit - 3) - 1 + 1e-12));
  }
  return enumerate_if(group, radius, [&](const IrrepInfo& i) { return 1 + i.casimir <= limit; });
}

std::vector<IrrepInfo> enumerate_dual_band(const GroupId& group, int bandlimit) {
  if (bandlimit < 0) throw std::invalid_argument("bandlimit must be nonnegative");
  return enumerate_if(group, bandlimit, [&](const IrrepInfo& i) { return i.label.band() <= bandlimit; });
}

int max_band(const std::vector<IrrepInfo>& duals) {
  int b = 0;
  for (const IrrepInfo& i : duals) b = std::max(b, i.label.band());
  return b;
}

void wigner_small_d_ladder(int two_mp, int two_m, int two_jmax, double theta, double* out) {
  const int two_j0 = std::max(std::abs(two_mp), std::abs(two_m));
  if (two_jmax < two_j0 || (two_jmax - two_j0) % 2 != 0) {
    throw std::invalid_argument("wigner ladder: inconsistent j range");
  }
  const double mp = two_mp / 2.0, m = two_m / 2.0;
  const double ct = std::cos(theta);
  double prev = 0.0;
  double cur = ladder_start(two_mp, two_m, theta);
  out[0] = cur;
  int k = 1;
  for (int two_j = two_j0; two_j < two_jmax; two_j += 2, ++k) {
    const double j = two_j / 2.0;
    const double j1 = j + 1;
    const double a = j1 * (2 * j + 1) / std::sqrt((j1 * j1 - mp * mp) * (j1 * j1 - m * m));
    double next;
    if (two_j == 0) {
      next = a * ct * cur;
    } else {
      const double b = std::sqrt((j * j - mp * mp) * (j * j - m * m)) / (j * (2 * j + 1));
      next = a * ((ct - mp * m / (j * j1)) * cur - b * prev);
    }
    prev = cur;
    cur = next;
    out[k] = cur;
  }
}

double wigner_small_d(int two_j, int two_mp, int two_m, double theta) {
  const int two_j0 = std::max(std::abs(two_mp), std::abs(two_m));
  if (two_j0 > two_j) return 0.0;
  std::vector<double> buf((two_j - two_j0) / 2 + 1);
  wigner_small_d_ladder(two_mp, two_m, two_j, theta, buf.data());
  return buf.back();
}

Eigen::MatrixXd wigner_small_d_matrix(int two_j, double theta) {
  const int d = two_j + 1;
  Eigen::MatrixXd out(d, d);
  std::vector<double> buf(d);
  for (int a = 0; a < d; ++a) {
    const int two_mp = 2 * a - two_j;
    for (int b = 0; b < d; ++b) {
      const int two_m = 2 * b - two_j;
      const int two_j0 = std::max(std::abs(two_mp), std::abs(two_m));
      wigner_small_d_ladder(two_mp, two_m, two_j, theta, buf.data());
      out(a, b) = buf[(two_j - two_j0) / 2];
    }
  }
  return out;
}

std::vector<Eigen::MatrixXd> wigner_small_d_table(int two_jmax, double theta) {
  std::vector<Eigen::MatrixXd> table(two_jmax + 1);
  for (int tj = 0; tj <= two_jmax; ++tj) table[tj].resize(tj + 1, tj + 1);
  std::vector<double> buf(two_jmax + 1);
  for (int parity = 0; parity <= 1; ++parity) {
    int top = two_jmax;
    if ((top - parity) % 2 != 0) --top;
    if (top < parity) continue;
    for (int two_mp = -top; two_mp <= top; two_mp += 2) {
      for (int two_m = -top; two_m <= top; two_m += 2) {
        const int two_j0 = std::max(std::abs(two_mp), std::abs(two_m));
        wigner_small_d_ladder(two_mp, two_m, top, theta, buf.data());
        for (int tj = two_j0, k = 0; tj <= top; tj += 2, ++k) {
          table[tj]((two_mp + tj) / 2, (two_m + tj) / 2) = buf[k];
        }
      }
    }
  }
  // entries with |m| > j were never touched: they do not exist
  return table;
}

Eigen::MatrixXcd rep_matrix(const IrrepLabel& label, const GroupPoint& x, const Eigen::MatrixXd& small_d) {
  if (!(label.group == x.group)) throw std::invalid_argument("label and point belong to different groups");
  if (label.group.is_torus()) {
    double phase = 0;
    for (std::size_t i = 0; i < label.index.size(); ++i) phase += label.index[i] * x.coords(i);
    Eigen::MatrixXcd out(1, 1);
    out(0, 0) = std::polar(1.0, 2 * std::numbers::pi * phase);
    return out;
  }
  const int two_j = label.two_l();
  const int d = two_j + 1;
  const double phi = x.coords(0), psi = x.coords(2);
  Eigen::VectorXcd left(d), right(d);
  for (int a = 0; a < d; ++a) {
    const double m = (2 * a - two_j) / 2.0;
    left(a) = std::polar(1.0, -m * phi);
    right(a) = std::polar(1.0, -m * psi);
  }
  return left.asDiagonal() * small_d.cast<std::complex<double>>() * right.asDiagonal();
}

Eigen::MatrixXcd rep_matrix(const IrrepLabel& label, const GroupPoint& x) {
  if (label.group.is_torus()) return rep_matrix(label, x, Eigen::MatrixXd());
  if (label.group.kind == GroupKind::SO3 && label.index.at(0) < 0) {
    throw std::invalid_argument("SO3 label must be a nonnegative integer");
  }
  if (!(label.group == x.group)) throw std::invalid_argument("label and point belong to different groups");
  return rep_matrix(label, x, wigner_small_d_matrix(label.two_l(), x.coords(1)));
}

std::vector<BasisFunction> peter_weyl_basis(const std::vector<IrrepInfo>& duals) {
  std::vector<BasisFunction> basis;
  basis.reserve(basis_size(duals));
  for (const IrrepInfo& info : duals) {
    const double norm = std::sqrt(static_cast<double>(info.dim));
    for (int i = 0; i < info.dim; ++i)
      for (int j = 0; j < info.dim; ++j) basis.push_back({info.label, i, j, norm});
  }
  return basis;
}

std::vector<BasisFunction> peter_weyl_basis(const GroupId& group, double cutoff) {
  return peter_weyl_basis(enumerate_dual(group, cutoff));
}

std::size_t basis_size(const std::vector<IrrepInfo>& duals) {
  std::size_t n = 0;
  for (const IrrepInfo& i : duals) n += static_cast<std::size_t>(i.dim) * i.dim;
  return n;
}

}  // namespace lieschatten
