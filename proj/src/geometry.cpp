#include "skorokhod/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "skorokhod/errors.hpp"

namespace skorokhod {

// ---------------------------------------------------------------- FaceSet

FaceSet::FaceSet(std::initializer_list<int> idx) : FaceSet(std::vector<int>(idx)) {}

FaceSet::FaceSet(std::vector<int> idx) : idx_(std::move(idx)) {
  std::sort(idx_.begin(), idx_.end());
  for (std::size_t k = 0; k < idx_.size(); ++k) {
    if (idx_[k] < 0) throw Error(ErrorKind::argument, "face index must be nonnegative");
    if (k > 0 && idx_[k] == idx_[k - 1]) throw Error(ErrorKind::argument, "duplicate face index");
  }
}

FaceSet FaceSet::from_mask(std::uint64_t mask) {
  std::vector<int> idx;
  for (int i = 0; i < 64; ++i) {
    if (mask & (std::uint64_t{1} << i)) idx.push_back(i);
  }
  return FaceSet(std::move(idx));
}

bool FaceSet::contains(int i) const noexcept {
  return std::binary_search(idx_.begin(), idx_.end(), i);
}

bool FaceSet::is_subset_of(const FaceSet& other) const noexcept {
  return std::includes(other.idx_.begin(), other.idx_.end(), idx_.begin(), idx_.end());
}

FaceSet FaceSet::unite(const FaceSet& other) const {
  std::vector<int> out;
  std::set_union(idx_.begin(), idx_.end(), other.idx_.begin(), other.idx_.end(),
                 std::back_inserter(out));
  return FaceSet(std::move(out));
}

std::uint64_t FaceSet::mask() const {
  std::uint64_t m = 0;
  for (int i : idx_) {
    if (i >= 64) throw Error(ErrorKind::size_limit, "face index too large for mask");
    m |= std::uint64_t{1} << i;
  }
  return m;
}

void FaceSet::check_range(int num_faces) const {
  if (!idx_.empty() && idx_.back() >= num_faces) {
    throw Error(ErrorKind::domain_violation,
                "face index " + std::to_string(idx_.back() + 1) + " out of range 1.." +
                    std::to_string(num_faces));
  }
}

std::string FaceSet::to_string() const {
  std::string s;
  for (std::size_t k = 0; k < idx_.size(); ++k) {
    if (k > 0) s += '|';
    s += std::to_string(idx_[k] + 1);
  }
  return s;
}

FaceSet FaceSet::parse(const std::string& text) {
  std::vector<int> idx;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    int v = 0;
    try {
      v = std::stoi(token);
    } catch (const std::exception&) {
      throw Error(ErrorKind::argument, "bad face index '" + token + "'");
    }
    if (v < 1) throw Error(ErrorKind::argument, "face indices are 1-based");
    idx.push_back(v - 1);
    token.clear();
  };
  for (char ch : text) {
    if (ch == '|' || ch == '+' || ch == ';' || ch == ',' || ch == ' ') {
      flush();
    } else {
      token += ch;
    }
  }
  flush();
  return FaceSet(std::move(idx));
}

// ---------------------------------------------------------------- SPData

const char* to_string(PiFamily f) noexcept {
  switch (f) {
    case PiFamily::general: return "general";
    case PiFamily::one_dim: return "one_dim";
    case PiFamily::orthant: return "orthant";
    case PiFamily::custom_pi: return "custom_pi";
  }
  return "general";
}

PiFamily parse_pi_family(const std::string& name) {
  if (name == "general") return PiFamily::general;
  if (name == "one_dim") return PiFamily::one_dim;
  if (name == "orthant") return PiFamily::orthant;
  if (name == "custom_pi") return PiFamily::custom_pi;
  throw Error(ErrorKind::argument, "unknown family '" + name + "'");
}

namespace {

// Max of s subject to <x, n_i> = c_i on `eq` and <x, n_j> - s >= c_j on the
// remaining faces, s <= 1; x is restricted to the span of the normals so the
// region is pointed.
SmallLpResult max_slack(const SPData& sp, const FaceSet& eq) {
  const Mat u = range_basis(sp.normals());
  const int r = static_cast<int>(u.cols());
  const int n = r + 1;
  const int neq = static_cast<int>(eq.size());
  const int nin = sp.num_faces() - neq + 1;
  Mat aeq(neq, n);
  Vec beq(neq);
  Mat ain(nin, n);
  Vec bin(nin);
  int e = 0;
  int q = 0;
  for (int i = 0; i < sp.num_faces(); ++i) {
    const Eigen::RowVectorXd nu = sp.normal(i).transpose() * u;
    if (eq.contains(i)) {
      aeq.row(e).head(r) = nu;
      aeq(e, r) = 0.0;
      beq(e) = sp.offset(i);
      ++e;
    } else {
      ain.row(q).head(r) = -nu;
      ain(q, r) = 1.0;
      bin(q) = -sp.offset(i);
      ++q;
    }
  }
  ain.row(q).setZero();
  ain(q, r) = 1.0;
  bin(q) = 1.0;
  Vec c = Vec::Zero(n);
  c(r) = 1.0;
  SmallLpResult res = maximize_by_vertices(c, aeq, beq, ain, bin);
  if (res.feasible) res.x = u * res.x.head(r);
  return res;
}

int coordinate_axis(const Vec& n) {
  int axis = -1;
  for (Eigen::Index m = 0; m < n.size(); ++m) {
    if (n(m) == 0.0) continue;
    if (std::abs(n(m)) != 1.0 || axis >= 0) return -1;
    axis = static_cast<int>(m);
  }
  return axis;
}

}  // namespace

SPData::SPData(Mat normals, Vec offsets, Mat directions, PiFamily family, PiFunction custom_pi)
    : normals_(std::move(normals)),
      offsets_(std::move(offsets)),
      directions_(std::move(directions)),
      family_(family),
      custom_pi_(std::move(custom_pi)) {
  const auto j = normals_.rows();
  const auto n = normals_.cols();
  if (j < 1 || n < 1) throw Error(ErrorKind::argument, "SP data needs J >= 1 and N >= 1");
  if (offsets_.size() != n || directions_.rows() != j || directions_.cols() != n) {
    throw Error(ErrorKind::argument, "SP data dimensions disagree");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const std::string face = std::to_string(i + 1);
    if (std::abs(normals_.col(i).norm() - 1.0) > 1e-12) {
      throw Error(ErrorKind::argument, "invariant |n_i| = 1 violated for face " + face);
    }
    if (std::abs(directions_.col(i).dot(normals_.col(i)) - 1.0) > 1e-12) {
      throw Error(ErrorKind::argument, "invariant <d_i, n_i> = 1 violated for face " + face);
    }
  }
  switch (family_) {
    case PiFamily::one_dim:
      if (j != 1 || n != 1) throw Error(ErrorKind::argument, "family one_dim needs J = N = 1");
      break;
    case PiFamily::orthant:
      if (j != 2 || n != 2) throw Error(ErrorKind::argument, "family orthant needs J = N = 2");
      break;
    case PiFamily::custom_pi:
      if (!custom_pi_) throw Error(ErrorKind::argument, "family custom_pi needs a pi function");
      break;
    case PiFamily::general:
      break;
  }
  const SmallLpResult feas = max_slack(*this, FaceSet{});
  if (!feas.feasible || feas.value < -1e-9) {
    throw Error(ErrorKind::argument, "invariant G nonempty violated");
  }
}

Mat SPData::normals_of(const FaceSet& faces) const {
  Mat out(dim(), static_cast<Eigen::Index>(faces.size()));
  Eigen::Index k = 0;
  for (int i : faces) out.col(k++) = normals_.col(i);
  return out;
}

Mat SPData::directions_of(const FaceSet& faces) const {
  Mat out(dim(), static_cast<Eigen::Index>(faces.size()));
  Eigen::Index k = 0;
  for (int i : faces) out.col(k++) = directions_.col(i);
  return out;
}

SPData SPData::with_directions(Mat directions) const {
  return SPData(normals_, offsets_, std::move(directions), family_, custom_pi_);
}

double SPData::slack(const Vec& x) const {
  return (normals_.transpose() * x - offsets_).minCoeff();
}

// ---------------------------------------------------------------- queries

FaceSet active_faces(const SPData& sp, const Vec& x, double tol) {
  if (x.size() != sp.dim()) throw Error(ErrorKind::argument, "point dimension mismatch");
  std::vector<int> idx;
  for (int i = 0; i < sp.num_faces(); ++i) {
    const double g = sp.normal(i).dot(x) - sp.offset(i);
    if (g < -tol) {
      throw Error(ErrorKind::domain_violation,
                  "point violates face " + std::to_string(i + 1) + " by " + std::to_string(-g));
    }
    if (g <= tol) idx.push_back(i);
  }
  return FaceSet(std::move(idx));
}

SubspaceBases subspace_bases(const SPData& sp, const FaceSet& faces) {
  faces.check_range(sp.num_faces());
  SubspaceBases b;
  b.h_basis = orthogonal_complement(sp.normals_of(faces), sp.dim());
  b.d_basis = range_basis(sp.directions_of(faces));
  return b;
}

QMatrix q_matrix(const SPData& sp) {
  const int n = sp.num_faces();
  if (n != sp.dim()) {
    throw Error(ErrorKind::unsupported_configuration, "Q matrix needs N = J");
  }
  QMatrix out;
  out.q = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) out.q(i, j) = std::abs(sp.direction(i).dot(sp.normal(j)));
    }
  }
  // Power iteration on Q + I with Collatz-Wielandt bracketing; the shift keeps
  // the dominant eigenvalue simple in modulus for nonnegative Q.
  const Mat a = out.q + Mat::Identity(n, n);
  Vec v = Vec::Ones(n);
  bool converged = false;
  for (int it = 0; it < 200000 && !converged; ++it) {
    const Vec w = a * v;
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (int i = 0; i < n; ++i) {
      const double ratio = w(i) / v(i);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    if (hi - lo <= 1e-13 * hi) {
      out.spectral_radius = 0.5 * (lo + hi) - 1.0;
      converged = true;
    }
    v = w / w.maxCoeff();
    if (v.minCoeff() <= 0.0) break;
  }
  if (!converged) {
    // Reducible Q can leave zero entries in the iterate; fall back to a dense solve.
    Eigen::EigenSolver<Mat> es(out.q);
    out.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  if (std::abs(out.spectral_radius) < 1e-14) out.spectral_radius = 0.0;
  return out;
}

std::optional<Vec> face_set_witness(const SPData& sp, const FaceSet& faces) {
  faces.check_range(sp.num_faces());
  const SmallLpResult res = max_slack(sp, faces);
  if (!res.feasible || res.value <= 1e-9) return std::nullopt;
  return res.x;
}

namespace {

bool direction_cone_contains_line(const SPData& sp, const FaceSet& faces) {
  const auto& idx = faces.indices();
  const int m = static_cast<int>(idx.size());
  const int max_size = std::min(m, sp.dim() + 1);
  for (int k = 2; k <= max_size; ++k) {
    bool found = false;
    for_each_combination(m, k, [&](const std::vector<int>& pick) {
      Mat d(sp.dim(), k);
      for (int j = 0; j < k; ++j) d.col(j) = sp.direction(idx[static_cast<std::size_t>(pick[static_cast<std::size_t>(j)])]);
      Eigen::JacobiSVD<Mat> svd(d, Eigen::ComputeFullV);
      const int rank = numerical_rank(d);
      if (rank != k - 1) return true;
      Vec null = svd.matrixV().col(k - 1);
      if (null.sum() < 0) null = -null;
      if (null.minCoeff() > 1e-12) {
        found = true;
        return false;
      }
      return true;
    });
    if (found) return true;
  }
  return false;
}

}  // namespace

BoundaryClassification classify_boundary(const SPData& sp, int max_faces) {
  const int n = sp.num_faces();
  if (n > max_faces) {
    throw Error(ErrorKind::size_limit, "classify_boundary supports at most " +
                                           std::to_string(max_faces) + " faces");
  }
  BoundaryClassification out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const FaceSet faces = FaceSet::from_mask(mask);
    const auto witness = face_set_witness(sp, faces);
    if (!witness) continue;
    FaceSetClass c;
    c.faces = faces;
    c.smooth = faces.size() == 1;
    c.nonsmooth = faces.size() >= 2;
    c.witness = *witness;
    c.in_v = direction_cone_contains_line(sp, faces);
    if (c.nonsmooth) {
      const SubspaceBases b = subspace_bases(sp, faces);
      Mat both(sp.dim(), b.h_basis.cols() + b.d_basis.cols());
      both << b.h_basis, b.d_basis;
      c.in_w = numerical_rank(both) < sp.dim();
    }
    out.feasible.push_back(std::move(c));
  }
  return out;
}

bool BoundaryClassification::v_empty() const {
  return std::none_of(feasible.begin(), feasible.end(), [](const auto& c) { return c.in_v; });
}

bool BoundaryClassification::w_empty() const {
  return std::none_of(feasible.begin(), feasible.end(), [](const auto& c) { return c.in_w; });
}

const FaceSetClass* BoundaryClassification::find(const FaceSet& faces) const {
  for (const auto& c : feasible) {
    if (c.faces == faces) return &c;
  }
  return nullptr;
}

// ---------------------------------------------------------------- pi

namespace {

Vec snap_to_faces(const SPData& sp, Vec p, const std::vector<int>& pushed) {
  for (int i : pushed) {
    const Vec n = sp.normal(i);
    const int axis = coordinate_axis(n);
    if (axis >= 0) p(axis) = sp.offset(i) * n(axis);
  }
  return p;
}

Vec project_orthant(const SPData& sp, const Vec& x) {
  const double tol = 1e-12 * (1.0 + x.cwiseAbs().maxCoeff());
  auto valid = [&](const Vec& p) { return sp.slack(p) >= -tol; };
  for (int i = 0; i < 2; ++i) {
    const double r = sp.offset(i) - sp.normal(i).dot(x);
    if (r < 0.0) continue;
    Vec p = x + r * sp.direction(i);
    if (valid(p)) return snap_to_faces(sp, p, {i});
  }
  const Mat m = sp.normals().transpose() * sp.directions();
  Eigen::FullPivLU<Mat> lu(m);
  if (lu.isInvertible()) {
    const Vec r = lu.solve(sp.offsets() - sp.normals().transpose() * x);
    if (r.minCoeff() >= -tol) {
      Vec p = x + sp.directions() * r;
      if (valid(p)) return snap_to_faces(sp, p, {0, 1});
    }
  }
  throw Error(ErrorKind::assumption_violation, "no complementarity solution for orthant projection");
}

}  // namespace

Vec project_pi(const SPData& sp, const Vec& x) {
  if (x.size() != sp.dim()) throw Error(ErrorKind::argument, "point dimension mismatch");
  if (sp.slack(x) >= 0.0) return x;
  switch (sp.family()) {
    case PiFamily::one_dim: {
      const double n = sp.normal(0)(0);
      Vec p(1);
      p(0) = sp.offset(0) * n;
      return p;
    }
    case PiFamily::orthant:
      return project_orthant(sp, x);
    case PiFamily::custom_pi:
      return sp.custom_pi()(x);
    case PiFamily::general:
      break;
  }
  throw Error(ErrorKind::unsupported_configuration, "no projection available for family general");
}

ConeExpansion expand_in_directions(const SPData& sp, const FaceSet& faces, const Vec& v) {
  const Mat d = sp.directions_of(faces);
  const LeastSquares ls = least_squares(d, v);
  ConeExpansion out;
  out.coef = ls.coef;
  out.residual = ls.residual;
  out.min_coef = ls.coef.size() > 0 ? ls.coef.minCoeff() : 0.0;
  const auto n = static_cast<int>(d.cols());
  if (out.min_coef >= 0.0 || Eigen::FullPivLU<Mat>(d).rank() == n) return out;
  // Dependent directions: the min-norm solution may be negative although a
  // nonnegative one exists. Exact NNLS over column subsets (n is small).
  ConeExpansion best;
  best.residual = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= n; ++k) {
    for_each_combination(n, k, [&](const std::vector<int>& cols) {
      Mat sub(d.rows(), k);
      for (int j = 0; j < k; ++j) sub.col(j) = d.col(cols[static_cast<std::size_t>(j)]);
      const LeastSquares s = least_squares(sub, v);
      if (s.coef.minCoeff() < -1e-12 * (1.0 + v.norm()) || s.residual >= best.residual) return true;
      best.coef = Vec::Zero(n);
      for (int j = 0; j < k; ++j) best.coef(cols[static_cast<std::size_t>(j)]) = s.coef(j);
      best.residual = s.residual;
      return true;
    });
  }
  if (best.residual > out.residual + 1e-12 * (1.0 + v.norm())) {
    // No nonnegative expansion fits as well; report the unconstrained one.
    return out;
  }
  best.min_coef = best.coef.minCoeff();
  return best;
}

Vec nabla_pi(const SPData& sp, const Vec& x, const Vec& v) {
  if (v.size() != sp.dim()) throw Error(ErrorKind::argument, "direction dimension mismatch");
  const FaceSet faces = active_faces(sp, x);
  if (faces.empty()) return v;
  if (sp.family() == PiFamily::one_dim) {
    Vec out = v;
    const double n = sp.normal(0)(0);
    if (n * v(0) < 0.0) out(0) = 0.0;
    return out;
  }
  const Vec base = project_pi(sp, x);
  auto estimate = [&](double h) { return Vec((project_pi(sp, x + h * v) - base) / h); };
  const Vec e1 = estimate(1e-4);
  const Vec e2 = estimate(1e-5);
  const double gap = (e1 - e2).cwiseAbs().maxCoeff();
  if (gap > 1e-6) {
    throw Error(ErrorKind::numerical,
                "nabla_pi extrapolation did not settle: |e(1e-4) - e(1e-5)| = " + std::to_string(gap));
  }
  const Vec out = (10.0 * e2 - e1) / 9.0;
  const ConeExpansion ce = expand_in_directions(sp, faces, out - v);
  if (ce.residual > 1e-6 || ce.min_coef < -1e-6) {
    throw Error(ErrorKind::numerical, "nabla_pi result minus v is not in the direction cone");
  }
  return out;
}

double neighborhood_radius(const SPData& sp, const Vec& x, double tol) {
  double r = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sp.num_faces(); ++i) {
    const double g = sp.normal(i).dot(x) - sp.offset(i);
    if (g > tol) r = std::min(r, 0.5 * g);
  }
  return r;
}

}  // namespace skorokhod
