#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "skorokhod/linalg.hpp"

namespace skorokhod {

/// Sorted set of 0-based face indices. Files and CLI output use 1-based
/// indices; conversion happens at the I/O boundary only.
class FaceSet {
 public:
  FaceSet() = default;
  FaceSet(std::initializer_list<int> idx);
  explicit FaceSet(std::vector<int> idx);

  static FaceSet from_mask(std::uint64_t mask);

  bool empty() const noexcept { return idx_.empty(); }
  std::size_t size() const noexcept { return idx_.size(); }
  bool contains(int i) const noexcept;
  bool is_subset_of(const FaceSet& other) const noexcept;
  FaceSet unite(const FaceSet& other) const;
  std::uint64_t mask() const;

  const std::vector<int>& indices() const noexcept { return idx_; }
  auto begin() const noexcept { return idx_.begin(); }
  auto end() const noexcept { return idx_.end(); }

  /// Throws domain_violation unless every index is < num_faces.
  void check_range(int num_faces) const;

  /// "1|2" style, 1-based; empty set is "".
  std::string to_string() const;
  static FaceSet parse(const std::string& text);

  friend bool operator==(const FaceSet&, const FaceSet&) = default;

 private:
  std::vector<int> idx_;
};

enum class PiFamily { general, one_dim, orthant, custom_pi };

const char* to_string(PiFamily f) noexcept;
PiFamily parse_pi_family(const std::string& name);

using PiFunction = std::function<Vec(const Vec&)>;

/// Data {(d_i, n_i, c_i)} of an (extended) Skorokhod problem on
/// G = {x : <x, n_i> >= c_i for all i}. Normals and directions are stored as
/// the columns of J x N matrices.
class SPData {
 public:
  SPData(Mat normals, Vec offsets, Mat directions, PiFamily family, PiFunction custom_pi = {});

  int dim() const noexcept { return static_cast<int>(normals_.rows()); }
  int num_faces() const noexcept { return static_cast<int>(normals_.cols()); }
  const Mat& normals() const noexcept { return normals_; }
  const Mat& directions() const noexcept { return directions_; }
  const Vec& offsets() const noexcept { return offsets_; }
  Vec normal(int i) const { return normals_.col(i); }
  Vec direction(int i) const { return directions_.col(i); }
  double offset(int i) const { return offsets_(i); }
  PiFamily family() const noexcept { return family_; }
  const PiFunction& custom_pi() const noexcept { return custom_pi_; }

  Mat normals_of(const FaceSet& faces) const;
  Mat directions_of(const FaceSet& faces) const;

  /// Same normals and offsets with new reflection directions (perturbed R).
  SPData with_directions(Mat directions) const;

  /// min_i (<x, n_i> - c_i); nonnegative iff x in G.
  double slack(const Vec& x) const;

 private:
  Mat normals_;
  Vec offsets_;
  Mat directions_;
  PiFamily family_;
  PiFunction custom_pi_;
};

/// Compact, convex, symmetric polytope with 0 in its interior, given by
/// vertices; facets are derived on construction.
class BPolytope {
 public:
  struct Facet {
    Vec normal;                // outward unit normal a_f
    double offset;             // b_f > 0, facet is {<a_f, z> = b_f}
    std::vector<int> vertices; // indices into vertices()
  };

  explicit BPolytope(std::vector<Vec> vertices);

  int dim() const noexcept { return dim_; }
  const std::vector<Vec>& vertices() const noexcept { return vertices_; }
  const std::vector<Facet>& facets() const noexcept { return facets_; }

  /// Minkowski gauge: min{r >= 0 : y in rB}.
  double norm(const Vec& y) const;
  /// Support function sup_{z in B} <y, z>, the norm of B*.
  double dual_norm(const Vec& y) const;

 private:
  int dim_;
  std::vector<Vec> vertices_;
  std::vector<Facet> facets_;
};

FaceSet active_faces(const SPData& sp, const Vec& x, double tol = 1e-9);

struct SubspaceBases {
  Mat h_basis;  // orthonormal columns spanning H = {y : <y, n_i> = 0, i in faces}
  Mat d_basis;  // orthonormal columns spanning span{d_i, i in faces}
};

SubspaceBases subspace_bases(const SPData& sp, const FaceSet& faces);

struct QMatrix {
  Mat q;
  double spectral_radius = 0.0;
};

QMatrix q_matrix(const SPData& sp);

struct FaceSetClass {
  FaceSet faces;
  bool smooth = false;
  bool nonsmooth = false;
  bool in_v = false;
  bool in_w = false;
  Vec witness;
};

struct BoundaryClassification {
  std::vector<FaceSetClass> feasible;

  bool v_empty() const;
  bool w_empty() const;
  const FaceSetClass* find(const FaceSet& faces) const;
};

BoundaryClassification classify_boundary(const SPData& sp, int max_faces = 12);

/// Checks whether `faces` is realized as an exact active set of some x in G.
std::optional<Vec> face_set_witness(const SPData& sp, const FaceSet& faces);

Vec project_pi(const SPData& sp, const Vec& x);

Vec nabla_pi(const SPData& sp, const Vec& x, const Vec& v);

/// Radius r such that active_faces(y) is a subset of active_faces(x) whenever
/// |y - x| < r: half the smallest slack among inactive faces.
double neighborhood_radius(const SPData& sp, const Vec& x, double tol = 1e-9);

/// Nonnegative expansion of v in {d_i : i in faces}; residual is the
/// least-squares residual and min_coef the smallest coefficient.
struct ConeExpansion {
  Vec coef;
  double residual = 0.0;
  double min_coef = 0.0;
};

ConeExpansion expand_in_directions(const SPData& sp, const FaceSet& faces, const Vec& v);

}  // namespace skorokhod
