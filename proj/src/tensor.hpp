#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

namespace fcg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// 0-based multi-index, any order of its components.
struct TensorEntry {
  std::vector<int> index;
  double value = 0.0;
};

// Calls fn once per sorted multi-index i1 <= ... <= im (0-based), in
// lexicographic order.
void for_each_sorted_index(int order, int dim,
                           const std::function<void(std::span<const int>)>& fn);

// Number of distinct permutations of a multi-index (multinomial coefficient).
double permutation_count(std::span<const int> index);

// Real symmetric tensor of order m and dimension n.
//
// Two representations:
//   dense      one record per sorted multi-index with its value and the number
//              of raw positions it stands for
//   sum-unary  a_{i1..im} = g(i1) + ... + g(im), contracted in O(n)
//
// Immutable after construction.
class SymTensor {
 public:
  // Builds the dense representation. Indices are 0-based and may be given in
  // any order; each sorted tuple may appear at most once. Missing tuples are 0.
  static SymTensor dense(int order, int dim, std::span<const TensorEntry> entries);
  static SymTensor sum_unary(int order, Vector g);

  int order() const { return order_; }
  int dim() const { return dim_; }
  bool is_sum_unary() const { return std::holds_alternative<SumUnary>(rep_); }

  // Raw entry lookup; invariant under permutation of the index.
  double entry(std::span<const int> index) const;

  // Dense representation accessors. unique_count() is 0 for sum-unary.
  std::size_t unique_count() const;
  std::span<const int> unique_index(std::size_t k) const;
  double unique_value(std::size_t k) const;
  double unique_multiplicity(std::size_t k) const;

  // Sum-unary generator g; throws for dense tensors.
  const Vector& generator() const;

  SymTensor negated() const;
  // Entrywise absolute value; dense only.
  SymTensor absolute() const;
  // Dense equivalent of a sum-unary tensor (identity for dense).
  SymTensor expanded() const;

  // A x^m
  double txm(const Vector& x) const;
  // A x^m accumulated in extended precision.
  long double txm_extended(const Vector& x) const;
  // A x^{m-1}
  Vector txm1(const Vector& x) const;
  // A x^{m-2}
  Matrix txm2(const Vector& x) const;
  // d^T (A x^{m-2}) d without forming the matrix.
  double txm2_quad(const Vector& x, const Vector& d) const;

 private:
  struct Dense {
    std::vector<int> indices;  // unique_count * order, sorted tuples
    std::vector<double> values;
    std::vector<double> multiplicity;
  };
  struct SumUnary {
    Vector g;
  };

  SymTensor(int order, int dim, std::variant<Dense, SumUnary> rep)
      : order_(order), dim_(dim), rep_(std::move(rep)) {}

  void check_dim(const Vector& x) const;

  int order_;
  int dim_;
  std::variant<Dense, SumUnary> rep_;
};

}  // namespace fcg
