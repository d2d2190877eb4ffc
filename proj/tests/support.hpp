#pragma once

#include "bform.hpp"
#include "generators.hpp"
#include "rng.hpp"
#include "tensor.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace fcg::test {

inline Vector random_vector(Rng& rng, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.symmetric();
  return v;
}

// Diagonal tensor with a_{i...i} = c_i.
inline SymTensor diagonal_tensor(int order, const std::vector<double>& c) {
  std::vector<TensorEntry> entries;
  for (int i = 0; i < static_cast<int>(c.size()); ++i) {
    entries.push_back({std::vector<int>(order, i), c[i]});
  }
  return SymTensor::dense(order, static_cast<int>(c.size()), entries);
}

inline SymTensor matrix_tensor(const Matrix& a) {
  std::vector<TensorEntry> entries;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = i; j < a.cols(); ++j) entries.push_back({{i, j}, a(i, j)});
  }
  return SymTensor::dense(2, static_cast<int>(a.rows()), entries);
}

inline SymTensor random_tensor(int order, int dim, std::uint64_t seed) {
  return gen_tensor({TensorFamily::Ex3, order, dim, seed});
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline double rel_err(const Vector& got, const Vector& want) {
  return (got - want).norm() / std::max(1.0, want.norm());
}

// One representative of each constraint-form variant at dimension n.
struct NamedForm {
  std::string name;
  BForm form;
};

inline std::vector<NamedForm> all_forms(int n, std::uint64_t seed) {
  return {
      {"identity2", BForm::identity2(n)},
      {"diag_power4", BForm::diag_power(n, 4)},
      {"quad_form_power4", gen_bform({BFamily::Ex7, 4, n, seed})},
      {"dense4", gen_bform({BFamily::Ex8, 4, n, seed})},
  };
}

}  // namespace fcg::test
