#include "generators.hpp"

#include "error.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace fcg {

namespace {

// Entries of the fixed benchmark tensors, 1-based sorted indices.
struct FixedEntry {
  int i[4];
  double value;
};

constexpr FixedEntry kEx1[] = {
    {{1, 1, 1}, -0.1281}, {{1, 1, 2}, 0.0516},  {{1, 1, 3}, -0.0954}, {{1, 2, 2}, -0.1958},
    {{1, 2, 3}, -0.1790}, {{1, 3, 3}, -0.2676}, {{2, 2, 2}, 0.3251},  {{2, 2, 3}, 0.2513},
    {{2, 3, 3}, 0.1773},  {{3, 3, 3}, 0.0338},
};

constexpr FixedEntry kEx6[] = {
    {{1, 1, 1, 1}, 0.2883},  {{1, 1, 1, 2}, -0.0031}, {{1, 1, 1, 3}, 0.1973},
    {{1, 1, 2, 2}, -0.2485}, {{1, 1, 2, 3}, -0.2939}, {{1, 1, 3, 3}, 0.3847},
    {{1, 2, 2, 2}, 0.2972},  {{1, 2, 2, 3}, 0.1862},  {{1, 2, 3, 3}, 0.0919},
    {{1, 3, 3, 3}, -0.3619}, {{2, 2, 2, 2}, 0.1241},  {{2, 2, 2, 3}, -0.3420},
    {{2, 2, 3, 3}, 0.2127},  {{2, 3, 3, 3}, 0.2727},  {{3, 3, 3, 3}, -0.3054},
};

// Cap on generated dense storage.
constexpr double kMaxUniqueEntries = 5e7;

template <std::size_t N>
SymTensor fixed_tensor(const FixedEntry (&table)[N], int order, int dim) {
  std::vector<TensorEntry> entries;
  for (const auto& e : table) {
    TensorEntry t;
    for (int p = 0; p < order; ++p) t.index.push_back(e.i[p] - 1);
    t.value = e.value;
    entries.push_back(std::move(t));
  }
  return SymTensor::dense(order, dim, entries);
}

double unique_count(int order, int dim) {
  // C(n + m - 1, m)
  double c = 1.0;
  for (int k = 1; k <= order; ++k) c = c * (dim - 1 + k) / k;
  return c;
}

void require_shape(const GenSpec& spec, int order, int dim) {
  if ((spec.order != 0 && spec.order != order) || (spec.dim != 0 && spec.dim != dim)) {
    throw Error(ErrorCode::InvalidSpec, std::string(to_string(spec.family)) + " is fixed at order " +
                                            std::to_string(order) + ", dimension " +
                                            std::to_string(dim));
  }
}

void require_general_shape(const GenSpec& spec, bool dense) {
  if (spec.order < 2 || spec.dim < 1) {
    throw Error(ErrorCode::InvalidSpec, std::string(to_string(spec.family)) +
                                            " needs order >= 2 and dimension >= 1");
  }
  if (dense && unique_count(spec.order, spec.dim) > kMaxUniqueEntries) {
    throw Error(ErrorCode::InvalidSpec, "dense tensor too large to generate");
  }
}

}  // namespace

std::string_view to_string(TensorFamily family) noexcept {
  switch (family) {
    case TensorFamily::Ex1: return "ex1";
    case TensorFamily::Ex2: return "ex2";
    case TensorFamily::Ex3: return "ex3";
    case TensorFamily::Ex4: return "ex4";
    case TensorFamily::Ex5: return "ex5";
    case TensorFamily::Ex6: return "ex6";
  }
  return "unknown";
}

std::string_view to_string(BFamily family) noexcept {
  switch (family) {
    case BFamily::Identity2: return "identity2";
    case BFamily::DiagPower: return "diag_power";
    case BFamily::Ex7: return "ex7";
    case BFamily::Ex8: return "ex8";
  }
  return "unknown";
}

std::optional<TensorFamily> parse_tensor_family(std::string_view name) {
  for (auto f : {TensorFamily::Ex1, TensorFamily::Ex2, TensorFamily::Ex3, TensorFamily::Ex4,
                 TensorFamily::Ex5, TensorFamily::Ex6}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::optional<BFamily> parse_bfamily(std::string_view name) {
  for (auto f : {BFamily::Identity2, BFamily::DiagPower, BFamily::Ex7, BFamily::Ex8}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

SymTensor gen_tensor(const GenSpec& spec) {
  switch (spec.family) {
    case TensorFamily::Ex1:
      require_shape(spec, 3, 3);
      return fixed_tensor(kEx1, 3, 3);
    case TensorFamily::Ex6:
      require_shape(spec, 4, 3);
      return fixed_tensor(kEx6, 4, 3);
    case TensorFamily::Ex2: {
      require_general_shape(spec, true);
      std::vector<TensorEntry> entries;
      for_each_sorted_index(spec.order, spec.dim, [&](std::span<const int> t) {
        int sum = 0;
        for (int i : t) sum += i + 1;
        entries.push_back({std::vector<int>(t.begin(), t.end()), std::sin(static_cast<double>(sum))});
      });
      return SymTensor::dense(spec.order, spec.dim, entries);
    }
    case TensorFamily::Ex3: {
      require_general_shape(spec, true);
      Rng rng(spec.seed);
      std::vector<TensorEntry> entries;
      for_each_sorted_index(spec.order, spec.dim, [&](std::span<const int> t) {
        entries.push_back({std::vector<int>(t.begin(), t.end()), rng.symmetric()});
      });
      return SymTensor::dense(spec.order, spec.dim, entries);
    }
    case TensorFamily::Ex4: {
      require_general_shape(spec, false);
      Vector g(spec.dim);
      for (int i = 1; i <= spec.dim; ++i) {
        const double sign = (i % 2 == 0) ? 1.0 : -1.0;
        g[i - 1] = std::atan(sign * i / static_cast<double>(spec.dim));
      }
      return SymTensor::sum_unary(spec.order, std::move(g));
    }
    case TensorFamily::Ex5: {
      require_general_shape(spec, false);
      Rng rng(spec.seed);
      Vector g(spec.dim);
      for (int i = 0; i < spec.dim; ++i) g[i] = rng.symmetric();
      return SymTensor::sum_unary(spec.order, std::move(g));
    }
  }
  throw Error(ErrorCode::InvalidSpec, "unknown tensor family");
}

Matrix ex7_matrix(int dim, std::uint64_t seed) {
  if (dim < 1) throw Error(ErrorCode::InvalidSpec, "dimension must be >= 1");
  Rng rng(seed);
  Matrix c(dim, dim - 1);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim - 1; ++j) c(i, j) = rng.symmetric();
  }
  Matrix d = 0.1 * Matrix::Identity(dim, dim) + c * c.transpose();
  // exact symmetry
  return 0.5 * (d + d.transpose());
}

BForm gen_bform(const BGenSpec& spec) {
  if (spec.dim < 1) throw Error(ErrorCode::InvalidSpec, "B-form dimension must be >= 1");
  if (spec.order < 2 || spec.order % 2 != 0) {
    throw Error(ErrorCode::InvalidSpec, "B-form order must be even and >= 2");
  }
  switch (spec.family) {
    case BFamily::Identity2:
      if (spec.order != 2) throw Error(ErrorCode::InvalidSpec, "identity2 has order 2");
      return BForm::identity2(spec.dim);
    case BFamily::DiagPower:
      return BForm::diag_power(spec.dim, spec.order);
    case BFamily::Ex7:
      return BForm::quad_form_power(ex7_matrix(spec.dim, spec.seed), spec.order);
    case BFamily::Ex8: {
      if (spec.dim < 2) {
        throw Error(ErrorCode::InvalidSpec, "ex8 needs dimension >= 2 (no off-diagonal entries)");
      }
      if (unique_count(spec.order, spec.dim) > kMaxUniqueEntries) {
        throw Error(ErrorCode::InvalidSpec, "dense B-form too large to generate");
      }
      Rng rng(spec.seed);
      std::vector<TensorEntry> off;
      for_each_sorted_index(spec.order, spec.dim, [&](std::span<const int> t) {
        if (t.front() == t.back()) return;
        off.push_back({std::vector<int>(t.begin(), t.end()), rng.symmetric()});
      });
      const SymTensor c = SymTensor::dense(spec.order, spec.dim, off);
      // (|C| e^{m'-1})_i is the absolute off-diagonal row sum.
      const Vector rows = c.absolute().txm1(Vector::Ones(spec.dim));
      const double s = 1.01 * rows.maxCoeff();
      std::vector<TensorEntry> entries = std::move(off);
      for (int i = 0; i < spec.dim; ++i) {
        entries.push_back({std::vector<int>(spec.order, i), s});
      }
      return BForm::dense(SymTensor::dense(spec.order, spec.dim, entries));
    }
  }
  throw Error(ErrorCode::InvalidSpec, "unknown B-form family");
}

}  // namespace fcg
