#pragma once

#include "bform.hpp"
#include "tensor.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace fcg {

// Test tensor families:
//   Ex1  fixed order-3 dimension-3 tensor (Z-eigen benchmark)
//   Ex2  a = sin(i1 + ... + im)
//   Ex3  one uniform [-1, 1] value per sorted multi-index (seeded)
//   Ex4  sum-unary, g(i) = arctan((-1)^i i / n)
//   Ex5  sum-unary, g uniform in [-1, 1]^n (seeded)
//   Ex6  fixed order-4 dimension-3 tensor (H-eigen benchmark)
enum class TensorFamily { Ex1, Ex2, Ex3, Ex4, Ex5, Ex6 };

struct GenSpec {
  TensorFamily family = TensorFamily::Ex1;
  int order = 0;  // 0 lets Ex1/Ex6 pick their fixed shape
  int dim = 0;
  std::uint64_t seed = 0;
};

// B-form families. Ex7 is (x^T D x)^{m'/2} with D = 0.1 I + C C^T, Ex8 the
// diagonally dominant dense tensor s I + C.
enum class BFamily { Identity2, DiagPower, Ex7, Ex8 };

struct BGenSpec {
  BFamily family = BFamily::Identity2;
  int order = 2;
  int dim = 0;
  std::uint64_t seed = 0;
};

SymTensor gen_tensor(const GenSpec& spec);
BForm gen_bform(const BGenSpec& spec);

// The n x n matrix D used by the Ex7 family.
Matrix ex7_matrix(int dim, std::uint64_t seed);

std::string_view to_string(TensorFamily family) noexcept;
std::string_view to_string(BFamily family) noexcept;
std::optional<TensorFamily> parse_tensor_family(std::string_view name);
std::optional<BFamily> parse_bfamily(std::string_view name);

}  // namespace fcg
