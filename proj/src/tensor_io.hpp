#pragma once

#include "tensor.hpp"

#include <string>
#include <string_view>

namespace fcg {

// Tensor file: UTF-8 JSON
//   {"order": m, "dim": n, "entries": [{"idx": [1, 1, 2], "val": 0.5}, ...]}
// with 1-based, non-decreasing idx lists. Absent tuples are zero.
SymTensor parse_tensor_json(std::string_view text);
SymTensor load_tensor_file(const std::string& path);

// Sum-unary tensors are written in their dense expansion.
std::string tensor_to_json(const SymTensor& t);
void save_tensor_file(const SymTensor& t, const std::string& path);

}  // namespace fcg
