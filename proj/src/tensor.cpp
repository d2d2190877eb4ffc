#include "tensor.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace fcg {

namespace {

// s^k with 0^0 = 1; k < 0 only reaches here with a zero coefficient.
double power_term(double coef, double s, int k) {
  if (coef == 0.0) return 0.0;
  double r = 1.0;
  for (int i = 0; i < k; ++i) r *= s;
  return coef * r;
}

// Small fixed buffers for per-entry partial products; orders above this use the heap.
constexpr int kStackOrder = 16;

class ProductBuffer {
 public:
  explicit ProductBuffer(int order) {
    if (order + 1 > kStackOrder) {
      heap_.resize(2 * (order + 1));
      prefix_ = heap_.data();
      suffix_ = heap_.data() + order + 1;
    }
  }

  // prefix[p] = prod_{q<p} x_{t_q}, suffix[p] = prod_{q>=p} x_{t_q}
  void fill(const int* t, int m, const double* x) {
    prefix_[0] = 1.0;
    suffix_[m] = 1.0;
    for (int p = 0; p < m; ++p) prefix_[p + 1] = prefix_[p] * x[t[p]];
    for (int p = m; p-- > 0;) suffix_[p] = suffix_[p + 1] * x[t[p]];
  }

  double without(int p) const { return prefix_[p] * suffix_[p + 1]; }

  // Product over all positions except p < q.
  double without(const int* t, const double* x, int p, int q) const {
    double mid = 1.0;
    for (int r = p + 1; r < q; ++r) mid *= x[t[r]];
    return prefix_[p] * mid * suffix_[q + 1];
  }

 private:
  double stack_[2 * kStackOrder];
  std::vector<double> heap_;
  double* prefix_ = stack_;
  double* suffix_ = stack_ + kStackOrder;
};

bool tuple_less(std::span<const int> a, std::span<const int> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

void for_each_sorted_index(int order, int dim,
                           const std::function<void(std::span<const int>)>& fn) {
  if (order <= 0 || dim <= 0) return;
  std::vector<int> idx(order, 0);
  while (true) {
    fn(idx);
    int p = order - 1;
    while (p >= 0 && idx[p] == dim - 1) --p;
    if (p < 0) return;
    const int next = idx[p] + 1;
    for (int q = p; q < order; ++q) idx[q] = next;
  }
}

double permutation_count(std::span<const int> index) {
  std::vector<int> sorted(index.begin(), index.end());
  std::sort(sorted.begin(), sorted.end());
  double count = 1.0;
  int run = 0;
  for (std::size_t p = 0; p < sorted.size(); ++p) {
    run = (p > 0 && sorted[p] == sorted[p - 1]) ? run + 1 : 1;
    // multiply by (p+1) / run: builds m! / prod(c!) incrementally
    count = count * static_cast<double>(p + 1) / run;
  }
  return std::round(count);
}

SymTensor SymTensor::dense(int order, int dim, std::span<const TensorEntry> entries) {
  if (order < 2) throw Error(ErrorCode::InvalidArgument, "tensor order must be >= 2");
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "tensor dimension must be >= 1");

  std::vector<std::vector<int>> tuples;
  tuples.reserve(entries.size());
  for (const auto& e : entries) {
    if (static_cast<int>(e.index.size()) != order) {
      throw Error(ErrorCode::OrderMismatch,
                  "entry has " + std::to_string(e.index.size()) +
                      " indices, tensor order is " + std::to_string(order));
    }
    for (int i : e.index) {
      if (i < 0 || i >= dim) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "index " + std::to_string(i + 1) + " outside [1, " +
                        std::to_string(dim) + "]");
      }
    }
    auto t = e.index;
    std::sort(t.begin(), t.end());
    tuples.push_back(std::move(t));
  }

  std::vector<std::size_t> perm(entries.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return tuple_less(tuples[a], tuples[b]);
  });

  Dense rep;
  rep.indices.reserve(entries.size() * order);
  rep.values.reserve(entries.size());
  rep.multiplicity.reserve(entries.size());
  for (std::size_t k = 0; k < perm.size(); ++k) {
    const auto& t = tuples[perm[k]];
    if (k > 0 && t == tuples[perm[k - 1]]) {
      std::string s;
      for (int i : t) s += (s.empty() ? "" : ",") + std::to_string(i + 1);
      throw Error(ErrorCode::DuplicateEntry, "duplicate entry (" + s + ")");
    }
    rep.indices.insert(rep.indices.end(), t.begin(), t.end());
    rep.values.push_back(entries[perm[k]].value);
    rep.multiplicity.push_back(permutation_count(t));
  }
  return SymTensor(order, dim, std::move(rep));
}

SymTensor SymTensor::sum_unary(int order, Vector g) {
  if (order < 2) throw Error(ErrorCode::InvalidArgument, "tensor order must be >= 2");
  if (g.size() < 1) throw Error(ErrorCode::InvalidArgument, "tensor dimension must be >= 1");
  const int dim = static_cast<int>(g.size());
  return SymTensor(order, dim, SumUnary{std::move(g)});
}

void SymTensor::check_dim(const Vector& x) const {
  if (x.size() != dim_) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector has length " + std::to_string(x.size()) + ", tensor dimension is " +
                    std::to_string(dim_));
  }
}

double SymTensor::entry(std::span<const int> index) const {
  if (static_cast<int>(index.size()) != order_) {
    throw Error(ErrorCode::OrderMismatch, "lookup index length differs from tensor order");
  }
  for (int i : index) {
    if (i < 0 || i >= dim_) throw Error(ErrorCode::IndexOutOfRange, "lookup index out of range");
  }
  if (const auto* su = std::get_if<SumUnary>(&rep_)) {
    double v = 0.0;
    for (int i : index) v += su->g[i];
    return v;
  }
  std::vector<int> t(index.begin(), index.end());
  std::sort(t.begin(), t.end());
  const std::size_t count = unique_count();
  std::size_t lo = 0;
  std::size_t hi = count;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (tuple_less(unique_index(mid), t)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < count && std::ranges::equal(unique_index(lo), t)) return unique_value(lo);
  return 0.0;
}

std::size_t SymTensor::unique_count() const {
  if (const auto* d = std::get_if<Dense>(&rep_)) return d->values.size();
  return 0;
}

std::span<const int> SymTensor::unique_index(std::size_t k) const {
  const auto& d = std::get<Dense>(rep_);
  return std::span<const int>(d.indices).subspan(k * order_, order_);
}

double SymTensor::unique_value(std::size_t k) const { return std::get<Dense>(rep_).values[k]; }

double SymTensor::unique_multiplicity(std::size_t k) const {
  return std::get<Dense>(rep_).multiplicity[k];
}

const Vector& SymTensor::generator() const {
  if (const auto* su = std::get_if<SumUnary>(&rep_)) return su->g;
  throw Error(ErrorCode::InvalidArgument, "dense tensor has no sum-unary generator");
}

SymTensor SymTensor::negated() const {
  if (const auto* su = std::get_if<SumUnary>(&rep_)) {
    return SymTensor(order_, dim_, SumUnary{-su->g});
  }
  Dense d = std::get<Dense>(rep_);
  for (double& v : d.values) v = -v;
  return SymTensor(order_, dim_, std::move(d));
}

SymTensor SymTensor::absolute() const {
  Dense d = std::get<Dense>(expanded().rep_);
  for (double& v : d.values) v = std::abs(v);
  return SymTensor(order_, dim_, std::move(d));
}

SymTensor SymTensor::expanded() const {
  const auto* su = std::get_if<SumUnary>(&rep_);
  if (su == nullptr) return *this;
  Dense d;
  for_each_sorted_index(order_, dim_, [&](std::span<const int> t) {
    double v = 0.0;
    for (int i : t) v += su->g[i];
    d.indices.insert(d.indices.end(), t.begin(), t.end());
    d.values.push_back(v);
    d.multiplicity.push_back(permutation_count(t));
  });
  return SymTensor(order_, dim_, std::move(d));
}

double SymTensor::txm(const Vector& x) const {
  check_dim(x);
  const int m = order_;
  if (const auto* su = std::get_if<SumUnary>(&rep_)) {
    const double s = x.sum();
    return power_term(m * su->g.dot(x), s, m - 1);
  }
  const auto& d = std::get<Dense>(rep_);
  double total = 0.0;
  for (std::size_t k = 0; k < d.values.size(); ++k) {
    double prod = d.multiplicity[k] * d.values[k];
    for (int i : unique_index(k)) prod *= x[i];
    total += prod;
  }
  return total;
}

long double SymTensor::txm_extended(const Vector& x) const {
  check_dim(x);
  const int m = order_;
  if (const auto* su = std::get_if<SumUnary>(&rep_)) {
    long double s = 0.0L;
    long double gx = 0.0L;
    for (int i = 0; i < dim_; ++i) {
      s += x[i];
      gx += static_cast<long double>(su->g[i]) * x[i];
    }
    long double p = 1.0L;
    for (int k = 0; k < m - 1; ++k) p *= s;
    return m * gx * p;
  }
  const auto& d = std::get<Dense>(rep_);
  long double total = 0.0L;
  for (std::size_t k = 0; k < d.values.size(); ++k) {
    long double prod = static_cast<long double>(d.multiplicity[k]) * d.values[k];
    for (int i : unique_index(k)) prod *= x[i];
    total += prod;
  }
  return total;
}

Vector SymTensor::txm1(const Vector& x) const {
  check_dim(x);
  const int m = order_;
  if (const auto* su = std::get_if<SumUnary>(&rep_)) {
    const double s = x.sum();
    const double gx = su->g.dot(x);
    const double tail = power_term((m - 1) * gx, s, m - 2);
    return power_term(1.0, s, m - 1) * su->g + Vector::Constant(dim_, tail);
  }
  const auto& d = std::get<Dense>(rep_);
  Vector y = Vector::Zero(dim_);
  ProductBuffer buf(m);
  const int* t = d.indices.data();
  for (std::size_t k = 0; k < d.values.size(); ++k, t += m) {
    buf.fill(t, m, x.data());
    const double w = d.multiplicity[k] * d.values[k] / m;
    for (int p = 0; p < m; ++p) y[t[p]] += w * buf.without(p);
  }
  return y;
}

Matrix SymTensor::txm2(const Vector& x) const {
  check_dim(x);
  const int m = order_;
  if (const auto* su = std::get_if<SumUnary>(&rep_)) {
    const double s = x.sum();
    const double gx = su->g.dot(x);
    const double lead = power_term(1.0, s, m - 2);
    const double tail = power_term((m - 2) * gx, s, m - 3);
    const Vector ones = Vector::Ones(dim_);
    Matrix out = lead * (su->g * ones.transpose() + ones * su->g.transpose());
    out.array() += tail;
    return out;
  }
  const auto& d = std::get<Dense>(rep_);
  Matrix out = Matrix::Zero(dim_, dim_);
  ProductBuffer buf(m);
  const int* t = d.indices.data();
  const double pairs = static_cast<double>(m) * (m - 1);
  for (std::size_t k = 0; k < d.values.size(); ++k, t += m) {
    buf.fill(t, m, x.data());
    const double w = d.multiplicity[k] * d.values[k] / pairs;
    for (int p = 0; p < m; ++p) {
      for (int q = p + 1; q < m; ++q) {
        const double v = w * buf.without(t, x.data(), p, q);
        out(t[p], t[q]) += v;
        out(t[q], t[p]) += v;
      }
    }
  }
  return out;
}

double SymTensor::txm2_quad(const Vector& x, const Vector& dvec) const {
  check_dim(x);
  check_dim(dvec);
  const int m = order_;
  if (const auto* su = std::get_if<SumUnary>(&rep_)) {
    const double s = x.sum();
    const double gx = su->g.dot(x);
    const double sd = dvec.sum();
    const double gd = su->g.dot(dvec);
    return power_term(2.0 * gd * sd, s, m - 2) + power_term((m - 2) * gx * sd * sd, s, m - 3);
  }
  const auto& d = std::get<Dense>(rep_);
  double total = 0.0;
  ProductBuffer buf(m);
  const int* t = d.indices.data();
  const double pairs = static_cast<double>(m) * (m - 1);
  for (std::size_t k = 0; k < d.values.size(); ++k, t += m) {
    buf.fill(t, m, x.data());
    double inner = 0.0;
    for (int p = 0; p < m; ++p) {
      for (int q = p + 1; q < m; ++q) {
        inner += buf.without(t, x.data(), p, q) * dvec[t[p]] * dvec[t[q]];
      }
    }
    total += 2.0 * d.multiplicity[k] * d.values[k] / pairs * inner;
  }
  return total;
}

}  // namespace fcg
