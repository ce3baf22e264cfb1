#include "hardy/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace hardy {

Eigen::Index max_total_dim() {
  static const Eigen::Index cap = [] {
    if (const char* env = std::getenv("HARDY_MAX_DIM")) {
      char* end = nullptr;
      const long long v = std::strtoll(env, &end, 10);
      if (end != env && *end == '\0' && v >= 2) return static_cast<Eigen::Index>(v);
      throw std::invalid_argument("HARDY_MAX_DIM must be an integer >= 2");
    }
    return kDefaultMaxTotalDim;
  }();
  return cap;
}

MultipartiteState::MultipartiteState(std::vector<Eigen::Index> dims, Eigen::VectorXcd amplitudes,
                                     bool normalize)
    : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
  if (dims_.empty()) throw std::invalid_argument("state: no parties");
  Eigen::Index total = 1;
  for (Eigen::Index d : dims_) {
    if (d < 2) throw std::invalid_argument("state: every local dimension must be >= 2");
    if (total > max_total_dim() / d)
      throw std::invalid_argument("state: total dimension exceeds cap " +
                                  std::to_string(max_total_dim()));
    total *= d;
  }
  if (amplitudes_.size() != total)
    throw std::invalid_argument("state: amplitude count " + std::to_string(amplitudes_.size()) +
                                " does not match total dimension " + std::to_string(total));
  if (!amplitudes_.allFinite()) throw std::invalid_argument("state: non-finite amplitude");
  const double norm2 = amplitudes_.squaredNorm();
  if (normalize) {
    if (norm2 <= 0.0) throw std::invalid_argument("state: cannot normalize the zero vector");
    amplitudes_ /= std::sqrt(norm2);
  } else if (std::abs(norm2 - 1.0) > kNormTol) {
    throw std::invalid_argument("state: squared norm " + std::to_string(norm2) +
                                " is not 1 within tolerance");
  }
}

Bipartition Bipartition::of(int party_count, std::vector<int> group1) {
  if (party_count < 2) throw std::invalid_argument("bipartition: need at least two parties");
  std::sort(group1.begin(), group1.end());
  if (std::adjacent_find(group1.begin(), group1.end()) != group1.end())
    throw std::invalid_argument("bipartition: repeated party");
  for (int p : group1)
    if (p < 0 || p >= party_count) throw std::invalid_argument("bipartition: party out of range");
  if (group1.empty() || group1.size() == static_cast<std::size_t>(party_count))
    throw std::invalid_argument("bipartition: both sides must be nonempty");
  Bipartition cut;
  cut.group1 = std::move(group1);
  for (int p = 0; p < party_count; ++p)
    if (!std::binary_search(cut.group1.begin(), cut.group1.end(), p)) cut.group2.push_back(p);
  return cut;
}

Eigen::Index group_dim(const std::vector<Eigen::Index>& dims, const std::vector<int>& group) {
  Eigen::Index d = 1;
  for (int p : group) d *= dims.at(p);
  return d;
}

Eigen::Index Bipartition::group1_dim(const std::vector<Eigen::Index>& dims) const {
  return group_dim(dims, group1);
}

Eigen::Index Bipartition::group2_dim(const std::vector<Eigen::Index>& dims) const {
  return group_dim(dims, group2);
}

namespace {

// Row/column index of each flat amplitude under the (group, rest) split.
// Digits within each side keep ascending party order, first party slowest.
struct GroupIndexer {
  GroupIndexer(const std::vector<Eigen::Index>& dims, const std::vector<int>& group) {
    const int n = static_cast<int>(dims.size());
    std::vector<bool> in_group(n, false);
    for (int p : group) {
      if (p < 0 || p >= n) throw std::invalid_argument("group: party out of range");
      if (in_group[p]) throw std::invalid_argument("group: repeated party");
      in_group[p] = true;
    }
    if (group.empty() || group.size() == dims.size())
      throw std::invalid_argument("group: must be a nonempty proper subset");
    if (!std::is_sorted(group.begin(), group.end()))
      throw std::invalid_argument("group: parties must be ascending");
    flat_stride.assign(n, 1);
    for (int p = n - 2; p >= 0; --p) flat_stride[p] = flat_stride[p + 1] * dims[p + 1];
    row_stride.assign(n, 0);
    col_stride.assign(n, 0);
    Eigen::Index r = 1, c = 1;
    for (int p = n - 1; p >= 0; --p) {
      if (in_group[p]) {
        row_stride[p] = r;
        r *= dims[p];
      } else {
        col_stride[p] = c;
        c *= dims[p];
      }
    }
    rows = r;
    cols = c;
    dims_ = dims;
  }

  // (row, col) of flat index f.
  std::pair<Eigen::Index, Eigen::Index> split(Eigen::Index f) const {
    Eigen::Index row = 0, col = 0;
    for (std::size_t p = 0; p < dims_.size(); ++p) {
      const Eigen::Index digit = f / flat_stride[p];
      f -= digit * flat_stride[p];
      row += digit * row_stride[p];
      col += digit * col_stride[p];
    }
    return {row, col};
  }

  Eigen::Index rows = 0, cols = 0;
  std::vector<Eigen::Index> flat_stride, row_stride, col_stride;
  std::vector<Eigen::Index> dims_;
};

}  // namespace

Eigen::MatrixXcd reshape_group_rows(const Eigen::VectorXcd& amplitudes,
                                    const std::vector<Eigen::Index>& dims,
                                    const std::vector<int>& group) {
  const GroupIndexer ix(dims, group);
  if (amplitudes.size() != ix.rows * ix.cols)
    throw std::invalid_argument("reshape_group_rows: amplitude count does not match dims");
  Eigen::MatrixXcd m(ix.rows, ix.cols);
  for (Eigen::Index f = 0; f < amplitudes.size(); ++f) {
    const auto [row, col] = ix.split(f);
    m(row, col) = amplitudes(f);
  }
  return m;
}

Eigen::MatrixXcd reshape_group_rows(const MultipartiteState& state, const std::vector<int>& group) {
  return reshape_group_rows(state.amplitudes(), state.dims(), group);
}

Eigen::VectorXcd flatten_group_rows(const Eigen::MatrixXcd& m, const std::vector<Eigen::Index>& dims,
                                    const std::vector<int>& group) {
  const GroupIndexer ix(dims, group);
  if (m.rows() != ix.rows || m.cols() != ix.cols)
    throw std::invalid_argument("flatten_group_rows: shape mismatch");
  Eigen::VectorXcd v(ix.rows * ix.cols);
  for (Eigen::Index f = 0; f < v.size(); ++f) {
    const auto [row, col] = ix.split(f);
    v(f) = m(row, col);
  }
  return v;
}

}  // namespace hardy
