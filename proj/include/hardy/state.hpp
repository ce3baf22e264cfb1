#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hardy/types.hpp"

namespace hardy {

/// Pure state of n >= 1 finite-dimensional parties. Amplitudes are stored
/// flat in row-major party order: party 1 is the slowest-varying index.
class MultipartiteState {
 public:
  /// Validates dimensions (each >= 2, product within max_total_dim()) and
  /// normalization. With normalize = true a nonzero vector is rescaled to
  /// unit norm instead of rejected.
  MultipartiteState(std::vector<Eigen::Index> dims, Eigen::VectorXcd amplitudes,
                    bool normalize = false);

  int party_count() const { return static_cast<int>(dims_.size()); }
  const std::vector<Eigen::Index>& dims() const { return dims_; }
  Eigen::Index dim(int party) const { return dims_.at(party); }
  Eigen::Index total_dim() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }

 private:
  std::vector<Eigen::Index> dims_;
  Eigen::VectorXcd amplitudes_;
};

/// Two-block partition of the parties {0, ..., n-1}. Both groups are kept
/// sorted ascending; group1 holds the parties named by the caller.
struct Bipartition {
  std::vector<int> group1;
  std::vector<int> group2;

  /// Builds the partition from one side; validates membership and
  /// non-triviality (both sides nonempty).
  static Bipartition of(int party_count, std::vector<int> group1);

  Eigen::Index group1_dim(const std::vector<Eigen::Index>& dims) const;
  Eigen::Index group2_dim(const std::vector<Eigen::Index>& dims) const;
};

Eigen::Index group_dim(const std::vector<Eigen::Index>& dims, const std::vector<int>& group);

/// Matrix view of the amplitudes with the digits of `group` (ascending party
/// order, first party slowest) as row index and the complementary digits as
/// column index.
Eigen::MatrixXcd reshape_group_rows(const MultipartiteState& state, const std::vector<int>& group);
Eigen::MatrixXcd reshape_group_rows(const Eigen::VectorXcd& amplitudes,
                                    const std::vector<Eigen::Index>& dims,
                                    const std::vector<int>& group);

/// Inverse of reshape_group_rows: scatter a (group x rest) matrix back into a
/// flat amplitude vector over all parties.
Eigen::VectorXcd flatten_group_rows(const Eigen::MatrixXcd& m, const std::vector<Eigen::Index>& dims,
                                    const std::vector<int>& group);

/// Parses the "hardy-state/1" JSON document format:
///   {"format": "hardy-state/1", "dims": [2,2], "amplitudes": [[re,im], ...],
///    "normalize": false}
/// `normalize` is optional and defaults to false. Throws std::runtime_error
/// on malformed documents and std::invalid_argument on invalid states.
MultipartiteState parse_state(const std::string& text);
MultipartiteState parse_state_file(const std::filesystem::path& path);

/// Serializes a state back to the "hardy-state/1" document format.
std::string state_to_json(const MultipartiteState& state);

}  // namespace hardy
