#pragma once

// Set partitions of {1..k}: enumeration, non-crossing structure, Kreweras
// complements, the lattice join and the Moebius weights used to turn moments
// into cumulants.

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sre {

inline constexpr int kMaxGroundSize = 32;
inline constexpr int kDefaultPartitionCap = 12;
inline constexpr int kDefaultNoncrossingCap = 14;

/// A partition of {1..k} in canonical form: blocks ordered by least element,
/// elements ascending inside each block. Stored as a restricted growth string
/// so that equality, ordering and hashing are structural.
class SetPartition {
 public:
  using Block = std::vector<int>;

  SetPartition() = default;

  /// Validates that `blocks` are nonempty, disjoint and cover {1..k}.
  SetPartition(int ground_size, const std::vector<Block>& blocks);

  /// Block label per element (element e at position e-1). Labels may be any
  /// nonnegative integers; they are relabelled into restricted growth form.
  static SetPartition from_labels(std::span<const int> labels);

  /// 0_k: all singletons.
  static SetPartition finest(int k);
  /// 1_k: a single block.
  static SetPartition coarsest(int k);

  /// Parses block notation such as "{1,3}{2}{4}".
  static SetPartition parse(std::string_view text);

  int ground_size() const noexcept { return size_; }
  int block_count() const noexcept { return blocks_; }
  /// Zero-based block index of element `e` (1-based).
  int block_of(int e) const { return rgs_[static_cast<std::size_t>(e - 1)]; }

  std::vector<Block> blocks() const;
  std::vector<int> labels() const;
  std::vector<int> block_sizes() const;

  bool is_finest() const noexcept { return blocks_ == size_; }
  bool is_coarsest() const noexcept { return blocks_ == 1; }

  std::string to_string() const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;
  friend auto operator<=>(const SetPartition& a, const SetPartition& b) {
    if (auto c = a.size_ <=> b.size_; c != 0) return c;
    return a.rgs_ <=> b.rgs_;
  }

  std::size_t hash() const noexcept;

 private:
  std::array<std::uint8_t, kMaxGroundSize> rgs_{};
  std::uint8_t size_ = 0;
  std::uint8_t blocks_ = 0;
};

std::ostream& operator<<(std::ostream& os, const SetPartition& p);

struct SetPartitionHash {
  std::size_t operator()(const SetPartition& p) const noexcept { return p.hash(); }
};

/// Consecutive intervals of lengths k_1..k_n covering {1..k}.
class IntervalPartition {
 public:
  explicit IntervalPartition(std::vector<int> lengths);

  const std::vector<int>& lengths() const noexcept { return lengths_; }
  int interval_count() const noexcept { return static_cast<int>(lengths_.size()); }
  int ground_size() const noexcept { return total_; }
  SetPartition as_set_partition() const;

 private:
  std::vector<int> lengths_;
  int total_ = 0;
};

std::uint64_t bell_number(int k);
std::uint64_t catalan_number(int n);

/// Calls `visit` for every partition of {1..k} in restricted-growth-string
/// lexicographic order. Returning false from `visit` stops the walk.
void for_each_partition(int k, const std::function<bool(const SetPartition&)>& visit,
                        int cap = kDefaultPartitionCap);
/// Same as for_each_partition restricted to non-crossing partitions.
void for_each_noncrossing(int n, const std::function<bool(const SetPartition&)>& visit,
                          int cap = kDefaultNoncrossingCap);

std::vector<SetPartition> enumerate_partitions(int k, int cap = kDefaultPartitionCap);
std::vector<SetPartition> enumerate_noncrossing(int n, int cap = kDefaultNoncrossingCap);

bool is_noncrossing(const SetPartition& p);

/// Kreweras complement, returned on the ground set {1..n} where dual point i'
/// sits between i and i+1 on the circle. Throws DomainError for crossing input.
SetPartition kreweras_complement(const SetPartition& p);

/// Image of p under the relabelling i -> i + shift (mod n).
SetPartition rotate(const SetPartition& p, int shift);

/// Finest common coarsening. Throws std::invalid_argument on size mismatch.
SetPartition join(const SetPartition& p, const SetPartition& q);

/// All pi in P(k) with join(pi, gamma) = 1_k.
std::vector<SetPartition> connecting_partitions(const IntervalPartition& gamma,
                                                int cap = kDefaultPartitionCap);

/// (-1)^{|p|-1} (|p|-1)!
std::int64_t moebius_weight(const SetPartition& p);

/// Line-delimited block notation, one partition per line.
void write_partitions(std::ostream& os, std::span<const SetPartition> parts);
std::vector<SetPartition> read_partitions(std::istream& is);

}  // namespace sre
