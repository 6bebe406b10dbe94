#pragma once

// Exact N-power counting for joint cumulants of products of matrix entries
// arranged in disjoint index cycles.
//
// Every matrix element is a directed edge row-slot -> column-slot. Black slots
// are fixed external indices (all distinct); white slots are summed indices
// introduced by power insertions. For a partition pi of the edges, a slot
// identification is admissible when every identified class is flow balanced
// inside every part (equal in- and out-degree). Each part then splits into l
// closed loops and contributes N^{2-l-|part|}; each class made only of white
// slots is a free sum and contributes N^{+1}. The exponent of pi is the best
// admissible identification; no admissible identification means the term
// vanishes.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sre/partition.hpp"

namespace sre {

inline constexpr int kDefaultOracleCap = 10;

/// r disjoint index cycles. Cycle c has n_c edges between consecutive black
/// dots; `insertions[c][l]` extra matrix elements sit on edge l. Read as power
/// insertions (M^{p+1})_{ij} by the polynomial oracle and as |M_ij|^2 factors
/// by the entry-wise oracle.
class CycleSpec {
 public:
  explicit CycleSpec(std::vector<std::vector<int>> insertions);
  /// Cycles of the given lengths without insertions.
  static CycleSpec from_lengths(const std::vector<int>& lengths);
  /// "2,2" (lengths) or a JSON array of per-edge insertion lists "[[1,0],[0]]".
  static CycleSpec parse(std::string_view text);

  int cycle_count() const noexcept { return static_cast<int>(cycles_.size()); }
  int cycle_length(int c) const { return static_cast<int>(cycles_.at(c).size()); }
  const std::vector<int>& insertions(int c) const { return cycles_.at(c); }
  const std::vector<std::vector<int>>& cycles() const noexcept { return cycles_; }

  /// n: edges between black dots.
  int edge_count() const noexcept;
  /// m: inserted elements.
  int insertion_count() const noexcept;
  /// 2 - r - n.
  int target_exponent() const noexcept { return 2 - cycle_count() - edge_count(); }

  /// Same spec restricted to one cycle.
  CycleSpec single_cycle(int c) const;

  std::string to_string() const;
  friend bool operator==(const CycleSpec&, const CycleSpec&) = default;

 private:
  std::vector<std::vector<int>> cycles_;
};

/// Edge/slot structure of a cumulant of products; `gamma` groups edges into
/// the cumulant's arguments.
struct EdgeGraph {
  struct Edge {
    int row;
    int col;
  };
  struct Slot {
    bool black;
    int cycle;
  };
  std::vector<Edge> edges;
  std::vector<Slot> slots;
  std::vector<int> edge_cycle;
  std::vector<int> gamma_lengths;
  /// N-power added to every term (entry-wise rescaling factors).
  int compensation = 0;

  int edge_count() const noexcept { return static_cast<int>(edges.size()); }
  IntervalPartition gamma() const { return IntervalPartition(gamma_lengths); }
};

/// Power insertions: edge l of cycle c becomes a segment of insertions+1 edges
/// through that many white slots. Edges are numbered cycle by cycle.
EdgeGraph power_insertion_graph(const CycleSpec& cs);

/// Entry-wise factors: Y_ij = M_ij (N |M_ij|^2)^m contributes m+1 copies of
/// i->j and m copies of j->i, all between black slots, plus N^m.
EdgeGraph entrywise_graph(const CycleSpec& cs);

/// Exponent value; std::nullopt marks a vanishing (ZERO) term.
using Exponent = std::optional<int>;

/// Best admissible identification found for one partition.
struct LoopAssignment {
  SetPartition partition;
  /// Class id per slot.
  std::vector<int> slot_class;
  /// Loops per part, each loop an ascending list of 1-based edge ids.
  std::vector<std::vector<std::vector<int>>> loops;
  int free_classes = 0;
  int exponent = 0;
};

std::optional<LoopAssignment> best_loop_assignment(const EdgeGraph& g, const SetPartition& p);

Exponent exponent_of_partition(const EdgeGraph& g, const SetPartition& p);
Exponent exponent_of_partition(const CycleSpec& cs, const SetPartition& p);

struct LeadingResult {
  Exponent exponent;
  /// Every connecting partition attaining the exponent (ties are kept).
  std::vector<SetPartition> argmax;
  std::size_t connecting_count = 0;
};

LeadingResult leading_exponent(const EdgeGraph& g, int cap = kDefaultOracleCap);
LeadingResult leading_exponent(const CycleSpec& cs, int cap = kDefaultOracleCap);

struct PartitionExponent {
  SetPartition partition;
  Exponent exponent;
};
/// Exact exponent of every connecting partition, in enumeration order.
std::vector<PartitionExponent> all_connecting_exponents(const EdgeGraph& g, int cap = kDefaultOracleCap);

/// Unions of per-cycle connecting partitions that are non-crossing in the
/// cycle order and attain the per-cycle maximum 1 - n_c.
std::vector<SetPartition> factorized_start(const CycleSpec& cs, int cap = kDefaultOracleCap);

enum class MoveKind { JoinParts, ExchangeSegments, TripleInsert };

std::string to_string(MoveKind kind);
int predicted_cost(MoveKind kind);
/// Connecting budget units: TripleInsert counts twice.
int budget_units(MoveKind kind);

/// A move on the partition lattice. `parts` index blocks of the canonical
/// partition; `segments[i]` is a cyclically contiguous run (1-based edge ids,
/// in loop order) of block parts[i]. JoinParts takes no segments.
struct Move {
  MoveKind kind;
  std::vector<int> parts;
  std::vector<std::vector<int>> segments;

  std::string describe() const;
};

struct MoveOutcome {
  SetPartition result;
  int predicted_cost = 0;
  Exponent before;
  Exponent after;
  /// after - before <= predicted cost (vanishing after counts as satisfied).
  bool within_cost = true;
};

/// Components of p relative to the cumulant's arguments: blocks of p v Gamma.
SetPartition components(const EdgeGraph& g, const SetPartition& p);

/// Throws PreconditionError for invalid operands.
MoveOutcome apply_move(const SetPartition& p, const Move& m, const CycleSpec& cs);
/// Every valid move from p.
std::vector<Move> candidate_moves(const SetPartition& p, const CycleSpec& cs);

/// Closure of factorized_start under moves, spending exactly r-1 budget units
/// (the partitions that end up connecting all cycles).
std::vector<SetPartition> reachable_set(const CycleSpec& cs, int cap = kDefaultOracleCap);

struct ClaimVerdict {
  CycleSpec spec;
  Exponent leading;
  int target = 0;
  bool leading_matches = false;   // (a)
  bool argmax_reachable = false;  // (b)
  bool reachable_leading = false; // (c)
  std::vector<SetPartition> argmax;
  std::vector<SetPartition> unreachable_argmax;
  std::vector<SetPartition> subleading_reachable;
  std::size_t reachable_count = 0;
  std::size_t start_count = 0;
};

ClaimVerdict claim_check(const CycleSpec& cs, int cap = kDefaultOracleCap);

struct EntrywiseOracleResult {
  Exponent exponent;  // includes the +m compensation
  int target = 0;
  bool matches = false;
  /// The long-loop / small-loop partition (joined across cycles) is an argmax.
  bool long_small_loop_leading = false;
  SetPartition long_small_loop;
  std::vector<SetPartition> argmax;
};

/// Requires every cycle to have n_c >= 2 (off-diagonal entries only).
EntrywiseOracleResult entrywise_oracle(const CycleSpec& cs, int cap = kDefaultOracleCap);

/// Representatives of all cycle specs with at most max_r cycles and at most
/// max_k matrix elements, up to rotating a cycle and reordering cycles.
std::vector<CycleSpec> enumerate_cycle_specs(int max_r, int max_k);

}  // namespace sre
