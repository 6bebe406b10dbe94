#include "sre/oracle.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "sre/errors.hpp"

namespace sre {

// ---------------------------------------------------------------- CycleSpec

CycleSpec::CycleSpec(std::vector<std::vector<int>> insertions) : cycles_(std::move(insertions)) {
  if (cycles_.empty()) throw PreconditionError("cycle spec needs at least one cycle");
  for (const auto& c : cycles_) {
    if (c.empty()) throw PreconditionError("every cycle needs at least one edge");
    for (int p : c)
      if (p < 0) throw PreconditionError("insertion counts must be nonnegative");
  }
}

CycleSpec CycleSpec::from_lengths(const std::vector<int>& lengths) {
  std::vector<std::vector<int>> cycles;
  for (int n : lengths) {
    if (n < 1) throw PreconditionError("cycle lengths must be positive");
    cycles.emplace_back(static_cast<std::size_t>(n), 0);
  }
  return CycleSpec(std::move(cycles));
}

CycleSpec CycleSpec::parse(std::string_view text) {
  auto first = text.find_first_not_of(" \t");
  if (first != std::string_view::npos && text[first] == '[') {
    auto j = nlohmann::json::parse(text);
    return CycleSpec(j.get<std::vector<std::vector<int>>>());
  }
  std::vector<int> lengths;
  std::string item;
  std::istringstream is{std::string(text)};
  while (std::getline(is, item, ',')) {
    try {
      std::size_t used = 0;
      lengths.push_back(std::stoi(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw PreconditionError("cannot parse cycle length '" + item + "'");
    }
  }
  return from_lengths(lengths);
}

int CycleSpec::edge_count() const noexcept {
  int n = 0;
  for (const auto& c : cycles_) n += static_cast<int>(c.size());
  return n;
}

int CycleSpec::insertion_count() const noexcept {
  int m = 0;
  for (const auto& c : cycles_)
    for (int p : c) m += p;
  return m;
}

CycleSpec CycleSpec::single_cycle(int c) const { return CycleSpec({cycles_.at(c)}); }

std::string CycleSpec::to_string() const { return nlohmann::json(cycles_).dump(); }

// ---------------------------------------------------------------- graphs

EdgeGraph power_insertion_graph(const CycleSpec& cs) {
  EdgeGraph g;
  for (int c = 0; c < cs.cycle_count(); ++c) {
    const auto& ins = cs.insertions(c);
    const int n = static_cast<int>(ins.size());
    std::vector<int> black(n);
    // Black slot of edge l is followed by that edge's white slots.
    std::vector<std::vector<int>> whites(n);
    for (int l = 0; l < n; ++l) {
      black[l] = static_cast<int>(g.slots.size());
      g.slots.push_back({true, c});
      for (int w = 0; w < ins[l]; ++w) {
        whites[l].push_back(static_cast<int>(g.slots.size()));
        g.slots.push_back({false, c});
      }
    }
    for (int l = 0; l < n; ++l) {
      int from = black[l];
      for (int w : whites[l]) {
        g.edges.push_back({from, w});
        g.edge_cycle.push_back(c);
        from = w;
      }
      g.edges.push_back({from, black[(l + 1) % n]});
      g.edge_cycle.push_back(c);
      g.gamma_lengths.push_back(ins[l] + 1);
    }
  }
  return g;
}

EdgeGraph entrywise_graph(const CycleSpec& cs) {
  EdgeGraph g;
  for (int c = 0; c < cs.cycle_count(); ++c) {
    const auto& ms = cs.insertions(c);
    const int n = static_cast<int>(ms.size());
    if (n < 2) {
      throw PreconditionError("entry-wise oracle needs off-diagonal cycles (n_c >= 2); a single element M_ii "
                              "cannot close a loop with distinct indices");
    }
    const int base = static_cast<int>(g.slots.size());
    for (int l = 0; l < n; ++l) g.slots.push_back({true, c});
    for (int l = 0; l < n; ++l) {
      int i = base + l, j = base + (l + 1) % n;
      g.edges.push_back({i, j});
      g.edge_cycle.push_back(c);
      for (int r = 0; r < ms[l]; ++r) {
        g.edges.push_back({i, j});
        g.edges.push_back({j, i});
        g.edge_cycle.push_back(c);
        g.edge_cycle.push_back(c);
      }
      g.gamma_lengths.push_back(1 + 2 * ms[l]);
      g.compensation += ms[l];
    }
  }
  return g;
}

// ---------------------------------------------------------------- exponent search

namespace {

constexpr int kMaxEdges = 16;
constexpr int kNoValue = INT_MIN / 4;

struct SearchOutcome {
  enum class Status { Value, BelowFloor, Vanishing } status = Status::Vanishing;
  int value = kNoValue;
  std::vector<int> slot_class;
};

// Branch and bound over identifications of white slots. Black slots stay in
// their own classes; each white slot joins an existing class or opens a new
// one. Leaves are admissible when every class is balanced in every part.
class AssignmentSearch {
 public:
  AssignmentSearch(const EdgeGraph& g, const SetPartition& p) : g_(g) {
    k_ = g.edge_count();
    if (k_ > kMaxEdges || static_cast<int>(g.slots.size()) > kMaxEdges) {
      throw SizeLimitError("exponent search supports at most " + std::to_string(kMaxEdges) + " matrix elements");
    }
    if (p.ground_size() != k_) {
      throw PreconditionError("partition ground size " + std::to_string(p.ground_size()) + " differs from " +
                              std::to_string(k_) + " matrix elements");
    }
    parts_ = p.block_count();
    for (int e = 0; e < k_; ++e) part_of_[e] = p.block_of(e + 1);
    const int S = static_cast<int>(g.slots.size());
    for (auto& row : d_) row.fill(0);
    for (int e = 0; e < k_; ++e) {
      --d_[g.edges[e].row][part_of_[e]];
      ++d_[g.edges[e].col][part_of_[e]];
    }
    for (int s = 0; s < S; ++s) (g.slots[s].black ? blacks_ : whites_).push_back(s);
    const int W = static_cast<int>(whites_.size());
    rem_l1_.assign(W + 1, 0);
    rem_zero_.assign(W + 1, 0);
    rem_nonzero_.assign(W + 1, 0);
    for (int w = W - 1; w >= 0; --w) {
      int l1 = 0;
      for (int q = 0; q < parts_; ++q) l1 += std::abs(d_[whites_[w]][q]);
      rem_l1_[w] = rem_l1_[w + 1] + l1;
      rem_zero_[w] = rem_zero_[w + 1] + (l1 == 0);
      rem_nonzero_[w] = rem_nonzero_[w + 1] + (l1 != 0);
    }
    slot_class_.assign(S, -1);
  }

  SearchOutcome run(int floor) {
    floor_ = floor;
    best_ = kNoValue;
    any_admissible_ = false;
    classes_ = 0;
    imbalance_ = 0;
    for (auto& row : cd_) row.fill(0);
    for (int b : blacks_) {
      slot_class_[b] = classes_;
      for (int q = 0; q < parts_; ++q) {
        cd_[classes_][q] = d_[b][q];
        imbalance_ += std::abs(d_[b][q]);
      }
      ++classes_;
    }
    descend(0, 0);
    SearchOutcome out;
    if (best_ != kNoValue) {
      out.status = SearchOutcome::Status::Value;
      out.value = best_;
      out.slot_class = best_assignment_;
    } else {
      out.status = any_admissible_ || floor_ > kNoValue ? SearchOutcome::Status::BelowFloor
                                                         : SearchOutcome::Status::Vanishing;
    }
    return out;
  }

  int loops_in_part(int q, std::vector<std::vector<int>>* listing = nullptr) const {
    std::array<int, kMaxEdges> parent{};
    std::array<bool, kMaxEdges> touched{};
    for (int c = 0; c < classes_; ++c) parent[c] = c;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    int nodes = 0, unions = 0;
    for (int e = 0; e < k_; ++e) {
      if (part_of_[e] != q) continue;
      int a = slot_class_[g_.edges[e].row], b = slot_class_[g_.edges[e].col];
      for (int x : {a, b})
        if (!touched[x]) {
          touched[x] = true;
          ++nodes;
        }
      a = find(a);
      b = find(b);
      if (a != b) {
        parent[std::max(a, b)] = std::min(a, b);
        ++unions;
      }
    }
    if (listing) {
      std::map<int, std::vector<int>> by_root;
      for (int e = 0; e < k_; ++e)
        if (part_of_[e] == q) by_root[find(slot_class_[g_.edges[e].row])].push_back(e + 1);
      for (auto& [root, edges] : by_root) listing->push_back(edges);
    }
    return nodes - unions;
  }

  void set_assignment(const std::vector<int>& sc) {
    slot_class_ = sc;
    classes_ = sc.empty() ? 0 : *std::max_element(sc.begin(), sc.end()) + 1;
  }

  int parts() const { return parts_; }

 private:
  void descend(int w, int white_classes) {
    const int W = static_cast<int>(whites_.size());
    if (imbalance_ > rem_l1_[w]) return;
    const int bound = parts_ - k_ + white_classes + rem_zero_[w] + rem_nonzero_[w] / 2 + g_.compensation;
    if (bound < floor_ || bound <= best_) return;
    if (w == W) {
      if (imbalance_ != 0) return;
      any_admissible_ = true;
      int loops = 0;
      for (int q = 0; q < parts_; ++q) loops += loops_in_part(q);
      const int value = 2 * parts_ - loops - k_ + white_classes + g_.compensation;
      if (value >= floor_ && value > best_) {
        best_ = value;
        best_assignment_ = slot_class_;
      }
      return;
    }
    const int s = whites_[w];
    // New class first: more free sums tend to find strong incumbents early.
    for (int c = classes_; c >= 0; --c) {
      const bool fresh = (c == classes_);
      int delta = 0;
      for (int q = 0; q < parts_; ++q) {
        delta += std::abs(cd_[c][q] + d_[s][q]) - std::abs(cd_[c][q]);
        cd_[c][q] += d_[s][q];
      }
      imbalance_ += delta;
      slot_class_[s] = c;
      if (fresh) ++classes_;
      descend(w + 1, white_classes + (fresh ? 1 : 0));
      if (fresh) --classes_;
      slot_class_[s] = -1;
      imbalance_ -= delta;
      for (int q = 0; q < parts_; ++q) cd_[c][q] -= d_[s][q];
    }
  }

  const EdgeGraph& g_;
  int k_ = 0;
  int parts_ = 0;
  std::array<int, kMaxEdges> part_of_{};
  std::array<std::array<int, kMaxEdges>, kMaxEdges> d_{};
  std::array<std::array<int, kMaxEdges>, kMaxEdges + 1> cd_{};
  std::vector<int> blacks_, whites_;
  std::vector<int> rem_l1_, rem_zero_, rem_nonzero_;
  std::vector<int> slot_class_;
  std::vector<int> best_assignment_;
  int classes_ = 0;
  int imbalance_ = 0;
  int floor_ = kNoValue;
  int best_ = kNoValue;
  bool any_admissible_ = false;
};

void check_oracle_cap(int k, int cap) {
  if (k > cap) {
    throw SizeLimitError("cycle spec has k = " + std::to_string(k) + " matrix elements, above the oracle cap " +
                         std::to_string(cap) + " (Bell(" + std::to_string(k) + ") = " +
                         (k <= 25 ? std::to_string(bell_number(k)) : std::string("?")) + " partitions)");
  }
}

}  // namespace

std::optional<LoopAssignment> best_loop_assignment(const EdgeGraph& g, const SetPartition& p) {
  AssignmentSearch search(g, p);
  auto out = search.run(kNoValue);
  if (out.status != SearchOutcome::Status::Value) return std::nullopt;
  LoopAssignment la;
  la.partition = p;
  la.slot_class = out.slot_class;
  la.exponent = out.value;
  search.set_assignment(out.slot_class);
  for (int q = 0; q < search.parts(); ++q) {
    la.loops.emplace_back();
    search.loops_in_part(q, &la.loops.back());
  }
  std::set<int> with_black;
  for (std::size_t s = 0; s < g.slots.size(); ++s)
    if (g.slots[s].black) with_black.insert(la.slot_class[s]);
  std::set<int> all(la.slot_class.begin(), la.slot_class.end());
  la.free_classes = static_cast<int>(all.size() - with_black.size());
  return la;
}

Exponent exponent_of_partition(const EdgeGraph& g, const SetPartition& p) {
  AssignmentSearch search(g, p);
  auto out = search.run(kNoValue);
  if (out.status == SearchOutcome::Status::Value) return out.value;
  return std::nullopt;
}

Exponent exponent_of_partition(const CycleSpec& cs, const SetPartition& p) {
  return exponent_of_partition(power_insertion_graph(cs), p);
}

LeadingResult leading_exponent(const EdgeGraph& g, int cap) {
  check_oracle_cap(g.edge_count(), cap);
  const auto connecting = connecting_partitions(g.gamma(), std::max(cap, g.edge_count()));
  // Search floor 2 - r - n; gamma has one interval per edge between black dots.
  const std::set<int> cycles(g.edge_cycle.begin(), g.edge_cycle.end());
  const int target = 2 - static_cast<int>(cycles.size()) - static_cast<int>(g.gamma_lengths.size());
  LeadingResult result;
  result.connecting_count = connecting.size();
  auto scan = [&](int start_floor) {
    std::vector<std::pair<std::size_t, int>> hits;
    int floor = start_floor;
    for (std::size_t i = 0; i < connecting.size(); ++i) {
      AssignmentSearch search(g, connecting[i]);
      auto out = search.run(floor);
      if (out.status == SearchOutcome::Status::Value) {
        hits.emplace_back(i, out.value);
        floor = std::max(floor, out.value);
      }
    }
    return std::make_pair(hits, floor);
  };
  auto [hits, best] = scan(target);
  if (hits.empty()) std::tie(hits, best) = scan(kNoValue);
  if (hits.empty()) return result;
  result.exponent = best;
  for (auto& [i, v] : hits)
    if (v == best) result.argmax.push_back(connecting[i]);
  return result;
}

LeadingResult leading_exponent(const CycleSpec& cs, int cap) {
  return leading_exponent(power_insertion_graph(cs), cap);
}

std::vector<PartitionExponent> all_connecting_exponents(const EdgeGraph& g, int cap) {
  check_oracle_cap(g.edge_count(), cap);
  std::vector<PartitionExponent> out;
  for (const auto& p : connecting_partitions(g.gamma(), std::max(cap, g.edge_count())))
    out.push_back({p, exponent_of_partition(g, p)});
  return out;
}

std::vector<SetPartition> factorized_start(const CycleSpec& cs, int cap) {
  const EdgeGraph full = power_insertion_graph(cs);
  check_oracle_cap(full.edge_count(), cap);
  std::vector<std::vector<SetPartition>> per_cycle;
  std::vector<int> offsets;
  int offset = 0;
  for (int c = 0; c < cs.cycle_count(); ++c) {
    const CycleSpec one = cs.single_cycle(c);
    const EdgeGraph g = power_insertion_graph(one);
    const int target = 1 - one.edge_count();
    std::vector<SetPartition> leading;
    for (const auto& p : connecting_partitions(g.gamma(), std::max(cap, g.edge_count()))) {
      if (!is_noncrossing(p)) continue;
      AssignmentSearch search(g, p);
      auto out = search.run(target);
      if (out.status == SearchOutcome::Status::Value && out.value == target) leading.push_back(p);
    }
    per_cycle.push_back(std::move(leading));
    offsets.push_back(offset);
    offset += g.edge_count();
  }
  std::vector<SetPartition> out;
  std::vector<int> labels(static_cast<std::size_t>(offset));
  std::vector<std::size_t> pick(per_cycle.size(), 0);
  for (const auto& list : per_cycle)
    if (list.empty()) return out;
  while (true) {
    int label_base = 0;
    for (std::size_t c = 0; c < per_cycle.size(); ++c) {
      const auto& p = per_cycle[c][pick[c]];
      for (int e = 1; e <= p.ground_size(); ++e) labels[offsets[c] + e - 1] = label_base + p.block_of(e);
      label_base += p.block_count();
    }
    out.push_back(SetPartition::from_labels(labels));
    std::size_t c = 0;
    while (c < pick.size() && ++pick[c] == per_cycle[c].size()) pick[c++] = 0;
    if (c == pick.size()) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------- moves

std::string to_string(MoveKind kind) {
  switch (kind) {
    case MoveKind::JoinParts: return "join_parts";
    case MoveKind::ExchangeSegments: return "exchange_segments";
    case MoveKind::TripleInsert: return "triple_insert";
  }
  return "?";
}

int predicted_cost(MoveKind kind) { return kind == MoveKind::TripleInsert ? -4 : -2; }
int budget_units(MoveKind kind) { return kind == MoveKind::TripleInsert ? 2 : 1; }

std::string Move::describe() const {
  std::ostringstream os;
  os << to_string(kind) << " parts";
  for (int p : parts) os << ' ' << p;
  for (const auto& s : segments) {
    os << " [";
    for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
    os << ']';
  }
  return os.str();
}

SetPartition components(const EdgeGraph& g, const SetPartition& p) {
  return join(p, g.gamma().as_set_partition());
}

namespace {

// A run of a part in its loop order (ascending edge ids, cyclic).
struct Run {
  std::vector<int> edges;
  bool full = false;
  int before = 0;  // element preceding the run inside the part
  int after = 0;   // element following the run inside the part
};

std::vector<Run> runs_of(const std::vector<int>& block) {
  std::vector<Run> out;
  const int s = static_cast<int>(block.size());
  Run full;
  full.edges = block;
  full.full = true;
  out.push_back(full);
  for (int len = 1; len < s; ++len)
    for (int t = 0; t < s; ++t) {
      Run r;
      for (int i = 0; i < len; ++i) r.edges.push_back(block[(t + i) % s]);
      r.before = block[(t + s - 1) % s];
      r.after = block[(t + len) % s];
      out.push_back(std::move(r));
    }
  return out;
}

// Color of the dot where a loop is cut between edge x and its successor y.
bool cut_is_black(const EdgeGraph& g, int x, int y) {
  return g.slots[g.edges[x - 1].col].black || g.slots[g.edges[y - 1].row].black;
}

bool run_start_black(const EdgeGraph& g, const Run& r) { return cut_is_black(g, r.before, r.edges.front()); }
bool run_end_black(const EdgeGraph& g, const Run& r) { return cut_is_black(g, r.edges.back(), r.after); }

// Deltas tie the end of run i to the start of run i+1 (cyclically). Two black
// dots from different cycles can never be equal.
bool deltas_allowed(const EdgeGraph& g, const std::vector<const Run*>& runs) {
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Run& a = *runs[i];
    const Run& b = *runs[(i + 1) % runs.size()];
    if (run_end_black(g, a) && run_start_black(g, b)) return false;
  }
  return true;
}

const Run* match_run(const std::vector<Run>& runs, const std::vector<int>& edges) {
  for (const auto& r : runs) {
    if (r.edges.size() != edges.size()) continue;
    if (r.full) {
      auto a = r.edges, b = edges;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      if (a == b) return &r;
    } else if (r.edges == edges) {
      return &r;
    }
  }
  return nullptr;
}

SetPartition regroup(const SetPartition& p, const std::vector<int>& parts,
                     const std::vector<std::vector<int>>& new_groups) {
  auto labels = p.labels();
  int next = p.block_count();
  (void)parts;
  for (const auto& group : new_groups) {
    if (group.empty()) continue;
    for (int e : group) labels[e - 1] = next;
    ++next;
  }
  return SetPartition::from_labels(labels);
}

struct MoveContext {
  EdgeGraph g;
  std::vector<SetPartition::Block> blocks;
  std::vector<int> component;  // per block
};

MoveContext context_for(const SetPartition& p, const CycleSpec& cs) {
  MoveContext ctx{power_insertion_graph(cs), p.blocks(), {}};
  if (p.ground_size() != ctx.g.edge_count()) {
    throw PreconditionError("partition has " + std::to_string(p.ground_size()) + " elements, spec has " +
                            std::to_string(ctx.g.edge_count()));
  }
  const SetPartition comps = components(ctx.g, p);
  for (const auto& b : ctx.blocks) ctx.component.push_back(comps.block_of(b.front()));
  return ctx;
}

// Validates the move and returns the new partition.
SetPartition perform(const SetPartition& p, const Move& m, const MoveContext& ctx) {
  const int nb = static_cast<int>(ctx.blocks.size());
  const std::size_t arity = m.kind == MoveKind::TripleInsert ? 3 : 2;
  if (m.parts.size() != arity) throw PreconditionError(to_string(m.kind) + " takes " + std::to_string(arity) + " parts");
  std::set<int> comps;
  for (int part : m.parts) {
    if (part < 0 || part >= nb) throw PreconditionError("part index " + std::to_string(part) + " out of range");
    comps.insert(ctx.component[part]);
  }
  if (comps.size() != arity) throw PreconditionError(to_string(m.kind) + " operands must lie in different connected components");

  if (m.kind == MoveKind::JoinParts) {
    if (!m.segments.empty()) throw PreconditionError("join_parts takes no segments");
    std::vector<int> merged = ctx.blocks[m.parts[0]];
    merged.insert(merged.end(), ctx.blocks[m.parts[1]].begin(), ctx.blocks[m.parts[1]].end());
    return regroup(p, m.parts, {merged});
  }

  if (m.segments.size() != arity) throw PreconditionError(to_string(m.kind) + " needs one segment per part");
  std::vector<const Run*> runs;
  std::vector<std::vector<Run>> storage(arity);
  for (std::size_t i = 0; i < arity; ++i) {
    storage[i] = runs_of(ctx.blocks[m.parts[i]]);
    const Run* r = match_run(storage[i], m.segments[i]);
    if (!r) throw PreconditionError("segment is not a contiguous run of part " + std::to_string(m.parts[i]));
    runs.push_back(r);
  }
  const bool all_full = std::all_of(runs.begin(), runs.end(), [](const Run* r) { return r->full; });
  const bool none_full = std::none_of(runs.begin(), runs.end(), [](const Run* r) { return r->full; });
  if (!all_full && !none_full) throw PreconditionError("segments must be all proper or all whole parts");
  if (none_full && !deltas_allowed(ctx.g, runs)) {
    throw PreconditionError("Kronecker delta between two black dots (at least one dot must be white)");
  }
  std::vector<int> inner, outer;
  for (std::size_t i = 0; i < arity; ++i) {
    inner.insert(inner.end(), runs[i]->edges.begin(), runs[i]->edges.end());
    for (int e : ctx.blocks[m.parts[i]])
      if (std::find(runs[i]->edges.begin(), runs[i]->edges.end(), e) == runs[i]->edges.end()) outer.push_back(e);
  }
  return regroup(p, m.parts, {inner, outer});
}

}  // namespace

MoveOutcome apply_move(const SetPartition& p, const Move& m, const CycleSpec& cs) {
  const MoveContext ctx = context_for(p, cs);
  MoveOutcome out;
  out.result = perform(p, m, ctx);
  out.predicted_cost = predicted_cost(m.kind);
  out.before = exponent_of_partition(ctx.g, p);
  out.after = exponent_of_partition(ctx.g, out.result);
  if (out.after) out.within_cost = out.before && (*out.after - *out.before <= out.predicted_cost);
  return out;
}

std::vector<Move> candidate_moves(const SetPartition& p, const CycleSpec& cs) {
  const MoveContext ctx = context_for(p, cs);
  const int nb = static_cast<int>(ctx.blocks.size());
  std::vector<std::vector<Run>> runs;
  for (const auto& b : ctx.blocks) runs.push_back(runs_of(b));
  std::vector<Move> out;
  for (int a = 0; a < nb; ++a)
    for (int b = a + 1; b < nb; ++b) {
      if (ctx.component[a] == ctx.component[b]) continue;
      out.push_back({MoveKind::JoinParts, {a, b}, {}});
      for (const auto& ra : runs[a])
        for (const auto& rb : runs[b]) {
          if (ra.full != rb.full) continue;
          if (!ra.full && !deltas_allowed(ctx.g, {&ra, &rb})) continue;
          out.push_back({MoveKind::ExchangeSegments, {a, b}, {ra.edges, rb.edges}});
        }
      for (int c = b + 1; c < nb; ++c) {
        if (ctx.component[c] == ctx.component[a] || ctx.component[c] == ctx.component[b]) continue;
        for (const auto& ra : runs[a])
          for (const auto& rb : runs[b])
            for (const auto& rc : runs[c]) {
              if (!(ra.full == rb.full && rb.full == rc.full)) continue;
              if (!ra.full && !deltas_allowed(ctx.g, {&ra, &rb, &rc})) continue;
              out.push_back({MoveKind::TripleInsert, {a, b, c}, {ra.edges, rb.edges, rc.edges}});
            }
      }
    }
  return out;
}

std::vector<SetPartition> reachable_set(const CycleSpec& cs, int cap) {
  const int r = cs.cycle_count();
  const EdgeGraph g = power_insertion_graph(cs);
  check_oracle_cap(g.edge_count(), cap);
  std::vector<std::unordered_set<SetPartition, SetPartitionHash>> level(static_cast<std::size_t>(r + 1));
  for (const auto& p : factorized_start(cs, cap)) level[components(g, p).block_count()].insert(p);
  for (int comps = r; comps >= 2; --comps) {
    std::vector<SetPartition> current(level[comps].begin(), level[comps].end());
    std::sort(current.begin(), current.end());
    for (const auto& p : current) {
      const MoveContext ctx = context_for(p, cs);
      for (const auto& m : candidate_moves(p, cs)) {
        const SetPartition next = perform(p, m, ctx);
        const int units = budget_units(m.kind);
        if (comps - units >= 1) level[comps - units].insert(next);
      }
    }
  }
  std::vector<SetPartition> out(level[1].begin(), level[1].end());
  std::sort(out.begin(), out.end());
  return out;
}

ClaimVerdict claim_check(const CycleSpec& cs, int cap) {
  const EdgeGraph g = power_insertion_graph(cs);
  ClaimVerdict v{cs, std::nullopt, cs.target_exponent(), false, false, false, {}, {}, {}, 0, 0};
  auto lead = leading_exponent(g, cap);
  v.leading = lead.exponent;
  v.argmax = lead.argmax;
  v.leading_matches = lead.exponent && *lead.exponent == v.target;
  v.start_count = factorized_start(cs, cap).size();
  const auto reach = reachable_set(cs, cap);
  v.reachable_count = reach.size();
  std::unordered_set<SetPartition, SetPartitionHash> reach_set(reach.begin(), reach.end());
  for (const auto& p : lead.argmax)
    if (!reach_set.count(p)) v.unreachable_argmax.push_back(p);
  v.argmax_reachable = v.unreachable_argmax.empty();
  if (lead.exponent) {
    for (const auto& p : reach) {
      AssignmentSearch search(g, p);
      auto out = search.run(*lead.exponent);
      if (out.status != SearchOutcome::Status::Value || out.value != *lead.exponent) v.subleading_reachable.push_back(p);
    }
  }
  v.reachable_leading = lead.exponent && v.subleading_reachable.empty();
  return v;
}

EntrywiseOracleResult entrywise_oracle(const CycleSpec& cs, int cap) {
  const EdgeGraph g = entrywise_graph(cs);
  EntrywiseOracleResult res;
  res.target = cs.target_exponent();
  auto lead = leading_exponent(g, cap);
  res.exponent = lead.exponent;
  res.argmax = lead.argmax;
  res.matches = lead.exponent && *lead.exponent == res.target;

  // Long loop: the first copy of every edge in a cycle, all cycles joined into
  // one part. Small loops: each extra (i->j, j->i) pair on its own.
  std::vector<int> labels(static_cast<std::size_t>(g.edge_count()), 0);
  int e = 0, next = 1;
  for (int c = 0; c < cs.cycle_count(); ++c)
    for (int m : cs.insertions(c)) {
      labels[e++] = 0;
      for (int r = 0; r < m; ++r) {
        labels[e++] = next;
        labels[e++] = next;
        ++next;
      }
    }
  res.long_small_loop = SetPartition::from_labels(labels);
  res.long_small_loop_leading =
      std::find(lead.argmax.begin(), lead.argmax.end(), res.long_small_loop) != lead.argmax.end();
  return res;
}

std::vector<CycleSpec> enumerate_cycle_specs(int max_r, int max_k) {
  // Canonical cycles: lexicographically smallest rotation of the insertion list.
  std::vector<std::pair<int, std::vector<int>>> cycles;  // (elements, insertions)
  std::function<void(std::vector<int>&, int)> grow = [&](std::vector<int>& ins, int used) {
    if (!ins.empty()) {
      bool canonical = true;
      for (std::size_t s = 1; s < ins.size() && canonical; ++s) {
        std::vector<int> rot(ins.begin() + s, ins.end());
        rot.insert(rot.end(), ins.begin(), ins.begin() + s);
        if (rot < ins) canonical = false;
      }
      if (canonical) cycles.emplace_back(used, ins);
    }
    for (int p = 0; used + p + 1 <= max_k; ++p) {
      ins.push_back(p);
      grow(ins, used + p + 1);
      ins.pop_back();
    }
  };
  std::vector<int> scratch;
  grow(scratch, 0);
  std::sort(cycles.begin(), cycles.end());

  std::vector<CycleSpec> out;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t, int)> pick = [&](std::size_t from, int used) {
    if (!chosen.empty()) {
      std::vector<std::vector<int>> cs;
      for (auto i : chosen) cs.push_back(cycles[i].second);
      out.emplace_back(std::move(cs));
    }
    if (static_cast<int>(chosen.size()) == max_r) return;
    for (std::size_t i = from; i < cycles.size(); ++i) {
      if (used + cycles[i].first > max_k) continue;
      chosen.push_back(i);
      pick(i, used + cycles[i].first);
      chosen.pop_back();
    }
  };
  pick(0, 0);
  return out;
}

}  // namespace sre
