#include "sre/partition.hpp"

#include <algorithm>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "sre/errors.hpp"

namespace sre {
namespace {

void check_ground(int k) {
  if (k < 1 || k > kMaxGroundSize) {
    throw std::invalid_argument("ground size must lie in 1.." + std::to_string(kMaxGroundSize) +
                                ", got " + std::to_string(k));
  }
}

struct UnionFind {
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<int> parent;
};

}  // namespace

SetPartition::SetPartition(int ground_size, const std::vector<Block>& blocks) {
  check_ground(ground_size);
  std::vector<int> labels(static_cast<std::size_t>(ground_size), -1);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (blocks[b].empty()) throw std::invalid_argument("empty block in set partition");
    for (int e : blocks[b]) {
      if (e < 1 || e > ground_size) {
        throw std::invalid_argument("element " + std::to_string(e) + " outside 1.." +
                                    std::to_string(ground_size));
      }
      auto& slot = labels[static_cast<std::size_t>(e - 1)];
      if (slot != -1) throw std::invalid_argument("element " + std::to_string(e) + " in two blocks");
      slot = static_cast<int>(b);
    }
  }
  if (std::find(labels.begin(), labels.end(), -1) != labels.end()) {
    throw std::invalid_argument("blocks do not cover the ground set");
  }
  *this = from_labels(labels);
}

SetPartition SetPartition::from_labels(std::span<const int> labels) {
  check_ground(static_cast<int>(labels.size()));
  SetPartition p;
  p.size_ = static_cast<std::uint8_t>(labels.size());
  std::vector<std::pair<int, int>> seen;  // original label -> canonical
  int next = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) throw std::invalid_argument("negative block label");
    auto it = std::find_if(seen.begin(), seen.end(), [&](auto& s) { return s.first == labels[i]; });
    int canon;
    if (it == seen.end()) {
      canon = next++;
      seen.emplace_back(labels[i], canon);
    } else {
      canon = it->second;
    }
    p.rgs_[i] = static_cast<std::uint8_t>(canon);
  }
  p.blocks_ = static_cast<std::uint8_t>(next);
  return p;
}

SetPartition SetPartition::finest(int k) {
  check_ground(k);
  std::vector<int> labels(static_cast<std::size_t>(k));
  std::iota(labels.begin(), labels.end(), 0);
  return from_labels(labels);
}

SetPartition SetPartition::coarsest(int k) {
  check_ground(k);
  std::vector<int> labels(static_cast<std::size_t>(k), 0);
  return from_labels(labels);
}

SetPartition SetPartition::parse(std::string_view text) {
  std::vector<Block> blocks;
  Block current;
  bool open = false;
  int number = -1;
  int max_elem = 0;
  auto flush_number = [&] {
    if (number >= 0) {
      current.push_back(number);
      max_elem = std::max(max_elem, number);
      number = -1;
    }
  };
  for (char c : text) {
    if (c == '{') {
      if (open) throw std::invalid_argument("nested '{' in partition text");
      open = true;
    } else if (c == '}') {
      if (!open) throw std::invalid_argument("unbalanced '}' in partition text");
      flush_number();
      blocks.push_back(std::move(current));
      current.clear();
      open = false;
    } else if (c == ',') {
      flush_number();
    } else if (c >= '0' && c <= '9') {
      if (!open) throw std::invalid_argument("digit outside a block in partition text");
      number = (number < 0 ? 0 : number * 10) + (c - '0');
    } else if (c != ' ' && c != '\t' && c != '\r') {
      throw std::invalid_argument(std::string("unexpected character '") + c + "' in partition text");
    }
  }
  if (open) throw std::invalid_argument("unterminated block in partition text");
  return SetPartition(max_elem, blocks);
}

std::vector<SetPartition::Block> SetPartition::blocks() const {
  std::vector<Block> out(blocks_);
  for (int i = 0; i < size_; ++i) out[rgs_[i]].push_back(i + 1);
  return out;
}

std::vector<int> SetPartition::labels() const {
  return std::vector<int>(rgs_.begin(), rgs_.begin() + size_);
}

std::vector<int> SetPartition::block_sizes() const {
  std::vector<int> out(blocks_, 0);
  for (int i = 0; i < size_; ++i) ++out[rgs_[i]];
  return out;
}

std::string SetPartition::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::size_t SetPartition::hash() const noexcept {
  std::uint64_t h = 1469598103934665603ULL ^ size_;
  for (int i = 0; i < size_; ++i) {
    h ^= rgs_[i];
    h *= 1099511628211ULL;
  }
  return static_cast<std::size_t>(h);
}

std::ostream& operator<<(std::ostream& os, const SetPartition& p) {
  for (const auto& block : p.blocks()) {
    os << '{';
    for (std::size_t i = 0; i < block.size(); ++i) os << (i ? "," : "") << block[i];
    os << '}';
  }
  return os;
}

IntervalPartition::IntervalPartition(std::vector<int> lengths) : lengths_(std::move(lengths)) {
  if (lengths_.empty()) throw std::invalid_argument("interval partition needs at least one interval");
  for (int len : lengths_) {
    if (len < 1) throw std::invalid_argument("interval lengths must be positive");
    total_ += len;
  }
  check_ground(total_);
}

SetPartition IntervalPartition::as_set_partition() const {
  std::vector<int> labels;
  labels.reserve(static_cast<std::size_t>(total_));
  for (std::size_t i = 0; i < lengths_.size(); ++i) labels.insert(labels.end(), lengths_[i], static_cast<int>(i));
  return SetPartition::from_labels(labels);
}

std::uint64_t bell_number(int k) {
  if (k < 0 || k > 25) throw std::invalid_argument("bell_number defined here for 0..25");
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < k; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

std::uint64_t catalan_number(int n) {
  if (n < 0 || n > 33) throw std::invalid_argument("catalan_number defined here for 0..33");
  std::uint64_t c = 1;
  for (int i = 0; i < n; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

namespace {

class RgsWalker {
 public:
  RgsWalker(int k, bool noncrossing, const std::function<bool(const SetPartition&)>& visit)
      : k_(k), noncrossing_(noncrossing), visit_(visit), labels_(static_cast<std::size_t>(k)) {}

  void run() {
    labels_[0] = 0;
    first_.assign(1, 0);
    last_.assign(1, 0);
    step(1, 1);
  }

 private:
  // Element i (0-based) joining block b keeps the partition non-crossing iff
  // no other block starts before last(b) and has already moved past it.
  bool may_join(int b) const {
    for (std::size_t c = 0; c < first_.size(); ++c) {
      if (static_cast<int>(c) == b) continue;
      if (first_[c] < last_[b] && last_[c] > last_[b]) return false;
    }
    return true;
  }

  bool step(int i, int blocks) {
    if (i == k_) return visit_(SetPartition::from_labels(labels_));
    for (int b = 0; b <= blocks; ++b) {
      if (b < blocks) {
        if (noncrossing_ && !may_join(b)) continue;
        labels_[i] = b;
        int saved = last_[b];
        last_[b] = i;
        bool more = step(i + 1, blocks);
        last_[b] = saved;
        if (!more) return false;
      } else {
        labels_[i] = b;
        first_.push_back(i);
        last_.push_back(i);
        bool more = step(i + 1, blocks + 1);
        first_.pop_back();
        last_.pop_back();
        if (!more) return false;
      }
    }
    return true;
  }

  int k_;
  bool noncrossing_;
  const std::function<bool(const SetPartition&)>& visit_;
  std::vector<int> labels_;
  std::vector<int> first_;
  std::vector<int> last_;
};

void check_cap(int k, int cap, bool noncrossing) {
  if (k < 1) throw std::invalid_argument("partition size must be positive");
  if (k > cap) {
    std::ostringstream os;
    if (noncrossing) {
      os << "NC(" << k << ") has Catalan(" << k << ") = " << catalan_number(k)
         << " partitions, above the cap n <= " << cap;
    } else {
      os << "P(" << k << ") has Bell(" << k << ") = " << (k <= 25 ? std::to_string(bell_number(k)) : "?")
         << " partitions, above the cap k <= " << cap;
    }
    throw SizeLimitError(os.str());
  }
  check_ground(k);
}

}  // namespace

void for_each_partition(int k, const std::function<bool(const SetPartition&)>& visit, int cap) {
  check_cap(k, cap, false);
  RgsWalker(k, false, visit).run();
}

void for_each_noncrossing(int n, const std::function<bool(const SetPartition&)>& visit, int cap) {
  check_cap(n, cap, true);
  RgsWalker(n, true, visit).run();
}

std::vector<SetPartition> enumerate_partitions(int k, int cap) {
  check_cap(k, cap, false);
  std::vector<SetPartition> out;
  out.reserve(bell_number(k));
  for_each_partition(k, [&](const SetPartition& p) { out.push_back(p); return true; }, cap);
  return out;
}

std::vector<SetPartition> enumerate_noncrossing(int n, int cap) {
  check_cap(n, cap, true);
  std::vector<SetPartition> out;
  out.reserve(catalan_number(n));
  for_each_noncrossing(n, [&](const SetPartition& p) { out.push_back(p); return true; }, cap);
  return out;
}

bool is_noncrossing(const SetPartition& p) {
  const int n = p.ground_size();
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      if (p.block_of(a) == p.block_of(b)) continue;
      for (int c = b + 1; c <= n; ++c) {
        if (p.block_of(c) != p.block_of(a)) continue;
        for (int d = c + 1; d <= n; ++d)
          if (p.block_of(d) == p.block_of(b)) return false;
      }
    }
  return true;
}

SetPartition kreweras_complement(const SetPartition& p) {
  if (!is_noncrossing(p)) throw DomainError("Kreweras complement requires a non-crossing partition, got " + p.to_string());
  const int n = p.ground_size();
  // next[i]: successor of i inside its block, cyclically.
  std::vector<int> next(static_cast<std::size_t>(n + 1));
  for (const auto& block : p.blocks())
    for (std::size_t j = 0; j < block.size(); ++j) next[block[j]] = block[(j + 1) % block.size()];
  // Dual point i' is tied to (next(i) - 1)'; the cycles of that map are the blocks.
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  int label = 0;
  for (int start = 1; start <= n; ++start) {
    if (labels[start - 1] != -1) continue;
    for (int i = start; labels[i - 1] == -1;) {
      labels[i - 1] = label;
      i = next[i] - 1;
      if (i == 0) i = n;
    }
    ++label;
  }
  return SetPartition::from_labels(labels);
}

SetPartition rotate(const SetPartition& p, int shift) {
  const int n = p.ground_size();
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int e = 1; e <= n; ++e) {
    int target = ((e - 1 + shift) % n + n) % n;
    labels[static_cast<std::size_t>(target)] = p.block_of(e);
  }
  return SetPartition::from_labels(labels);
}

SetPartition join(const SetPartition& p, const SetPartition& q) {
  if (p.ground_size() != q.ground_size()) {
    throw std::invalid_argument("join of partitions on different ground sets (" + std::to_string(p.ground_size()) +
                                " vs " + std::to_string(q.ground_size()) + ")");
  }
  const int n = p.ground_size();
  UnionFind uf(n);
  std::vector<int> first_p(static_cast<std::size_t>(p.block_count()), -1);
  std::vector<int> first_q(static_cast<std::size_t>(q.block_count()), -1);
  for (int i = 0; i < n; ++i) {
    int bp = p.block_of(i + 1), bq = q.block_of(i + 1);
    if (first_p[bp] < 0) first_p[bp] = i; else uf.unite(first_p[bp], i);
    if (first_q[bq] < 0) first_q[bq] = i; else uf.unite(first_q[bq], i);
  }
  std::vector<int> labels(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) labels[i] = uf.find(i);
  return SetPartition::from_labels(labels);
}

std::vector<SetPartition> connecting_partitions(const IntervalPartition& gamma, int cap) {
  const SetPartition g = gamma.as_set_partition();
  std::vector<SetPartition> out;
  for_each_partition(gamma.ground_size(), [&](const SetPartition& p) {
    if (join(p, g).is_coarsest()) out.push_back(p);
    return true;
  }, cap);
  return out;
}

std::int64_t moebius_weight(const SetPartition& p) {
  std::int64_t w = 1;
  for (int i = 2; i < p.block_count(); ++i) w *= i;
  return (p.block_count() % 2 == 1) ? w : -w;
}

void write_partitions(std::ostream& os, std::span<const SetPartition> parts) {
  for (const auto& p : parts) os << p << '\n';
}

std::vector<SetPartition> read_partitions(std::istream& is) {
  std::vector<SetPartition> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.find('{') == std::string::npos) continue;
    out.push_back(SetPartition::parse(line));
  }
  return out;
}

}  // namespace sre
