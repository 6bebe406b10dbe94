#include "sre/cumulant.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "sre/errors.hpp"
#include "sre/parallel.hpp"
#include "sre/partition.hpp"

namespace sre {

// ---------------------------------------------------------------- observables

Slot Slot::entry(int row, int col, int power) {
  if (power < 1) throw PreconditionError("entry power must be at least 1");
  Slot s;
  s.kind = Kind::Entry;
  s.row = row;
  s.col = col;
  s.power = power;
  return s;
}

Slot Slot::trace_power(int p) {
  if (p < 1) throw PreconditionError("trace power must be at least 1");
  Slot s;
  s.kind = Kind::TracePower;
  s.power = p;
  return s;
}

Slot Slot::dressed_trace(std::vector<Profile1D> deltas) {
  if (deltas.empty()) throw PreconditionError("dressed trace needs at least one diagonal");
  Slot s;
  s.kind = Kind::DressedTrace;
  s.deltas = std::move(deltas);
  return s;
}

std::string Slot::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Entry:
      if (power == 1)
        os << "M_" << row << '_' << col;
      else
        os << "(M^" << power << ")_" << row << '_' << col;
      break;
    case Kind::TracePower: os << "tr(M^" << power << ")/N"; break;
    case Kind::DressedTrace:
      os << "tr(";
      for (const auto& d : deltas) os << "M*D" << d.describe();
      os << ")/N";
      break;
  }
  return os.str();
}

ObservableSpec ObservableSpec::entry_cycles(const std::vector<std::vector<int>>& cycles,
                                            const std::vector<std::vector<int>>& powers) {
  if (cycles.empty()) throw PreconditionError("at least one cycle is required");
  if (!powers.empty() && powers.size() != cycles.size())
    throw PreconditionError("power list must match the cycle list");
  std::vector<std::set<int>> used;
  ObservableSpec o;
  for (std::size_t c = 0; c < cycles.size(); ++c) {
    const auto& idx = cycles[c];
    if (idx.empty()) throw PreconditionError("empty index cycle");
    if (!powers.empty() && powers[c].size() != idx.size())
      throw PreconditionError("cycle " + std::to_string(c + 1) + " needs one power per edge");
    std::set<int> mine(idx.begin(), idx.end());
    for (std::size_t d = 0; d < used.size(); ++d)
      for (int i : mine)
        if (used[d].count(i))
          throw PreconditionError("cycles " + std::to_string(d + 1) + " and " + std::to_string(c + 1) +
                                  " share index " + std::to_string(i) + "; no pair of cycles may have an index in common");
    used.push_back(mine);
    for (std::size_t l = 0; l < idx.size(); ++l)
      o.slots.push_back(Slot::entry(idx[l], idx[(l + 1) % idx.size()], powers.empty() ? 1 : powers[c][l]));
  }
  return o;
}

ObservableSpec ObservableSpec::trace_powers(const std::vector<int>& powers) {
  ObservableSpec o;
  for (int p : powers) o.slots.push_back(Slot::trace_power(p));
  return o;
}

ObservableSpec ObservableSpec::dressed_trace(std::vector<Profile1D> deltas) {
  ObservableSpec o;
  o.slots.push_back(Slot::dressed_trace(std::move(deltas)));
  return o;
}

ObservableSpec ObservableSpec::repeated(const Slot& s, int n) {
  ObservableSpec o;
  o.slots.assign(static_cast<std::size_t>(n), s);
  return o;
}

std::string ObservableSpec::describe() const {
  std::string out = "C" + std::to_string(order()) + "[";
  for (std::size_t k = 0; k < slots.size(); ++k) out += (k ? "," : "") + slots[k].describe();
  return out + "]";
}

namespace {

void check_index(int i, Eigen::Index n) {
  if (i < 1 || i > n)
    throw std::out_of_range("matrix index " + std::to_string(i) + " outside 1.." + std::to_string(n));
}

class PowerCache {
 public:
  explicit PowerCache(const Matrix& m) : powers_{m} {}
  const Matrix& get(int p) {
    while (static_cast<int>(powers_.size()) < p) powers_.push_back(powers_.back() * powers_.front());
    return powers_[p - 1];
  }

 private:
  std::vector<Matrix> powers_;
};

cplx evaluate_slot(const Matrix& m, const Slot& s, PowerCache& cache) {
  const Eigen::Index n = m.rows();
  const double N = static_cast<double>(n);
  switch (s.kind) {
    case Slot::Kind::Entry: {
      check_index(s.row, n);
      check_index(s.col, n);
      if (s.power == 1) return m(s.row - 1, s.col - 1);
      Eigen::RowVectorXcd r = m.row(s.row - 1);
      for (int k = 1; k < s.power; ++k) r = r * m;
      return r(s.col - 1);
    }
    case Slot::Kind::TracePower: {
      if (s.power == 1) return m.trace() / N;
      if (s.power == 2) return m.squaredNorm() / N;
      const Matrix& a = cache.get((s.power + 1) / 2);
      const Matrix& b = cache.get(s.power / 2);
      return a.cwiseProduct(b.transpose()).sum() / N;
    }
    case Slot::Kind::DressedTrace: {
      auto column_scale = [&](Matrix& a, const Profile1D& d) {
        for (Eigen::Index k = 0; k < n; ++k) a.col(k) *= d(grid_point(static_cast<int>(k) + 1, static_cast<int>(n)));
      };
      Matrix a = m;
      column_scale(a, s.deltas[0]);
      for (std::size_t k = 1; k < s.deltas.size(); ++k) {
        a = a * m;
        column_scale(a, s.deltas[k]);
      }
      return a.trace() / N;
    }
  }
  return {};
}

bool slots_entry_local(const ObservableSpec& o) {
  for (const auto& s : o.slots) {
    if (s.kind == Slot::Kind::Entry && s.power != 1) return false;
    if (s.kind == Slot::Kind::TracePower && s.power != 1) return false;
    if (s.kind == Slot::Kind::DressedTrace && s.deltas.size() != 1) return false;
  }
  return true;
}

cplx evaluate_slot_from_entries(const MatrixModel& model, std::uint64_t index, const Slot& s) {
  const int n = model.N();
  if (s.kind == Slot::Kind::Entry) {
    check_index(s.row, n);
    check_index(s.col, n);
    return model.entry(index, s.row - 1, s.col - 1);
  }
  CompensatedComplexSum sum;
  for (int i = 0; i < n; ++i) {
    const double w = s.kind == Slot::Kind::DressedTrace ? s.deltas[0](grid_point(i + 1, n)) : 1.0;
    sum.add(model.entry(index, i, i) * w);
  }
  return sum.value() / static_cast<double>(n);
}

struct PartitionTable {
  // Each partition as block bitmasks with its Moebius weight.
  std::vector<std::pair<std::vector<unsigned>, double>> terms;
};

const PartitionTable& partition_table(int n) {
  static std::vector<PartitionTable> tables = [] {
    std::vector<PartitionTable> t(kMaxCumulantOrder + 1);
    for (int k = 1; k <= kMaxCumulantOrder; ++k)
      for (const auto& p : enumerate_partitions(k)) {
        std::vector<unsigned> masks;
        for (const auto& b : p.blocks()) {
          unsigned m = 0;
          for (int e : b) m |= 1u << (e - 1);
          masks.push_back(m);
        }
        t[k].terms.emplace_back(masks, static_cast<double>(moebius_weight(p)));
      }
    return t;
  }();
  return tables.at(n);
}

cplx cumulant_from_moments(const std::vector<cplx>& m, int n) {
  CompensatedComplexSum acc;
  for (const auto& [masks, weight] : partition_table(n).terms) {
    cplx prod = weight;
    for (unsigned b : masks) prod *= m[b];
    acc.add(prod);
  }
  return acc.value();
}

void subset_products(const std::vector<cplx>& x, std::vector<cplx>& out) {
  const unsigned full = 1u << x.size();
  out[0] = 1.0;
  for (unsigned b = 1; b < full; ++b) {
    const unsigned low = b & (~b + 1);
    out[b] = out[b ^ low] * x[static_cast<std::size_t>(std::countr_zero(low))];
  }
}

}  // namespace

std::vector<cplx> evaluate_observable(const Matrix& m, const ObservableSpec& o) {
  PowerCache cache(m);
  std::vector<cplx> out;
  out.reserve(o.slots.size());
  for (const auto& s : o.slots) out.push_back(evaluate_slot(m, s, cache));
  return out;
}

// ---------------------------------------------------------------- estimation

CumulantEstimate cumulant_from_records(const std::vector<std::vector<cplx>>& records) {
  const std::size_t M = records.size();
  if (M == 0) throw PreconditionError("cumulant estimate needs at least one sample");
  const int n = static_cast<int>(records[0].size());
  if (n < 1) throw PreconditionError("cumulant order must be at least 1");
  if (n > kMaxCumulantOrder)
    throw SizeLimitError("cumulant order " + std::to_string(n) + " exceeds the cap " +
                         std::to_string(kMaxCumulantOrder));
  for (const auto& r : records)
    if (static_cast<int>(r.size()) != n) throw PreconditionError("ragged sample records");

  CumulantEstimate est;
  est.order = n;
  est.samples = M;
  const double dM = static_cast<double>(M);

  if (n == 1) {
    CompensatedComplexSum sum;
    for (const auto& r : records) sum.add(r[0]);
    est.value = sum.value() / dM;
    if (M > 1) {
      CompensatedSum vr, vi;
      for (const auto& r : records) {
        const cplx d = r[0] - est.value;
        vr.add(d.real() * d.real());
        vi.add(d.imag() * d.imag());
      }
      est.std_error = std::sqrt(vr.value() / (dM - 1) / dM);
      est.std_error_im = std::sqrt(vi.value() / (dM - 1) / dM);
    }
    return est;
  }

  // Shift every slot by its first sample value: cumulants of order >= 2 are
  // shift invariant, and the moments stay well conditioned.
  const std::vector<cplx>& origin = records[0];
  const unsigned full = 1u << n;
  std::vector<CompensatedComplexSum> sums(full);
  std::vector<cplx> x(n), prod(full);
  for (const auto& r : records) {
    for (int k = 0; k < n; ++k) x[k] = r[k] - origin[k];
    subset_products(x, prod);
    for (unsigned b = 1; b < full; ++b) sums[b].add(prod[b]);
  }
  std::vector<cplx> total(full), moments(full);
  for (unsigned b = 1; b < full; ++b) {
    total[b] = sums[b].value();
    moments[b] = total[b] / dM;
  }
  est.value = cumulant_from_moments(moments, n);
  if (M < 2) return est;

  std::vector<cplx> loo(M);
  CompensatedComplexSum loo_sum;
  for (std::size_t s = 0; s < M; ++s) {
    for (int k = 0; k < n; ++k) x[k] = records[s][k] - origin[k];
    subset_products(x, prod);
    for (unsigned b = 1; b < full; ++b) moments[b] = (total[b] - prod[b]) / (dM - 1);
    loo[s] = cumulant_from_moments(moments, n);
    loo_sum.add(loo[s]);
  }
  const cplx loo_mean = loo_sum.value() / dM;
  CompensatedSum vr, vi;
  for (const auto& v : loo) {
    const cplx d = v - loo_mean;
    vr.add(d.real() * d.real());
    vi.add(d.imag() * d.imag());
  }
  est.std_error = std::sqrt((dM - 1) / dM * vr.value());
  est.std_error_im = std::sqrt((dM - 1) / dM * vi.value());
  est.bias = (dM - 1) * (loo_mean - est.value).real();
  return est;
}

std::vector<std::vector<cplx>> sample_records(const MatrixModel& model, const ObservableSpec& o,
                                              const EstimateOptions& opt) {
  if (opt.samples == 0) throw PreconditionError("sample count must be positive");
  if (o.order() < 1) throw PreconditionError("observable has no slots");
  std::vector<std::vector<cplx>> records(opt.samples);
  const bool fast = model.entry_local() && slots_entry_local(o);
  parallel_for(opt.samples, opt.jobs, [&](std::size_t s) {
    const std::uint64_t index = opt.first_index + s;
    if (fast) {
      records[s].reserve(o.slots.size());
      for (const auto& slot : o.slots) records[s].push_back(evaluate_slot_from_entries(model, index, slot));
    } else {
      records[s] = evaluate_observable(model.sample(index), o);
    }
  });
  return records;
}

CumulantEstimate estimate_cumulant(const MatrixModel& model, const ObservableSpec& o, const EstimateOptions& opt) {
  if (o.order() > kMaxCumulantOrder)
    throw SizeLimitError("cumulant order " + std::to_string(o.order()) + " exceeds the cap " +
                         std::to_string(kMaxCumulantOrder));
  auto est = cumulant_from_records(sample_records(model, o, opt));
  est.N = model.N();
  return est;
}

CyclicEstimate estimate_cyclic_cumulant(const MatrixModel& model, const std::vector<int>& indices,
                                        const EstimateOptions& opt) {
  CyclicEstimate out;
  out.cumulant = estimate_cumulant(model, ObservableSpec::entry_cycles({indices}), opt);
  const double scale = std::pow(static_cast<double>(model.N()), static_cast<double>(indices.size()) - 1.0);
  out.scaled = out.cumulant.value * scale;
  out.scaled_error = out.cumulant.std_error * scale;
  return out;
}

CumulantEstimate estimate_trace_cumulant(const MatrixModel& model, const std::vector<int>& powers,
                                         const EstimateOptions& opt) {
  if (powers.empty() || powers.size() > 4) throw PreconditionError("trace cumulants take 1 to 4 traces");
  for (int p : powers)
    if (p < 1 || p > 6) throw PreconditionError("trace powers must lie in 1..6");
  return estimate_cumulant(model, ObservableSpec::trace_powers(powers), opt);
}

// ---------------------------------------------------------------- CSV rows

std::string format_double(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string EstimateRow::csv_header() { return "ensemble,observable,N,samples,order,value_re,value_im,std_error,seed"; }

std::string EstimateRow::csv() const {
  std::ostringstream os;
  os << csv_field(ensemble) << ',' << csv_field(observable) << ',' << N << ',' << samples << ',' << order << ','
     << format_double(value_re) << ',' << format_double(value_im) << ',' << format_double(std_error) << ',' << seed;
  return os.str();
}

EstimateRow make_row(const MatrixModel& model, const ObservableSpec& o, const CumulantEstimate& e) {
  return {model.describe(), o.describe(), e.N,  e.samples, e.order, e.value.real(), e.value.imag(), e.std_error,
          model.ensemble().seed};
}

}  // namespace sre
