#include "boehm/mollifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include "boehm/errors.hpp"

namespace boehm {

namespace {

constexpr std::array<double, 5> kGL5Nodes{-0.9061798459386640, -0.5384693101056831, 0.0,
                                          0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGL5Weights{0.2369268850561891, 0.4786286704993665,
                                            0.5688888888888889, 0.4786286704993665,
                                            0.2369268850561891};

double raw_bump(double y) {
  const double q = 1.0 - y * y;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

// Cumulative data of a kernel at u: primitive, first moment, density.
struct Cumulative {
  double m0 = 0.0;
  double m1 = 0.0;
  double density = 0.0;
};

// Tabulated primitive and first moment of bump(1), interpolated by cubic
// Hermite using the exact derivatives φ and uφ.
struct BumpTable {
  static constexpr std::size_t cells = 4096;
  double constant = 0.0;
  double step = 2.0 / cells;
  std::vector<double> phi, m0, m1;

  BumpTable() {
    phi.resize(cells + 1);
    m0.resize(cells + 1);
    m1.resize(cells + 1);
    std::vector<double> c0(cells + 1, 0.0), c1(cells + 1, 0.0);
    for (std::size_t j = 0; j < cells; ++j) {
      const double a = node(j);
      const double b = node(j + 1);
      const double mid = 0.5 * (a + b);
      const double half = 0.5 * (b - a);
      double s0 = 0.0, s1 = 0.0;
      for (std::size_t q = 0; q < 5; ++q) {
        const double y = mid + half * kGL5Nodes[q];
        const double v = raw_bump(y);
        s0 += kGL5Weights[q] * v;
        s1 += kGL5Weights[q] * y * v;
      }
      c0[j + 1] = c0[j] + half * s0;
      c1[j + 1] = c1[j] + half * s1;
    }
    constant = 1.0 / c0[cells];
    for (std::size_t j = 0; j <= cells; ++j) {
      phi[j] = constant * raw_bump(node(j));
      m0[j] = constant * c0[j];
      m1[j] = constant * c1[j];
    }
  }

  double node(std::size_t j) const {
    return j == cells ? 1.0 : -1.0 + step * static_cast<double>(j);
  }

  Moments at(double y) const {
    const Cumulative c = cumulative(y);
    return {c.m0, c.m1};
  }

  Cumulative cumulative(double y) const {
    if (y <= -1.0) return {};
    if (y >= 1.0) return {m0[cells], m1[cells], 0.0};
    auto j = static_cast<std::size_t>((y + 1.0) / step);
    if (j >= cells) j = cells - 1;
    const double x0 = node(j);
    const double t = (y - x0) / step;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1;
    const double h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2;
    const double h11 = t3 - t2;
    const double x1 = node(j + 1);
    const double d0a = phi[j], d0b = phi[j + 1];
    const double d1a = x0 * phi[j], d1b = x1 * phi[j + 1];
    // Derivative of the Hermite cubic for the primitive.
    const double g00 = (6 * t2 - 6 * t) / step;
    const double g10 = 3 * t2 - 4 * t + 1;
    const double g01 = -g00;
    const double g11 = 3 * t2 - 2 * t;
    return {h00 * m0[j] + h10 * step * d0a + h01 * m0[j + 1] + h11 * step * d0b,
            h00 * m1[j] + h10 * step * d1a + h01 * m1[j + 1] + h11 * step * d1b,
            g00 * m0[j] + g10 * d0a + g01 * m0[j + 1] + g11 * d0b};
  }
};

const BumpTable& bump_table() {
  static const BumpTable table;
  return table;
}

double uniform_node(double lo, double hi, std::size_t j, std::size_t n) {
  return j == n ? hi : lo + (hi - lo) * (static_cast<double>(j) / static_cast<double>(n));
}

// Convolution of a piecewise-linear function with a kernel known through its
// cumulative data. Each segment contributes mean·∫φ + slope·∫(u-ū)φ; the
// second integral is read off the moment function on long segments and from
// the density on short ones, where the moment difference would cancel.
template <class CumulativeFn>
double apply_kernel(std::span<const double> x, std::span<const double> y, double at, double s,
                    const CumulativeFn& cumulative) {
  const double a = std::max(at - s, x.front());
  const double b = std::min(at + s, x.back());
  if (!(b > a)) return 0.0;
  auto it = std::upper_bound(x.begin(), x.end(), a);
  std::size_t k = it == x.begin() ? 0 : static_cast<std::size_t>(it - x.begin()) - 1;
  if (k + 1 >= x.size()) k = x.size() - 2;
  const double short_seg = s / 256.0;
  Cumulative prev = cumulative(at - a);
  double t0 = a;
  double sum = 0.0;
  while (t0 < b && k + 1 < x.size()) {
    const double t1 = std::min(x[k + 1], b);
    if (t1 > t0) {
      const Cumulative cur = cumulative(at - t1);
      const double slope = (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
      const double p0 = y[k] + slope * (t0 - x[k]);
      const double p1 = y[k] + slope * (t1 - x[k]);
      const double du = t1 - t0;
      const double mass = prev.m0 - cur.m0;
      const double centered =
          du > short_seg ? (prev.m1 - cur.m1) - (at - 0.5 * (t0 + t1)) * mass
                         : (prev.density - cur.density) * du * du / 12.0;
      sum += 0.5 * (p0 + p1) * mass + (p0 - p1) / du * centered;
      prev = cur;
      t0 = t1;
    }
    ++k;
  }
  return sum;
}

}  // namespace

double bump_constant() { return bump_table().constant; }

// --------------------------------------------------------------- nodes

struct TestFunction::Node {
  Kind kind = Kind::bump;
  double radius = 0.0;
  double factor_sum = 0.0;
  bool truncated = false;
  std::vector<TestFunction> factors;  // bumps; empty for a bump node

  mutable std::once_flag once;
  mutable GridFunction realization;
  mutable std::vector<double> grid, values, cum0, cum1;
  // Precomputed samples for heads handed over by infinite_convolution.
  std::vector<double> preset;
};

namespace {

// φ_a ∗ φ_b at x by Gauss-Legendre on 32 panels of the overlap. The
// narrower bump's variable is integrated so that its argument never comes
// from a difference of nearby numbers.
double bump_pair(double a, double b, double x) {
  if (b > a) std::swap(a, b);
  const double lo = std::max(-b, x - a);
  const double hi = std::min(b, x + a);
  if (!(hi > lo)) return 0.0;
  const double c = bump_constant();
  constexpr int panels = 32;
  const double w = (hi - lo) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * w;
    for (std::size_t q = 0; q < 5; ++q) {
      const double v = mid + 0.5 * w * kGL5Nodes[q];
      sum += kGL5Weights[q] * raw_bump(v / b) * raw_bump((x - v) / a);
    }
  }
  return 0.5 * w * sum * c * c / (a * b);
}

// Heads of φ_1 ∗ φ_2 ∗ ... sampled on a fixed uniform grid over [-S, S].
class HeadAccumulator {
 public:
  HeadAccumulator(double declared, std::size_t cells) : cells_(cells) {
    grid_.resize(cells + 1);
    for (std::size_t j = 0; j <= cells; ++j) grid_[j] = uniform_node(-declared, declared, j, cells);
  }

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  void push(const TestFunction& bump) {
    const double r = bump.radius();
    std::vector<double> next(grid_.size(), 0.0);
    if (count_ == 0) {
      for (std::size_t j = 0; j < grid_.size(); ++j) next[j] = bump(grid_[j]);
    } else if (count_ == 1) {
      for (std::size_t j = 0; j < grid_.size(); ++j) next[j] = bump_pair(first_, r, grid_[j]);
    } else {
      for (std::size_t j = 0; j < grid_.size(); ++j) next[j] = std::max(0.0, bump.apply(grid_, values_, grid_[j]));
    }
    if (count_ == 0) first_ = r;
    values_ = std::move(next);
    ++count_;
  }

 private:
  std::size_t cells_;
  std::size_t count_ = 0;
  double first_ = 0.0;
  std::vector<double> grid_, values_;
};

void realize(const TestFunction::Node& n, const TestFunction& self) {
  const double s = n.radius;
  if (n.kind == TestFunction::Kind::bump) {
    n.realization = sample([&](double t) { return self(t); }, OpenSet::interval(-s, s),
                           2.0 * s / kRealizationCells);
    return;
  }
  HeadAccumulator acc(s, kRealizationCells);
  if (!n.preset.empty()) {
    n.values = n.preset;
  } else {
    for (const auto& f : n.factors) acc.push(f);
    n.values = acc.values();
  }
  n.grid = acc.grid();
  const std::size_t cells = n.grid.size() - 1;
  n.cum0.assign(cells + 1, 0.0);
  n.cum1.assign(cells + 1, 0.0);
  for (std::size_t j = 0; j < cells; ++j) {
    const double z0 = n.grid[j];
    const double hz = n.grid[j + 1] - z0;
    const double w0 = n.values[j];
    const double m = (n.values[j + 1] - w0) / hz;
    n.cum0[j + 1] = n.cum0[j] + w0 * hz + m * hz * hz / 2.0;
    n.cum1[j + 1] =
        n.cum1[j] + z0 * w0 * hz + (z0 * m + w0) * hz * hz / 2.0 + m * hz * hz * hz / 3.0;
  }
  Piece p;
  p.span = {-s, s};
  p.x = n.grid;
  p.y = n.values;
  n.realization = GridFunction(OpenSet::interval(-s, s), 2.0 * s / cells, {std::move(p)});
}

}  // namespace

// ---------------------------------------------------------- TestFunction

TestFunction TestFunction::bump(double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw InvalidArgument("bump radius must be positive and finite");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::bump;
  n->radius = eps;
  n->factor_sum = eps;
  return TestFunction(std::move(n));
}

namespace {

void flatten_into(const TestFunction& f, std::vector<TestFunction>& out, double& declared,
                  bool& truncated) {
  declared += f.radius();
  truncated = truncated || f.truncated();
  for (const auto& b : f.factors()) out.push_back(b);
}

}  // namespace

TestFunction TestFunction::product(std::vector<TestFunction> factors) {
  if (factors.empty()) throw InvalidArgument("product of no test functions");
  if (factors.size() == 1) return factors.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  double declared = 0.0;
  bool truncated = false;
  for (const auto& f : factors) flatten_into(f, n->factors, declared, truncated);
  for (const auto& f : n->factors) n->factor_sum += f.radius();
  n->radius = truncated ? declared : n->factor_sum;
  n->truncated = truncated;
  return TestFunction(std::move(n));
}

TestFunction TestFunction::truncated_product(std::vector<TestFunction> factors,
                                             double declared_radius) {
  if (factors.empty()) throw InvalidArgument("product of no test functions");
  auto n = std::make_shared<Node>();
  n->kind = Kind::product;
  double declared = 0.0;
  bool truncated = true;
  for (const auto& f : factors) flatten_into(f, n->factors, declared, truncated);
  for (const auto& f : n->factors) n->factor_sum += f.radius();
  if (declared_radius < declared * (1.0 - 1e-15)) {
    throw InvalidArgument("declared radius is smaller than the factor radii");
  }
  n->radius = declared_radius;
  n->truncated = true;
  return TestFunction(std::move(n));
}

TestFunction make_realized_product(std::vector<TestFunction> factors, double declared,
                                   std::vector<double> samples) {
  TestFunction t = TestFunction::truncated_product(std::move(factors), declared);
  auto node = std::const_pointer_cast<TestFunction::Node>(t.node_);
  node->preset = std::move(samples);
  return t;
}

TestFunction::Kind TestFunction::kind() const { return node_->kind; }
double TestFunction::radius() const { return node_->radius; }
double TestFunction::factor_radius_sum() const { return node_->factor_sum; }
bool TestFunction::truncated() const { return node_->truncated; }

std::vector<TestFunction> TestFunction::factors() const {
  if (node_->kind == Kind::bump) return {*this};
  return node_->factors;
}

double TestFunction::operator()(double x) const {
  const Node& n = *node_;
  if (n.kind == Kind::bump) {
    return bump_constant() / n.radius * raw_bump(x / n.radius);
  }
  if (!(std::abs(x) < n.radius)) return 0.0;
  realization();
  return n.realization(x);
}

const GridFunction& TestFunction::realization() const {
  std::call_once(node_->once, [this] { realize(*node_, *this); });
  return node_->realization;
}

Moments TestFunction::moments(double u) const {
  const Node& n = *node_;
  if (n.kind == Kind::bump) {
    const Moments m = bump_table().at(u / n.radius);
    return {m.m0, m.m1 * n.radius};
  }
  realization();
  const std::size_t cells = n.grid.size() - 1;
  if (u <= n.grid.front()) return {};
  if (u >= n.grid.back()) return {n.cum0[cells], n.cum1[cells]};
  const double hz = (n.grid.back() - n.grid.front()) / static_cast<double>(cells);
  auto j = static_cast<std::size_t>((u - n.grid.front()) / hz);
  if (j >= cells) j = cells - 1;
  const double z0 = n.grid[j];
  const double tau = u - z0;
  const double w0 = n.values[j];
  const double m = (n.values[j + 1] - w0) / (n.grid[j + 1] - z0);
  return {n.cum0[j] + w0 * tau + m * tau * tau / 2.0,
          n.cum1[j] + z0 * w0 * tau + (z0 * m + w0) * tau * tau / 2.0 + m * tau * tau * tau / 3.0};
}

double TestFunction::apply(std::span<const double> x, std::span<const double> y,
                           double at) const {
  if (x.size() < 2) return 0.0;
  const Node& n = *node_;
  if (n.kind == Kind::bump) {
    const BumpTable& table = bump_table();
    const double r = n.radius;
    return apply_kernel(x, y, at, r, [&](double u) {
      const Cumulative c = table.cumulative(u / r);
      return Cumulative{c.m0, c.m1 * r, c.density / r};
    });
  }
  realization();
  const std::size_t cells = n.grid.size() - 1;
  return apply_kernel(x, y, at, n.radius, [&](double u) {
    const Moments m = moments(u);
    if (u <= n.grid.front() || u >= n.grid.back()) return Cumulative{m.m0, m.m1, 0.0};
    const double hz = (n.grid.back() - n.grid.front()) / static_cast<double>(cells);
    auto j = std::min(static_cast<std::size_t>((u - n.grid.front()) / hz), cells - 1);
    const double tau = (u - n.grid[j]) / (n.grid[j + 1] - n.grid[j]);
    return Cumulative{m.m0, m.m1, n.values[j] + tau * (n.values[j + 1] - n.values[j])};
  });
}

bool TestFunction::same_as(const TestFunction& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind() || radius() != other.radius() || truncated() != other.truncated()) {
    return false;
  }
  if (kind() == Kind::bump) return true;
  const auto& a = node_->factors;
  const auto& b = other.node_->factors;
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].radius() != b[i].radius()) return false;
  }
  return true;
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  os.precision(6);
  if (kind() == Kind::bump) {
    os << "bump(" << radius() << ")";
    return os.str();
  }
  os << (truncated() ? "truncated" : "product") << "[";
  const auto& fs = node_->factors;
  const std::size_t shown = std::min<std::size_t>(fs.size(), 4);
  for (std::size_t i = 0; i < shown; ++i) os << (i ? "," : "") << fs[i].radius();
  if (fs.size() > shown) os << ",... (" << fs.size() << " factors)";
  os << "] s=" << radius();
  return os.str();
}

TestFunction convolve_test(const TestFunction& phi, const TestFunction& psi) {
  return TestFunction::product({phi, psi});
}

// -------------------------------------------------------------- DeltaSeq

struct DeltaSeq::Impl {
  std::function<TestFunction(int)> rule;
  std::function<double(int)> radius;
  std::function<double(int)> tail;
  bool summable = false;
  double sum = 0.0;
  std::string label;

  std::mutex mu;
  std::map<int, TestFunction> cache;
};

DeltaSeq DeltaSeq::geometric(double s1, double ratio) {
  if (!(s1 > 0.0) || !std::isfinite(s1)) throw InvalidArgument("delta sequence: s1 must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw InvalidArgument("delta sequence: ratio must lie in (0,1)");
  auto impl = std::make_shared<Impl>();
  impl->radius = [s1, ratio](int n) { return s1 * std::pow(ratio, n - 1); };
  impl->rule = [r = impl->radius](int n) { return TestFunction::bump(r(n)); };
  impl->tail = [s1, ratio](int n) { return s1 * std::pow(ratio, n) / (1.0 - ratio); };
  impl->summable = true;
  impl->sum = s1 / (1.0 - ratio);
  std::ostringstream os;
  os << "geometric(" << s1 << "," << ratio << ")";
  impl->label = os.str();
  return DeltaSeq(std::move(impl));
}

DeltaSeq DeltaSeq::from_rule(std::function<TestFunction(int)> rule,
                             std::function<double(int)> radius, bool summable,
                             double radius_sum, std::string label) {
  auto impl = std::make_shared<Impl>();
  impl->rule = std::move(rule);
  impl->radius = std::move(radius);
  impl->summable = summable;
  impl->sum = radius_sum;
  if (summable) {
    impl->tail = [r = impl->radius, radius_sum](int n) {
      double head = 0.0;
      for (int k = 1; k <= n; ++k) head += r(k);
      return std::max(0.0, radius_sum - head);
    };
  }
  impl->label = std::move(label);
  return DeltaSeq(std::move(impl));
}

DeltaSeq DeltaSeq::product(const DeltaSeq& a, const DeltaSeq& b) {
  auto impl = std::make_shared<Impl>();
  impl->rule = [a, b](int n) { return convolve_test(a[n], b[n]); };
  impl->radius = [a, b](int n) { return a.radius(n) + b.radius(n); };
  impl->summable = a.summable() && b.summable();
  if (impl->summable) {
    impl->sum = a.radius_sum() + b.radius_sum();
    impl->tail = [a, b](int n) { return a.tail_sum(n) + b.tail_sum(n); };
  }
  impl->label = a.label() + "*" + b.label();
  return DeltaSeq(std::move(impl));
}

DeltaSeq DeltaSeq::shifted(int k) const {
  auto impl = std::make_shared<Impl>();
  DeltaSeq base = *this;
  impl->rule = [base, k](int n) { return base[n + k]; };
  impl->radius = [base, k](int n) { return base.radius(n + k); };
  impl->summable = summable();
  if (impl->summable) {
    impl->sum = tail_sum(k);
    impl->tail = [base, k](int n) { return base.tail_sum(n + k); };
  }
  impl->label = label() + ">>" + std::to_string(k);
  return DeltaSeq(std::move(impl));
}

const TestFunction& DeltaSeq::operator[](int n) const {
  if (n < 1) throw InvalidArgument("delta sequence index starts at 1");
  std::lock_guard lock(impl_->mu);
  auto it = impl_->cache.find(n);
  if (it == impl_->cache.end()) it = impl_->cache.emplace(n, impl_->rule(n)).first;
  return it->second;
}

double DeltaSeq::radius(int n) const { return impl_->radius(n); }
bool DeltaSeq::summable() const { return impl_->summable; }

double DeltaSeq::radius_sum() const {
  if (!impl_->summable) throw InvalidArgument("delta sequence radii are not summable");
  return impl_->sum;
}

double DeltaSeq::tail_sum(int n) const {
  if (!impl_->summable) throw InvalidArgument("delta sequence radii are not summable");
  return impl_->tail(n);
}

const std::string& DeltaSeq::label() const { return impl_->label; }

// ------------------------------------------------ infinite convolution

std::vector<std::vector<double>> product_heads(const DeltaSeq& seq, int n,
                                               double declared_radius) {
  HeadAccumulator acc(declared_radius, kRealizationCells);
  std::vector<std::vector<double>> heads;
  for (int k = 1; k <= n; ++k) {
    acc.push(seq[k]);
    heads.push_back(acc.values());
  }
  return heads;
}

InfiniteConvolution infinite_convolution(const DeltaSeq& seq, double tail_tol, double sup_tol,
                                         int max_terms) {
  if (!seq.summable()) throw InvalidArgument("infinite convolution needs summable radii");
  if (!(tail_tol > 0.0) || !(sup_tol > 0.0)) {
    throw InvalidArgument("infinite convolution tolerances must be positive");
  }
  const double declared = seq.radius_sum();
  HeadAccumulator acc(declared, kRealizationCells);
  std::vector<TestFunction> factors;
  std::vector<double> prev;
  for (int n = 1; n <= max_terms; ++n) {
    factors.push_back(seq[n]);
    acc.push(seq[n]);
    const auto& cur = acc.values();
    double step = std::numeric_limits<double>::infinity();
    if (!prev.empty()) {
      step = 0.0;
      for (std::size_t j = 0; j < cur.size(); ++j) step = std::max(step, std::abs(cur[j] - prev[j]));
    }
    const double tail = seq.tail_sum(n);
    if (tail < tail_tol && step < sup_tol) {
      InfiniteConvolution out{make_realized_product(factors, declared, cur), n, tail, step};
      return out;
    }
    prev = cur;
  }
  throw NoRegularizerFound("infinite convolution did not settle within the term budget");
}

}  // namespace boehm
