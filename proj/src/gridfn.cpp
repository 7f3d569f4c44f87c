#include "boehm/gridfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "boehm/errors.hpp"

namespace boehm {

namespace {

// Points this close to a component endpoint count as on the closure.
double slack(double x) { return 1e-12 * std::max(1.0, std::abs(x)); }

// Composite Simpson on possibly nonuniform knots.
double simpson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size() - 1;  // segments
  if (n == 0) return 0.0;
  if (n == 1) return 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
  double sum = 0.0;
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const double h0 = x[i + 1] - x[i];
    const double h1 = x[i + 2] - x[i + 1];
    if (h0 > 2.0 * h1 || h1 > 2.0 * h0) {
      sum += 0.5 * (h0 * (y[i] + y[i + 1]) + h1 * (y[i + 1] + y[i + 2]));
      continue;
    }
    sum += (h0 + h1) / 6.0 *
           ((2.0 - h1 / h0) * y[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * y[i + 1] +
            (2.0 - h0 / h1) * y[i + 2]);
  }
  if (i < n) {
    // One segment left: integrate the quadratic through the last three knots
    // over the last segment only.
    const double a = x[n - 1] - x[n - 2];
    const double b = x[n] - x[n - 1];
    if (a > 2.0 * b || b > 2.0 * a) return sum + 0.5 * b * (y[n - 1] + y[n]);
    sum += -b * b * b / (6.0 * a * (a + b)) * y[n - 2] + b * (3.0 * a + b) / (6.0 * a) * y[n - 1] +
           b * (3.0 * a + 2.0 * b) / (6.0 * (a + b)) * y[n];
  }
  return sum;
}

const Piece& host_piece(const GridFunction& f, double lo, double hi) {
  for (const auto& p : f.pieces()) {
    if (p.span.lo - slack(p.span.lo) <= lo && hi <= p.span.hi + slack(p.span.hi)) return p;
  }
  throw DomainError("set is not inside the closure of the function domain");
}

// Knots of p clipped to [lo, hi], with interpolated endpoint values.
void clipped(const Piece& p, double lo, double hi, std::vector<double>& xs,
             std::vector<double>& ys) {
  xs.clear();
  ys.clear();
  xs.push_back(lo);
  ys.push_back(p.eval(lo));
  auto first = std::upper_bound(p.x.begin(), p.x.end(), lo);
  for (auto it = first; it != p.x.end() && *it < hi; ++it) {
    xs.push_back(*it);
    ys.push_back(p.y[static_cast<std::size_t>(it - p.x.begin())]);
  }
  if (hi > lo) {
    xs.push_back(hi);
    ys.push_back(p.eval(hi));
  }
}

}  // namespace

// ------------------------------------------------------------------ Piece

double Piece::eval(double t) const {
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), t);
  const auto i = static_cast<std::size_t>(it - x.begin());
  const double x0 = x[i - 1];
  if (t == x0) return y[i - 1];
  const double x1 = x[i];
  return y[i - 1] + (y[i] - y[i - 1]) * ((t - x0) / (x1 - x0));
}

// ----------------------------------------------------------- GridFunction

GridFunction::GridFunction(OpenSet domain, double h, std::vector<Piece> pieces)
    : domain_(std::move(domain)), h_(h), pieces_(std::move(pieces)) {
  if (!(h_ > 0.0)) throw InvalidArgument("GridFunction: spacing must be positive");
  if (!domain_.bounded()) throw Unsupported("GridFunction: unbounded domain");
  if (pieces_.size() != domain_.size()) {
    throw InvalidArgument("GridFunction: one piece per domain component required");
  }
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    auto& p = pieces_[i];
    if (!(p.span == domain_.intervals()[i])) {
      throw InvalidArgument("GridFunction: piece span does not match domain component");
    }
    if (p.x.size() < 2 || p.x.size() != p.y.size()) {
      throw InvalidArgument("GridFunction: a piece needs at least two samples");
    }
    for (std::size_t k = 1; k < p.x.size(); ++k) {
      if (!(p.x[k] > p.x[k - 1])) throw InvalidArgument("GridFunction: knots not increasing");
    }
    if (p.x.front() > p.span.lo || p.x.back() < p.span.hi) {
      throw InvalidArgument("GridFunction: knots do not bracket the component");
    }
    for (double v : p.y) {
      if (!std::isfinite(v)) throw InvalidArgument("GridFunction: non-finite sample");
    }
    p.left_limit = p.eval(p.span.lo);
    p.right_limit = p.eval(p.span.hi);
  }
}

std::size_t GridFunction::knot_count() const {
  std::size_t n = 0;
  for (const auto& p : pieces_) n += p.x.size();
  return n;
}

double GridFunction::operator()(double x) const {
  for (const auto& p : pieces_) {
    if (p.span.lo - slack(p.span.lo) <= x && x <= p.span.hi + slack(p.span.hi)) {
      return p.eval(std::clamp(x, p.span.lo, p.span.hi));
    }
  }
  throw DomainError("GridFunction: point outside the closure of the domain");
}

std::vector<Zone> GridFunction::zones() const {
  std::vector<Zone> out;
  const double fine = 0.5 * h_;
  for (const auto& p : pieces_) {
    // A run of short segments; its spacing ignores the two end segments,
    // which join the run to the background.
    std::size_t start = 0;
    auto close = [&](std::size_t stop) {
      const std::size_t count = stop - start;
      if (count < 2) return;
      double spacing = 0.0;
      for (std::size_t k = start + (count > 2 ? 1 : 0); k < stop - (count > 2 ? 1 : 0); ++k) {
        spacing = std::max(spacing, p.x[k + 1] - p.x[k]);
      }
      out.push_back({p.x[start], p.x[stop], spacing});
    };
    bool open = false;
    for (std::size_t k = 0; k + 1 < p.x.size(); ++k) {
      const bool fine_seg = p.x[k + 1] - p.x[k] < fine;
      if (fine_seg && !open) {
        start = k;
        open = true;
      } else if (!fine_seg && open) {
        close(k);
        open = false;
      }
    }
    if (open) close(p.x.size() - 1);
  }
  return out;
}

// ------------------------------------------------------------ construction

namespace {

// Multiples of `step` strictly inside (lo, hi), keeping clear of the ends so
// no segment is much shorter than its neighbours.
void lattice_points(double lo, double hi, double step, std::vector<double>& pts) {
  const double first = std::floor(lo / step) + 1.0;
  const double last = std::ceil(hi / step) - 1.0;
  for (double k = first; k <= last; k += 1.0) {
    const double x = k * step;
    if (x - lo > 0.25 * step && hi - x > 0.25 * step) pts.push_back(x);
  }
}

}  // namespace

std::vector<double> build_knots(double lo, double hi, double h, std::span<const Zone> zones) {
  if (!(hi > lo)) throw InvalidArgument("build_knots: empty interval");
  std::vector<double> pts{lo, hi};
  pts.reserve(static_cast<std::size_t>((hi - lo) / h) + 3);
  lattice_points(lo, hi, h, pts);
  for (const auto& z : zones) {
    const double a = std::max(lo, z.lo);
    const double b = std::min(hi, z.hi);
    if (!(b > a) || !(z.spacing > 0.0) || z.spacing >= h) continue;
    // Dyadic refinement of the background lattice, so refined knots of
    // different functions coincide.
    const double step = std::ldexp(h, -static_cast<int>(std::ceil(std::log2(h / z.spacing))));
    std::vector<double> inner;
    lattice_points(a, b, step, inner);
    for (double x : inner) {
      if (x - lo > 0.25 * step && hi - x > 0.25 * step) pts.push_back(x);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

GridFunction sample(const std::function<double(double)>& eval, const OpenSet& u, double h,
                    std::span<const Zone> zones) {
  if (!(h > 0.0)) throw InvalidArgument("sample: spacing must be positive");
  if (!u.bounded()) throw Unsupported("sample: unbounded domain");
  std::vector<Piece> pieces;
  pieces.reserve(u.size());
  for (const auto& iv : u.intervals()) {
    Piece p;
    p.span = iv;
    p.x = build_knots(iv.lo, iv.hi, h, zones);
    p.y.reserve(p.x.size());
    for (double t : p.x) p.y.push_back(eval(t));
    pieces.push_back(std::move(p));
  }
  return GridFunction(u, h, std::move(pieces));
}

GridFunction from_evaluator(const std::function<double(double)>& eval, const OpenSet& u,
                            double h) {
  if (!(h > 0.0)) throw InvalidArgument("from_evaluator: spacing must be positive");
  if (!u.empty() && h > u.min_component_length()) {
    throw InvalidArgument("from_evaluator: spacing exceeds the shortest component");
  }
  return sample(eval, u, h);
}

// ------------------------------------------------------------------ norms

SupPoint sup_point_on(const GridFunction& f, const CompactSet& k) {
  SupPoint best{0.0, std::numeric_limits<double>::quiet_NaN()};
  for (const auto& iv : k.intervals()) {
    const Piece& p = host_piece(f, iv.lo, iv.hi);
    const double lo = std::max(iv.lo, p.span.lo);
    const double hi = std::min(iv.hi, p.span.hi);
    auto consider = [&](double t, double v) {
      if (std::isnan(best.location) || std::abs(v) > best.value) best = {std::abs(v), t};
    };
    consider(lo, p.eval(lo));
    auto first = std::upper_bound(p.x.begin(), p.x.end(), lo);
    for (auto it = first; it != p.x.end() && *it < hi; ++it) {
      consider(*it, p.y[static_cast<std::size_t>(it - p.x.begin())]);
    }
    consider(hi, p.eval(hi));
  }
  return best;
}

double sup_norm_on(const GridFunction& f, const CompactSet& k) { return sup_point_on(f, k).value; }

SupPoint sup_distance_on(const GridFunction& f, const GridFunction& g, const CompactSet& k) {
  SupPoint best{0.0, std::numeric_limits<double>::quiet_NaN()};
  for (const auto& iv : k.intervals()) {
    const Piece& p = host_piece(f, iv.lo, iv.hi);
    const Piece& q = host_piece(g, iv.lo, iv.hi);
    const double lo = std::max({iv.lo, p.span.lo, q.span.lo});
    const double hi = std::min({iv.hi, p.span.hi, q.span.hi});
    auto consider = [&](double t) {
      const double v = std::abs(p.eval(t) - q.eval(t));
      if (std::isnan(best.location) || v > best.value) best = {v, t};
    };
    consider(lo);
    for (const Piece* r : {&p, &q}) {
      auto first = std::upper_bound(r->x.begin(), r->x.end(), lo);
      for (auto it = first; it != r->x.end() && *it < hi; ++it) consider(*it);
    }
    consider(hi);
  }
  return best;
}

double l1_norm(const GridFunction& f) {
  double total = 0.0;
  std::vector<double> xs, ys;
  for (const auto& p : f.pieces()) {
    clipped(p, p.span.lo, p.span.hi, xs, ys);
    for (auto& v : ys) v = std::abs(v);
    total += simpson(xs, ys);
  }
  return total;
}

// -------------------------------------------------- restriction/extension

GridFunction restrict_grid(const GridFunction& f, const OpenSet& v) {
  if (!f.domain().contains(v)) {
    throw InvalidArgument("restrict_grid: target is not a subset of the domain");
  }
  std::vector<Piece> pieces;
  pieces.reserve(v.size());
  for (const auto& iv : v.intervals()) {
    const Piece& host = host_piece(f, iv.lo, iv.hi);
    // Last knot <= lo and first knot >= hi.
    auto lo_it = std::upper_bound(host.x.begin(), host.x.end(), iv.lo);
    auto hi_it = std::lower_bound(host.x.begin(), host.x.end(), iv.hi);
    const auto i0 = static_cast<std::size_t>(lo_it - host.x.begin()) - 1;
    const auto i1 = static_cast<std::size_t>(hi_it - host.x.begin());
    Piece p;
    p.span = iv;
    p.x.assign(host.x.begin() + static_cast<std::ptrdiff_t>(i0),
               host.x.begin() + static_cast<std::ptrdiff_t>(i1) + 1);
    p.y.assign(host.y.begin() + static_cast<std::ptrdiff_t>(i0),
               host.y.begin() + static_cast<std::ptrdiff_t>(i1) + 1);
    pieces.push_back(std::move(p));
  }
  return GridFunction(v, f.h(), std::move(pieces));
}

GridFunction extend_continuously(const GridFunction& f, const OpenSet& t) {
  if (!t.contains(f.domain())) {
    throw InvalidArgument("extend_continuously: target does not contain the domain");
  }
  if (!t.bounded()) throw Unsupported("extend_continuously: unbounded target");
  std::vector<Piece> pieces;
  pieces.reserve(t.size());
  std::vector<double> xs, ys;
  for (const auto& comp : t.intervals()) {
    Piece out;
    out.span = comp;
    std::vector<const Piece*> inner;
    for (const auto& p : f.pieces()) {
      if (comp.lo <= p.span.lo && p.span.hi <= comp.hi) inner.push_back(&p);
    }
    if (inner.empty()) {
      out.x = {comp.lo, comp.hi};
      out.y = {0.0, 0.0};
      pieces.push_back(std::move(out));
      continue;
    }
    if (comp.lo < inner.front()->span.lo) {
      out.x.push_back(comp.lo);
      out.y.push_back(inner.front()->left_limit);
    }
    for (const Piece* p : inner) {
      clipped(*p, p->span.lo, p->span.hi, xs, ys);
      out.x.insert(out.x.end(), xs.begin(), xs.end());
      out.y.insert(out.y.end(), ys.begin(), ys.end());
    }
    if (inner.back()->span.hi < comp.hi) {
      out.x.push_back(comp.hi);
      out.y.push_back(inner.back()->right_limit);
    }
    pieces.push_back(std::move(out));
  }
  return GridFunction(t, f.h(), std::move(pieces));
}

// ------------------------------------------------------------- arithmetic

GridFunction combine(double a, const GridFunction& f, double b, const GridFunction& g) {
  if (!(f.domain() == g.domain())) throw InvalidArgument("combine: domains differ");
  std::vector<Piece> pieces;
  pieces.reserve(f.pieces().size());
  for (std::size_t i = 0; i < f.pieces().size(); ++i) {
    const Piece& pf = f.pieces()[i];
    const Piece& pg = g.pieces()[i];
    Piece p;
    p.span = pf.span;
    if (pf.x == pg.x) {
      p.x = pf.x;
      p.y.resize(pf.y.size());
      for (std::size_t k = 0; k < p.y.size(); ++k) p.y[k] = a * pf.y[k] + b * pg.y[k];
    } else {
      const double lo = pf.span.lo;
      const double hi = pf.span.hi;
      p.x.push_back(lo);
      std::vector<double> inner;
      for (double t : pf.x) if (t > lo && t < hi) inner.push_back(t);
      for (double t : pg.x) if (t > lo && t < hi) inner.push_back(t);
      std::sort(inner.begin(), inner.end());
      inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
      p.x.insert(p.x.end(), inner.begin(), inner.end());
      p.x.push_back(hi);
      p.y.reserve(p.x.size());
      for (double t : p.x) p.y.push_back(a * pf.eval(t) + b * pg.eval(t));
    }
    pieces.push_back(std::move(p));
  }
  return GridFunction(f.domain(), std::min(f.h(), g.h()), std::move(pieces));
}

GridFunction scaled(double a, const GridFunction& f) {
  std::vector<Piece> pieces = f.pieces();
  for (auto& p : pieces) {
    for (auto& v : p.y) v *= a;
  }
  return GridFunction(f.domain(), f.h(), std::move(pieces));
}

GridFunction assemble(std::span<const Branch> branches) {
  OpenSet target;
  double h = std::numeric_limits<double>::infinity();
  for (const auto& br : branches) {
    if (br.function == nullptr) throw InvalidArgument("assemble: null branch");
    if (!br.function->domain().contains(br.region)) {
      throw InvalidArgument("assemble: branch region outside its function domain");
    }
    target = target.unite(br.region);
    h = std::min(h, br.function->h());
  }
  if (target.empty()) return {};
  std::vector<Piece> pieces;
  for (const auto& comp : target.intervals()) {
    std::vector<double> cuts{comp.lo, comp.hi};
    for (const auto& br : branches) {
      for (const auto& iv : br.region.intervals()) {
        if (iv.lo > comp.lo && iv.lo < comp.hi) cuts.push_back(iv.lo);
        if (iv.hi > comp.lo && iv.hi < comp.hi) cuts.push_back(iv.hi);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    Piece out;
    out.span = comp;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
      const double p = cuts[s];
      const double q = cuts[s + 1];
      const double mid = 0.5 * (p + q);
      const GridFunction* owner = nullptr;
      for (const auto& br : branches) {
        if (br.region.contains(mid)) {
          owner = br.function;
          break;
        }
      }
      if (owner == nullptr) {
        // Only a merged touching point separates two regions; bridge it.
        continue;
      }
      const Piece& host = host_piece(*owner, p, q);
      if (out.x.empty() || out.x.back() < p) {
        out.x.push_back(p);
        out.y.push_back(host.eval(p));
      }
      auto first = std::upper_bound(host.x.begin(), host.x.end(), p);
      for (auto it = first; it != host.x.end() && *it < q; ++it) {
        out.x.push_back(*it);
        out.y.push_back(host.y[static_cast<std::size_t>(it - host.x.begin())]);
      }
      out.x.push_back(q);
      out.y.push_back(host.eval(q));
    }
    pieces.push_back(std::move(out));
  }
  return GridFunction(target, h, std::move(pieces));
}

bool identical(const GridFunction& f, const GridFunction& g) {
  if (!(f.domain() == g.domain()) || f.h() != g.h()) return false;
  for (std::size_t i = 0; i < f.pieces().size(); ++i) {
    const Piece& a = f.pieces()[i];
    const Piece& b = g.pieces()[i];
    if (!(a.span == b.span) || a.x != b.x || a.y != b.y) return false;
  }
  return true;
}

}  // namespace boehm
