#include "boehm/sheaf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "boehm/errors.hpp"

namespace boehm {

Cover::Cover(std::vector<OpenSet> ps) : pieces(std::move(ps)) {
  overlaps.assign(pieces.size(), std::vector<OpenSet>(pieces.size()));
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    whole = whole.unite(pieces[i]);
    for (std::size_t j = 0; j <= i; ++j) {
      overlaps[i][j] = pieces[i].intersect(pieces[j]);
      overlaps[j][i] = overlaps[i][j];
    }
  }
}

SectionAssignment::SectionAssignment(std::vector<Boehmian> ss) : sections(std::move(ss)) {
  std::vector<OpenSet> ps;
  ps.reserve(sections.size());
  for (const auto& s : sections) ps.push_back(s.domain());
  cover = Cover(std::move(ps));
}

namespace {

EquivParams automatic(const EquivParams& p) {
  EquivParams q = p;
  q.compacts.clear();
  return q;
}

double eps_at(double eps1, int n) { return std::ldexp(eps1, -(n - 1)); }

// F ∗ ψ for a class known through restrictions to the parts of a cover of
// its domain. Falls back to the sequence when D is not covered by the
// eroded parts.
Regularizer piecewise(std::vector<Boehmian> parts, Boehmian whole, EquivParams p) {
  return [parts = std::move(parts), whole = std::move(whole), p](const TestFunction& psi,
                                                                 const OpenSet& d) {
    const double s = psi.radius();
    std::vector<GridFunction> fs;
    std::vector<OpenSet> regions;
    OpenSet covered;
    for (const auto& part : parts) {
      const OpenSet r = d.intersect(erode(part.domain(), s));
      if (r.empty()) continue;
      fs.push_back(regularize(part, psi, r, p));
      regions.push_back(r);
      covered = covered.unite(r);
    }
    if (!covered.contains(d)) return adaptive_regularize(whole, psi, d, p);
    std::vector<Branch> br;
    for (std::size_t i = 0; i < fs.size(); ++i) br.push_back({&fs[i], regions[i]});
    return assemble(br);
  };
}

Boehmian with_pieces(FundamentalSeq rep, DeltaSeq witness, std::vector<Boehmian> parts,
                     const EquivParams& p) {
  Boehmian bare{rep, witness, {}};
  return Boehmian{rep, witness, piecewise(std::move(parts), bare, p)};
}

// F and G on domains with disjoint closures, side by side.
Boehmian join(const Boehmian& f, const Boehmian& g, const EquivParams& p) {
  const OpenSet u = f.domain();
  const OpenSet v = g.domain();
  auto gen = [f, g, u, v](int n) {
    const Branch br[] = {{&f(n), u}, {&g(n), v}};
    return assemble(br);
  };
  return with_pieces(FundamentalSeq(u.unite(v), gen, "glued"), f.witness, {f, g}, p);
}

CheckResult contract(const Boehmian& h, const Boehmian& piece, const EquivParams& p,
                     const std::string& id) {
  CheckResult r = equivalent(restrict(h, piece.domain()), piece, p);
  r.case_id = id;
  r.lemma_ref = "T15-glue";
  return r;
}

GlueResult glue_pair_impl(const Boehmian& f, const Boehmian& g, const EquivParams& params,
                          bool with_contracts) {
  const OpenSet u = f.domain();
  const OpenSet v = g.domain();
  const OpenSet w = u.intersect(v);
  if (w.empty()) throw InvalidArgument("glue_pair: the domains do not overlap");
  const EquivParams p = automatic(params);

  CheckResult compat = equivalent(restrict(f, w), restrict(g, w), p);
  compat.case_id = "overlap " + to_string(w);
  if (!compat.verified()) {
    std::ostringstream os;
    os << "sections are not verified equivalent on " << to_string(w) << " ("
       << to_string(compat.status) << ", residual " << compat.max_residual
       << ")";
    throw SectionsDisagree(os.str());
  }

  const double eps1 = glue_scale(u, v);
  const CommonRegularizers common = common_regularizers(f, g, eps1, p);

  const DeltaSeq delta = common.seq;
  const OpenSet whole = u.unite(v);
  auto gen = [f, g, u, v, whole, delta, eps1, p](int n) {
    const double e = eps_at(eps1, n);
    const OpenSet du = erode(u, e);
    const OpenSet dv = erode(v, e);
    const GridFunction a = regularize(f, delta[n], du, p);
    const GridFunction b = regularize(g, delta[n], dv, p);
    const Branch br[] = {{&a, du}, {&b, dv}};
    return extend_continuously(assemble(br), whole);
  };
  GlueResult out{with_pieces(FundamentalSeq(whole, gen, "glued"), delta, {f, g}, p),
                 std::move(compat), common.check, {}};
  if (with_contracts) {
    out.contracts.push_back(contract(out.glued, f, p, "H|U ~ F"));
    out.contracts.push_back(contract(out.glued, g, p, "H|V ~ G"));
  }
  return out;
}

// One step of a left fold over sections.
Boehmian absorb(const Boehmian& acc, const Boehmian& next, const EquivParams& p) {
  if (!acc.domain().intersect(next.domain()).empty()) return glue_pair_impl(acc, next, p, false).glued;
  if (distance(acc.domain(), next.domain()) > 0.0) return join(acc, next, p);
  throw InvalidArgument("pieces " + to_string(acc.domain()) + " and " + to_string(next.domain()) +
                        " touch without overlapping");
}

}  // namespace

double glue_scale(const OpenSet& u, const OpenSet& v) {
  const OpenSet w = u.intersect(v);
  if (w.empty()) throw InvalidArgument("glue_scale: empty overlap");
  return 0.25 * std::min({u.min_component_length(), v.min_component_length(),
                          w.min_component_length()});
}

CommonRegularizers common_regularizers(const Boehmian& f, const Boehmian& g, double eps1,
                                       const EquivParams& params) {
  params.validate();
  const OpenSet w = f.domain().intersect(g.domain());
  if (w.empty()) throw InvalidArgument("common_regularizers: empty overlap");
  if (!(eps1 > 0.0)) throw InvalidArgument("common_regularizers: eps must be positive");
  if (erode(f.domain(), eps1).empty() || erode(g.domain(), eps1).empty()) {
    throw InvalidArgument("common_regularizers: eroded domain is empty");
  }
  CommonRegularizers out{
      DeltaSeq::from_rule(
          [eps1](int n) {
            const TestFunction b = TestFunction::bump(eps_at(eps1, n) / 4.0);
            return TestFunction::product({b, b});
          },
          [eps1](int n) { return eps_at(eps1, n) / 2.0; }, true, eps1, "common"),
      {},
      {}};
  CheckResult& r = out.check;
  r.lemma_ref = "L12-common";
  r.horizon = params.horizon;
  r.bound = params.tol;
  double worst = 0.0;
  for (int n = 1; n <= params.horizon; ++n) {
    const double e = eps_at(eps1, n);
    out.eps.push_back(e);
    const OpenSet wn = erode(w, e);
    if (wn.empty()) {
      r.residuals.push_back(0.0);
      continue;
    }
    const GridFunction a = regularize(f, out.seq[n], erode(f.domain(), e), params);
    const GridFunction b = regularize(g, out.seq[n], erode(g.domain(), e), params);
    const SupPoint d = sup_distance_on(a, b, wn.closure());
    r.residuals.push_back(d.value);
    if (d.value > worst) {
      worst = d.value;
      r.witness = Witness{d.location, d.value};
    }
  }
  r.max_residual = worst;
  r.status = worst < params.tol ? Status::verified : Status::refuted;
  if (r.verified()) r.witness.reset();
  return out;
}

GlueResult glue_pair(const Boehmian& f, const Boehmian& g, const EquivParams& params) {
  return glue_pair_impl(f, g, params, true);
}

GlueResult glue_finite(const SectionAssignment& assign, const EquivParams& params) {
  const auto& s = assign.sections;
  if (s.empty()) throw InvalidArgument("glue_finite: no sections");
  const EquivParams p = automatic(params);
  Boehmian acc = s.front();
  for (std::size_t i = 1; i < s.size(); ++i) acc = absorb(acc, s[i], p);
  GlueResult out{std::move(acc), {}, {}, {}};
  for (std::size_t i = 0; i < s.size(); ++i) {
    out.contracts.push_back(contract(out.glued, s[i], p, "piece " + std::to_string(i + 1)));
    out.contracts.back().lemma_ref = "C16-glue";
  }
  return out;
}

GlueResult glue_countable(const SectionAssignment& assign, int n_max, const EquivParams& params) {
  const auto& s = assign.sections;
  if (n_max < 1 || n_max > static_cast<int>(s.size())) {
    throw InvalidArgument("glue_countable: n_max must lie in [1, number of sections]");
  }
  const EquivParams p = automatic(params);
  std::vector<Boehmian> partial{s.front()};
  std::vector<OpenSet> unions{s.front().domain()};
  for (int k = 1; k < n_max; ++k) {
    const Boehmian& next = s[static_cast<std::size_t>(k)];
    if (unions.back().contains(next.domain())) {
      partial.push_back(partial.back());
      unions.push_back(unions.back());
      continue;
    }
    partial.push_back(absorb(partial.back(), next, p));
    unions.push_back(partial.back().domain());
  }
  const OpenSet whole = unions.back();
  if (!whole.bounded()) throw Unsupported("glue_countable: unbounded union");

  GlueResult out{s.front(), {}, {}, {}};
  if (n_max > 1) {
    double eps1 = std::numeric_limits<double>::infinity();
    for (const auto& v : unions) eps1 = std::min(eps1, 0.25 * v.min_component_length());
    auto gen = [partial, unions, whole, eps1, n_max, p](int n) {
      const auto k = static_cast<std::size_t>(std::min(n, n_max) - 1);
      const double e = eps_at(eps1, n);
      return extend_continuously(
          regularize(partial[k], TestFunction::bump(e / 2.0), erode(unions[k], e), p), whole);
    };
    const Boehmian last = partial.back();
    out.glued = Boehmian{FundamentalSeq(whole, gen, "glued"), default_witness(),
                         [last, p](const TestFunction& psi, const OpenSet& d) {
                           return regularize(last, psi, d, p);
                         }};
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!whole.contains(s[i].domain())) continue;
    out.contracts.push_back(contract(out.glued, s[i], p, "piece " + std::to_string(i + 1)));
    out.contracts.back().lemma_ref = "L19-glue";
  }
  return out;
}

namespace {

struct Part {
  CompactSet k;
  std::size_t piece;
};

std::optional<Interval> component_at(const OpenSet& u, double x) {
  const auto c = u.component_of(x);
  if (!c) return std::nullopt;
  return u.intervals()[*c];
}

// Splits K into closed pieces, each compactly inside one cover member.
std::vector<Part> lebesgue_split(const CompactSet& k, const Cover& cover) {
  std::vector<Part> parts;
  for (const auto& iv : k.intervals()) {
    double x = iv.lo;
    for (int guard = 0; guard < 10000; ++guard) {
      std::size_t best = cover.pieces.size();
      double reach = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < cover.pieces.size(); ++i) {
        const auto c = component_at(cover.pieces[i], x);
        if (c && c->hi > reach) {
          reach = c->hi;
          best = i;
        }
      }
      if (best == cover.pieces.size()) throw InvalidArgument("compact is not covered by the cover");
      if (reach > iv.hi) {
        parts.push_back({CompactSet::interval(x, iv.hi), best});
        break;
      }
      double next_lo = reach;
      for (const auto& piece : cover.pieces) {
        const auto c = component_at(piece, reach);
        if (c) next_lo = std::min(next_lo, c->lo);
      }
      if (!(next_lo < reach)) throw InvalidArgument("compact is not covered by the cover");
      const double cut = 0.5 * (std::max(next_lo, x) + reach);
      parts.push_back({CompactSet::interval(x, cut), best});
      x = cut;
    }
  }
  return parts;
}

Status aggregate(const std::vector<CheckResult>& rs) {
  bool all = true;
  for (const auto& r : rs) {
    if (r.refuted()) return Status::refuted;
    all = all && r.verified();
  }
  return all ? Status::verified : Status::inconclusive;
}

}  // namespace

LocalityReport verify_locality(const Boehmian& f, const Boehmian& g, const Cover& cover,
                               const EquivParams& params) {
  params.validate();
  if (!(f.domain() == g.domain())) throw InvalidArgument("verify_locality: domains differ");
  if (!(cover.whole == f.domain())) {
    throw InvalidArgument("verify_locality: cover union " + to_string(cover.whole) +
                          " differs from the domain " + to_string(f.domain()));
  }
  const EquivParams local_params = automatic(params);
  LocalityReport rep;
  for (std::size_t i = 0; i < cover.pieces.size(); ++i) {
    const OpenSet& piece = cover.pieces[i];
    CheckResult r = equivalent(restrict(f, piece), restrict(g, piece), local_params);
    r.case_id = "piece " + std::to_string(i + 1);
    rep.local.push_back(std::move(r));
  }

  std::vector<CheckResult> globals;
  for (const auto& k : compacts_for(f.domain(), params)) {
    const auto parts = lebesgue_split(k, cover);
    double eps = std::numeric_limits<double>::infinity();
    for (const auto& part : parts) {
      eps = std::min(eps, distance_to_complement(part.k, cover.pieces[part.piece]));
    }
    const double total = 0.9 * eps;
    const auto count = parts.size();
    EquivParams gp = params;
    gp.compacts = {k};
    gp.witness = DeltaSeq::from_rule(
        [total, count](int n) {
          const double r = std::ldexp(total / static_cast<double>(count), -(n - 1));
          if (count == 1) return TestFunction::bump(r);
          return TestFunction::product(std::vector<TestFunction>(count, TestFunction::bump(r)));
        },
        [total](int n) { return std::ldexp(total, -(n - 1)); }, true, 2.0 * total, "lebesgue");
    globals.push_back(equivalent(f, g, gp));
  }

  rep.global.lemma_ref = "L17-locality";
  rep.global.horizon = params.horizon;
  rep.global.bound = params.tol;
  rep.global.status = aggregate(globals);
  for (const auto& r : globals) {
    rep.global.max_residual = std::max(rep.global.max_residual, r.max_residual);
    if (r.witness && !rep.global.witness) rep.global.witness = r.witness;
  }

  const Status local = aggregate(rep.local);
  rep.consistent = local == rep.global.status;
  CheckResult& r = rep.result;
  r.lemma_ref = "L18-locality";
  r.horizon = params.horizon;
  r.bound = params.tol;
  r.max_residual = rep.global.max_residual;
  for (const auto& l : rep.local) r.residuals.push_back(l.max_residual);
  if (rep.consistent) {
    r.status = local;
    r.witness = rep.global.witness;
  } else {
    r.status = Status::inconclusive;
    r.note = "local verdict " + to_string(local) + " vs global " + to_string(rep.global.status);
  }
  return rep;
}

CheckResult check_presheaf_laws(const std::vector<Boehmian>& battery, int triples,
                                std::uint64_t seed, const std::vector<int>& indices) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto inside = [&](const OpenSet& u) {
    const auto& c = u.intervals()[rng() % u.size()];
    const double len = c.length();
    return OpenSet::interval(c.lo + 0.45 * len * unit(rng), c.hi - 0.45 * len * unit(rng));
  };
  int checks = 0;
  int failures = 0;
  auto expect = [&](bool ok) {
    ++checks;
    if (!ok) ++failures;
  };
  for (const auto& f : battery) {
    const OpenSet& u = f.domain();
    for (int n : indices) expect(identical(restrict(f, u)(n), f(n)));
    const GridFunction& plain = f(indices.front());
    expect(identical(restrict_grid(plain, u), plain));
    for (int t = 0; t < triples; ++t) {
      const OpenSet v = inside(u);
      const OpenSet w = inside(v);
      const Boehmian fv = restrict(f, v);
      for (int n : indices) expect(identical(restrict(fv, w)(n), restrict(f, w)(n)));
      expect(identical(restrict_grid(restrict_grid(plain, v), w), restrict_grid(plain, w)));
    }
  }
  CheckResult r;
  r.lemma_ref = "T-presheaf";
  r.max_residual = failures;
  r.bound = 0.0;
  r.horizon = indices.empty() ? 0 : *std::max_element(indices.begin(), indices.end());
  r.status = failures == 0 ? Status::verified : Status::refuted;
  r.note = std::to_string(checks) + " bitwise comparisons";
  return r;
}

}  // namespace boehm
