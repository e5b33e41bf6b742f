#include "logflow/mcf.hpp"

#include <algorithm>
#include <cmath>

#include "logflow/interpolation.hpp"

namespace logflow {
namespace {

NullVector combine(const NullVector& a, double wa, const NullVector& b, double wb) {
  NullVector out;
  for (int k = 0; k < kMaxDim; ++k) {
    out.x[k] = wa * a.x[k] + wb * b.x[k];
    out.y[k] = wa * a.y[k] + wb * b.y[k];
  }
  return out;
}

}  // namespace

double null_pairing(const NullVector& v, const NullVector& w, int n) {
  return 0.5 * (dot(v.x, w.y, n) + dot(v.y, w.x, n));
}

SignatureVector to_signature_coordinates(const NullVector& v, int n) {
  SignatureVector s;
  for (int k = 0; k < n; ++k) {
    s.space[k] = 0.5 * (v.x[k] + v.y[k]);
    s.time[k] = 0.5 * (v.x[k] - v.y[k]);
  }
  return s;
}

double signature_pairing(const SignatureVector& v, const SignatureVector& w, int n) {
  return dot(v.space, w.space, n) - dot(v.time, w.time, n);
}

double max_component(const NullVector& v, int n) {
  double m = 0.0;
  for (int k = 0; k < n; ++k) m = std::max({m, std::abs(v.x[k]), std::abs(v.y[k])});
  return m;
}

ImmersionFrame immersion_frame(const GridFunction& u, const Index& at) {
  const BoxDomain& d = u.domain();
  const int n = d.n;
  if (!d.within(at, 2)) throw DomainError("mean curvature needs a node at least two layers inside");
  ImmersionFrame fr;
  fr.base = d.coordinate(at);
  fr.F.x = fr.base;
  fr.F.y = gradient_at(u, at);
  fr.metric = hessian_at(u, at);
  if (!fr.metric.positive_definite())
    throw NonConvexityError("induced metric is not positive definite", d.flatten(at));
  fr.g = fr.metric.determinant();
  const double h = d.spacing();
  for (int l = 0; l < n; ++l) {
    Index p = at, q = at;
    ++p[l];
    --q[l];
    fr.grad_g[l] = (hessian_at(u, p).determinant() - hessian_at(u, q).determinant()) / (2.0 * h);
  }
  for (int i = 0; i < n; ++i) {
    fr.e[i].x[i] = 1.0;
    fr.eta[i].x[i] = 1.0;
    for (int j = 0; j < n; ++j) {
      fr.e[i].y[j] = fr.metric(i, j);
      fr.eta[i].y[j] = -fr.metric(i, j);
    }
  }
  const Point coeff = fr.metric.inverse().apply(fr.grad_g);
  const double scale = -1.0 / (2.0 * n * fr.g);
  for (int k = 0; k < n; ++k) fr.H = combine(fr.H, 1.0, fr.eta[k], scale * coeff[k]);
  return fr;
}

NullVector mean_curvature(const GridFunction& u, const Index& at) { return immersion_frame(u, at).H; }

NullVector CurvatureField::at(const Point& x) const {
  const int m = domain.points_per_axis;
  const double h = domain.spacing();
  const double lo_x = -domain.half_width + lo * h, hi_x = domain.half_width - lo * h;
  for (int k = 0; k < domain.n; ++k)
    if (!(x[k] >= lo_x - 1e-12 && x[k] <= hi_x + 1e-12))
      throw EscapeError("particle left the region where the curvature field is defined");
  Index base{0, 0, 0};
  Point frac{};
  for (int k = 0; k < domain.n; ++k) {
    const double s = (x[k] + domain.half_width) / h;
    base[k] = std::clamp(static_cast<int>(std::floor(s)), lo, m - 2 - lo);
    frac[k] = s - base[k];
  }
  NullVector out;
  for (int corner = 0; corner < (1 << domain.n); ++corner) {
    Index idx = base;
    double w = 1.0;
    for (int k = 0; k < domain.n; ++k) {
      const bool up = corner >> k & 1;
      idx[k] += up;
      w *= up ? frac[k] : 1.0 - frac[k];
    }
    out = combine(out, 1.0, H[domain.flatten(idx)], w);
  }
  return out;
}

CurvatureField curvature_field(const GridFunction& u) {
  const BoxDomain& d = u.domain();
  CurvatureField field{d, std::max(2, 1 + d.interior_margin), std::vector<NullVector>(d.node_count())};
  for_each_node(d, field.lo, [&](std::size_t f, const Index& idx) { field.H[f] = mean_curvature(u, idx); });
  return field;
}

std::vector<ParticlePath> integrate_particles(const std::vector<Snapshot>& trajectory, const std::vector<Point>& seeds) {
  if (trajectory.empty()) throw InsufficientSamples("particle integration needs snapshots");
  std::vector<CurvatureField> fields;
  std::vector<CubicInterpolator> interps;
  for (const Snapshot& s : trajectory) {
    fields.push_back(curvature_field(s.u));
    interps.emplace_back(s.u);
  }
  const int n = trajectory.front().u.domain().n;
  auto gradient = [&](std::size_t k, const Point& x) { return interps[k].jet(x).gradient; };

  std::vector<ParticlePath> paths;
  for (const Point& seed : seeds) {
    ParticlePath p;
    p.seed = seed;
    Point x = seed;
    for (std::size_t k = 0; k < trajectory.size(); ++k) {
      if (k > 0) {
        const double dt = trajectory[k].t - trajectory[k - 1].t;
        const NullVector v0 = fields[k - 1].at(x);
        Point mid = x;
        for (int i = 0; i < n; ++i) mid[i] += 0.5 * dt * v0.x[i];
        const NullVector va = fields[k - 1].at(mid), vb = fields[k].at(mid);
        for (int i = 0; i < n; ++i) x[i] += dt * 0.5 * (va.x[i] + vb.x[i]);
        fields[k].at(x);  // escape check at the new position
      }
      p.t.push_back(trajectory[k].t);
      p.r.push_back(x);
      p.F.push_back({x, gradient(k, x)});
    }
    paths.push_back(std::move(p));
  }
  return paths;
}

McfReport verify_mcf(const std::vector<ParticlePath>& paths, const std::vector<Snapshot>& trajectory,
                     double threshold) {
  McfReport rep;
  rep.threshold = threshold;
  if (trajectory.size() < 3) throw InsufficientSamples("verify_mcf needs at least three snapshots");
  std::vector<CurvatureField> fields;
  std::vector<CubicInterpolator> interps;
  for (const Snapshot& s : trajectory) {
    fields.push_back(curvature_field(s.u));
    interps.emplace_back(s.u);
  }
  const int n = trajectory.front().u.domain().n;
  for (const ParticlePath& p : paths) {
    if (p.t.size() != trajectory.size()) throw DomainError("path and trajectory sample times differ");
    for (std::size_t k = 1; k + 1 < p.t.size(); ++k) {
      const double h1 = p.t[k] - p.t[k - 1], h2 = p.t[k + 1] - p.t[k];
      const double w0 = -h2 / (h1 * (h1 + h2)), w1 = (h2 - h1) / (h1 * h2), w2 = h1 / (h2 * (h1 + h2));
      NullVector dF = combine(combine(p.F[k - 1], w0, p.F[k], w1), 1.0, p.F[k + 1], w2);
      const NullVector H = fields[k].at(p.r[k]);
      const NullVector diff = combine(dF, 1.0, H, -1.0);
      rep.max_deviation = std::max(rep.max_deviation, max_component(diff, n));
      rep.max_curvature = std::max(rep.max_curvature, max_component(H, n));

      // dF/dt = sum a_i e_i + b_i eta_i with a = (v_x + G^-1 v_y)/2 and
      // b = (v_x - G^-1 v_y)/2, G = D^2u at r.
      const SymMat G = interps[k].jet(p.r[k]).hessian;
      const Point Ginv_y = G.inverse().apply(dF.y);
      Point a{}, b{};
      for (int i = 0; i < n; ++i) {
        a[i] = 0.5 * (dF.x[i] + Ginv_y[i]);
        b[i] = 0.5 * (dF.x[i] - Ginv_y[i]);
      }
      const Point Ga = G.apply(a), Gb = G.apply(b);
      NullVector tangential{a, Ga}, normal{b, {}};
      for (int i = 0; i < n; ++i) normal.y[i] = -Gb[i];
      rep.max_tangential = std::max(rep.max_tangential, max_component(tangential, n));
      rep.max_normal = std::max(rep.max_normal, max_component(normal, n));
      ++rep.samples;
    }
  }
  rep.flagged = rep.max_deviation > threshold;
  return rep;
}

}  // namespace logflow
