#include "parajones/projection.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "parajones/error.hpp"
#include "parajones/parallel.hpp"
#include "parajones/recombine.hpp"
#include "parajones/subdivide.hpp"

namespace parajones {

namespace {

double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 scaled(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }

struct Vec2 {
  double x = 0;
  double y = 0;
};

double cross2(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }

}  // namespace

std::vector<Curve3D> parse_xyz(const std::string& text) {
  std::vector<Curve3D> curves;
  Curve3D current;
  std::istringstream is(text);
  std::string line;
  auto flush = [&] {
    if (current.empty()) return;
    if (current.size() < 2)
      throw Error(errc::parse_error, "curve component needs at least 2 points");
    curves.push_back(std::move(current));
    current.clear();
  };
  while (std::getline(is, line)) {
    std::string body = line.substr(0, line.find('#'));
    std::istringstream ls(body);
    double x, y, z;
    if (!(ls >> x)) {
      flush();
      continue;
    }
    if (!(ls >> y >> z)) throw Error(errc::parse_error, "expected three floats per line");
    std::string rest;
    if (ls >> rest) throw Error(errc::parse_error, "expected three floats per line");
    if (!current.empty()) {
      const Vec3& p = current.back();
      if (p.x == x && p.y == y && p.z == z)
        throw Error(errc::parse_error, "consecutive points coincide");
    }
    current.push_back({x, y, z});
  }
  flush();
  if (curves.empty()) throw Error(errc::parse_error, "no curve data found");
  return curves;
}

double bounding_box_diagonal(const std::vector<Curve3D>& curves) {
  Vec3 lo{1e300, 1e300, 1e300};
  Vec3 hi{-1e300, -1e300, -1e300};
  for (const auto& curve : curves) {
    for (const auto& p : curve) {
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
  }
  return norm({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z});
}

Pairing default_closure_for(const std::vector<Curve3D>& curves) {
  Pairing sigma;
  int open_index = 0;
  for (const auto& curve : curves) {
    bool closed = curve.size() > 2 && curve.front().x == curve.back().x &&
                  curve.front().y == curve.back().y && curve.front().z == curve.back().z;
    if (!closed) {
      sigma.add(2 * open_index + 1, 2 * open_index + 2);
      ++open_index;
    }
  }
  return sigma;
}

Projection project(const std::vector<Curve3D>& curves, const Vec3& xi_in, double eps_rel) {
  if (eps_rel <= 0) throw Error(errc::invalid_config, "eps must be positive");
  if (curves.empty()) throw Error(errc::invalid_config, "no curves");
  for (const auto& c : curves) {
    if (c.size() < 2) throw Error(errc::invalid_config, "component needs at least 2 points");
    for (size_t i = 1; i < c.size(); ++i)
      if (c[i].x == c[i - 1].x && c[i].y == c[i - 1].y && c[i].z == c[i - 1].z)
        throw Error(errc::invalid_config, "consecutive points coincide");
  }

  double xin = norm(xi_in);
  if (xin == 0) throw Error(errc::invalid_config, "zero direction");
  Vec3 xi = scaled(xi_in, 1.0 / xin);

  Projection out;
  out.direction = xi;
  const double eps = eps_rel * bounding_box_diagonal(curves);

  // orthonormal frame (u, v, xi)
  Vec3 helper = std::fabs(xi.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  Vec3 u = cross(xi, helper);
  u = scaled(u, 1.0 / norm(u));
  Vec3 v = cross(xi, u);

  struct Seg {
    int comp;
    int idx;  // segment index within component
    Vec2 a, b;
    double da, db;  // depths along xi
  };
  std::vector<Seg> segs;
  std::vector<bool> comp_closed;
  std::vector<int> comp_seg_count;
  for (size_t ci = 0; ci < curves.size(); ++ci) {
    const Curve3D& c = curves[ci];
    bool closed = c.size() > 2 && c.front().x == c.back().x && c.front().y == c.back().y &&
                  c.front().z == c.back().z;
    comp_closed.push_back(closed);
    const size_t npts = c.size();
    comp_seg_count.push_back(static_cast<int>(npts - 1));
    for (size_t i = 0; i + 1 < npts; ++i) {
      Seg s;
      s.comp = static_cast<int>(ci);
      s.idx = static_cast<int>(i);
      s.a = {dot(c[i], u), dot(c[i], v)};
      s.b = {dot(c[i + 1], u), dot(c[i + 1], v)};
      s.da = dot(c[i], xi);
      s.db = dot(c[i + 1], xi);
      segs.push_back(s);
    }
  }

  struct Hit {
    int seg1, seg2;  // indices into segs; seg1 under iff depth smaller
    double t1, t2;
    Vec2 at;
    bool first_over;
  };
  std::vector<Hit> hits;

  auto reject = [&](const std::string& why) {
    out.rejected = true;
    out.reason = why;
    return out;
  };

  for (size_t i = 0; i < segs.size(); ++i) {
    for (size_t j = i + 1; j < segs.size(); ++j) {
      const Seg& s1 = segs[static_cast<size_t>(i)];
      const Seg& s2 = segs[static_cast<size_t>(j)];
      if (s1.comp == s2.comp) {
        int gap = std::abs(s1.idx - s2.idx);
        if (gap <= 1) continue;
        if (comp_closed[static_cast<size_t>(s1.comp)] &&
            gap == comp_seg_count[static_cast<size_t>(s1.comp)] - 1)
          continue;  // wrap-adjacent on a closed component
      }
      Vec2 r{s1.b.x - s1.a.x, s1.b.y - s1.a.y};
      Vec2 q{s2.b.x - s2.a.x, s2.b.y - s2.a.y};
      Vec2 w{s2.a.x - s1.a.x, s2.a.y - s1.a.y};
      double denom = cross2(r, q);
      double len1 = std::hypot(r.x, r.y);
      double len2 = std::hypot(q.x, q.y);
      if (len1 < eps || len2 < eps) return reject("segment degenerate in projection");
      if (std::fabs(denom) < 1e-12 * len1 * len2) {
        // parallel: irregular only if the lines nearly touch within range
        double dist = std::fabs(cross2(r, w)) / len1;
        double t0 = (w.x * r.x + w.y * r.y) / (len1 * len1);
        double t1 = t0 + (q.x * r.x + q.y * r.y) / (len1 * len1);
        if (dist < eps && std::max(0.0, std::min(t0, t1)) <= std::min(1.0, std::max(t0, t1)))
          return reject("near-tangential segments");
        continue;
      }
      double t = cross2(w, q) / denom;
      double s = cross2(w, r) / denom;
      double m1 = eps / len1;
      double m2 = eps / len2;
      if (t < -m1 || t > 1 + m1 || s < -m2 || s > 1 + m2) continue;
      if (t < m1 || t > 1 - m1 || s < m2 || s > 1 - m2)
        return reject("crossing too close to a vertex");
      double d1 = s1.da + t * (s1.db - s1.da);
      double d2 = s2.da + s * (s2.db - s2.da);
      if (std::fabs(d1 - d2) < eps) return reject("depth tie at crossing");
      Hit h;
      h.seg1 = static_cast<int>(i);
      h.seg2 = static_cast<int>(j);
      h.t1 = t;
      h.t2 = s;
      h.at = {s1.a.x + t * r.x, s1.a.y + t * r.y};
      h.first_over = d1 > d2;
      hits.push_back(h);
    }
  }

  for (size_t i = 0; i < hits.size(); ++i) {
    for (size_t j = i + 1; j < hits.size(); ++j) {
      double dx = hits[i].at.x - hits[j].at.x;
      double dy = hits[i].at.y - hits[j].at.y;
      if (std::hypot(dx, dy) < eps) return reject("near-coincident crossings");
    }
  }

  // assemble the diagram: order passages along each component
  struct Event {
    double param;
    int crossing;
    bool over;
  };
  const int n_crossings = static_cast<int>(hits.size());
  std::vector<int8_t> signs(static_cast<size_t>(n_crossings));
  std::vector<std::vector<Event>> events(curves.size());
  for (int hid = 0; hid < n_crossings; ++hid) {
    const Hit& h = hits[static_cast<size_t>(hid)];
    const Seg& s1 = segs[static_cast<size_t>(h.seg1)];
    const Seg& s2 = segs[static_cast<size_t>(h.seg2)];
    Vec2 dir1{s1.b.x - s1.a.x, s1.b.y - s1.a.y};
    Vec2 dir2{s2.b.x - s2.a.x, s2.b.y - s2.a.y};
    Vec2 over_dir = h.first_over ? dir1 : dir2;
    Vec2 under_dir = h.first_over ? dir2 : dir1;
    signs[static_cast<size_t>(hid)] = cross2(over_dir, under_dir) > 0 ? 1 : -1;
    events[static_cast<size_t>(s1.comp)].push_back({s1.idx + h.t1, hid, h.first_over});
    events[static_cast<size_t>(s2.comp)].push_back({s2.idx + h.t2, hid, !h.first_over});
  }

  DiagramBuilder b(n_crossings);
  int next_label = 1;
  int free_loops = 0;
  for (size_t ci = 0; ci < curves.size(); ++ci) {
    auto& ev = events[ci];
    std::sort(ev.begin(), ev.end(), [](const Event& a, const Event& e) { return a.param < e.param; });
    auto in_slot = [&](const Event& e) {
      if (!e.over) return 0;
      return signs[static_cast<size_t>(e.crossing)] > 0 ? 3 : 1;
    };
    auto out_slot = [&](const Event& e) {
      if (!e.over) return 2;
      return signs[static_cast<size_t>(e.crossing)] > 0 ? 1 : 3;
    };
    if (comp_closed[ci]) {
      if (ev.empty()) {
        ++free_loops;
        continue;
      }
      for (size_t k = 0; k < ev.size(); ++k) {
        const Event& cur = ev[k];
        const Event& nxt = ev[(k + 1) % ev.size()];
        b.connect(cur.crossing, out_slot(cur), nxt.crossing, in_slot(nxt));
      }
    } else {
      int foot = next_label++;
      int head = next_label++;
      if (ev.empty()) {
        b.add_free_strand(foot, head);
        continue;
      }
      b.attach_endpoint(ev.front().crossing, in_slot(ev.front()), foot);
      for (size_t k = 0; k + 1 < ev.size(); ++k)
        b.connect(ev[k].crossing, out_slot(ev[k]), ev[k + 1].crossing, in_slot(ev[k + 1]));
      b.attach_endpoint(ev.back().crossing, out_slot(ev.back()), head);
    }
  }
  b.add_free_loops(free_loops);
  out.diagram = b.build_with_signs(signs);
  return out;
}

OpenJonesResult jones_open(const std::vector<Curve3D>& curves, const OpenJonesOptions& opt) {
  if (opt.samples < 1) throw Error(errc::invalid_config, "need at least one sample");
  if (opt.workers < 1) throw Error(errc::invalid_config, "need at least one worker");

  Pairing sigma = opt.closure.has_value() ? *opt.closure : default_closure_for(curves);

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw_direction = [&]() {
    for (;;) {
      Vec3 d{gauss(rng), gauss(rng), gauss(rng)};
      double n = norm(d);
      if (n > 1e-9) return scaled(d, 1.0 / n);
    }
  };

  OpenJonesResult res;
  std::map<long, double> sum, sumsq;
  const long max_draws = std::max<long>(10000, opt.samples * 1000);
  long draws = 0;
  long accepted = 0;

  while (accepted < opt.samples) {
    if (draws >= max_draws)
      throw Error(errc::all_rejected,
                  "accepted " + std::to_string(accepted) + " of " + std::to_string(opt.samples) +
                      " samples after " + std::to_string(draws) + " draws");
    const long want = opt.samples - accepted;
    const long batch = std::min(want + want / 8 + 4, max_draws - draws);
    std::vector<Vec3> dirs(static_cast<size_t>(batch));
    for (auto& d : dirs) d = draw_direction();
    draws += batch;

    std::vector<std::optional<LaurentPoly>> polys(static_cast<size_t>(batch));
    const bool across = batch >= opt.workers;
    auto handle = [&](long i, int inner_workers) {
      Projection proj = project(curves, dirs[static_cast<size_t>(i)], opt.eps_rel);
      if (proj.rejected) return;
      const Diagram& d = proj.diagram;
      int m_eff = 0;
      while (m_eff < opt.m && (1l << (m_eff + 1)) <= std::max(1, d.crossing_count())) ++m_eff;
      GluingPlan plan = subdivide(d, m_eff, opt.seed);
      std::optional<Pairing> closure;
      if (!d.endpoints().empty()) {
        // restrict the global closure to this projection's endpoints (they
        // are the same labels for every projection)
        closure = sigma;
      }
      polys[static_cast<size_t>(i)] = run_plan(plan, inner_workers, closure);
    };
    if (across && opt.workers > 1) {
      parallel_for_chunks(0, batch, opt.workers, [&](int, long long lo, long long hi) {
        for (long long i = lo; i < hi; ++i) handle(static_cast<long>(i), 1);
      });
    } else {
      for (long i = 0; i < batch; ++i) handle(i, opt.workers);
    }

    for (long i = 0; i < batch && accepted < opt.samples; ++i) {
      if (!polys[static_cast<size_t>(i)].has_value()) {
        ++res.rejections;
        continue;
      }
      const LaurentPoly& f = *polys[static_cast<size_t>(i)];
      res.numerator += f;
      for (const auto& [e, c] : f.terms()) {
        double cd = c.get_d();
        sum[e] += cd;
        sumsq[e] += cd * cd;
      }
      ++accepted;
    }
  }

  res.samples = accepted;
  const double n = static_cast<double>(accepted);
  for (const auto& [e, s] : sum) {
    double mean = s / n;
    double var = std::max(0.0, sumsq[e] / n - mean * mean);
    res.coeff_mean[e] = mean;
    res.coeff_stderr[e] = std::sqrt(var / n);
  }
  return res;
}

}  // namespace parajones
