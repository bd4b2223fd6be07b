#include "ferrovolt/mesh_gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <string>

#include "ferrovolt/error.hpp"

namespace ferrovolt {

namespace {

// Deduplicating point pool.  Shared strip-edge nodes are derived twice from
// identical arithmetic; quantizing to a grid far below any cell size folds
// them onto one id.
class PointPool {
 public:
  explicit PointPool(PlanarMesh& mesh, double quantum) : mesh_(mesh), quantum_(quantum) {}

  int add(double x, double y) {
    const long long kx = llround(x / quantum_);
    const long long ky = llround(y / quantum_);
    auto [it, inserted] = map_.try_emplace({kx, ky}, static_cast<int>(mesh_.points.size()));
    if (inserted) mesh_.points.push_back({x, y, 0.0});
    return it->second;
  }

 private:
  PlanarMesh& mesh_;
  double quantum_;
  std::map<std::pair<long long, long long>, int> map_;
};

void emit_quad(PlanarMesh& m, const std::string& region, int a, int b, int c, int d,
               bool triangles, bool flip) {
  if (!triangles) {
    m.elems.push_back({{a, b, c, d}, region});
  } else if (flip) {
    m.elems.push_back({{a, b, c}, region});
    m.elems.push_back({{a, c, d}, region});
  } else {
    m.elems.push_back({{a, b, d}, region});
    m.elems.push_back({{b, c, d}, region});
  }
}

// [lo, hi] subdivided near the target spacing, with every required coordinate
// kept as an exact grid line.  Gaps between required lines are filled
// uniformly, so no sliver intervals appear.
std::vector<double> subdivided_coords(double lo, double hi, std::vector<double> required,
                                      double h) {
  const double span = hi - lo;
  const double tol = 1e-9 * span;
  required.push_back(lo);
  required.push_back(hi);
  std::sort(required.begin(), required.end());
  std::vector<double> knots;
  for (double v : required) {
    if (v < lo - tol || v > hi + tol) {
      throw MeshError("mesh generator: snapped coordinate " + std::to_string(v) +
                      " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    if (knots.empty() || v - knots.back() > tol) knots.push_back(v);
  }
  std::vector<double> out;
  for (size_t k = 0; k + 1 < knots.size(); ++k) {
    const double a = knots[k];
    const double b = knots[k + 1];
    const int n = std::max(1, static_cast<int>(llround((b - a) / h)));
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * i / n);
  }
  out.push_back(hi);
  return out;
}

double body_lo(const GenBody& b, bool alongX) {
  return alongX ? b.center.x - (b.isDisc ? b.radius : b.hw)
                : b.center.y - (b.isDisc ? b.radius : b.hh);
}
double body_hi(const GenBody& b, bool alongX) {
  return alongX ? b.center.x + (b.isDisc ? b.radius : b.hw)
                : b.center.y + (b.isDisc ? b.radius : b.hh);
}

void validate_spec(const GenSpec& s) {
  if (!(s.h > 0.0)) throw ConfigError("mesh generator: spacing h must be positive");
  if (!(s.x1 > s.x0) || !(s.y1 > s.y0)) {
    throw ConfigError("mesh generator: empty domain box");
  }
  if (!(s.thickness > 0.0)) throw ConfigError("mesh generator: thickness must be positive");
  if (s.jitter < 0.0 || s.jitter > 0.4) {
    throw ConfigError("mesh generator: jitter must lie in [0, 0.4]");
  }
  for (const GenBody& b : s.bodies) {
    if (b.region.empty()) throw ConfigError("mesh generator: body without a region name");
    if (b.region == s.background) {
      throw ConfigError("mesh generator: body region '" + b.region +
                        "' equals the background region");
    }
    if (b.isDisc && !(b.radius > 0.0)) {
      throw ConfigError("mesh generator: body '" + b.region + "' needs a positive radius");
    }
    if (!b.isDisc && (!(b.hw > 0.0) || !(b.hh > 0.0))) {
      throw ConfigError("mesh generator: body '" + b.region + "' needs positive side lengths");
    }
    if (body_lo(b, true) < s.x0 + s.h || body_hi(b, true) > s.x1 - s.h ||
        body_lo(b, false) < s.y0 + s.h || body_hi(b, false) > s.y1 - s.h) {
      throw ConfigError("mesh generator: body '" + b.region +
                        "' too close to the domain boundary");
    }
  }
}

// ---------------------------------------------------------------------------
// Cartesian generator

bool inside_rect_body(const GenBody& b, double x, double y) {
  return std::fabs(x - b.center.x) < b.hw && std::fabs(y - b.center.y) < b.hh;
}

PlanarMesh gen_cartesian(const GenSpec& s) {
  std::vector<double> reqX, reqY;
  for (const GenBody& b : s.bodies) {
    if (b.isDisc) {
      throw ConfigError("mesh generator: cartesian kind supports rectangular bodies only");
    }
    reqX.push_back(b.center.x - b.hw);
    reqX.push_back(b.center.x + b.hw);
    reqY.push_back(b.center.y - b.hh);
    reqY.push_back(b.center.y + b.hh);
  }
  for (size_t i = 0; i < s.bodies.size(); ++i) {
    for (size_t j = i + 1; j < s.bodies.size(); ++j) {
      const GenBody& a = s.bodies[i];
      const GenBody& b = s.bodies[j];
      const bool apartX = body_hi(a, true) <= body_lo(b, true) ||
                          body_hi(b, true) <= body_lo(a, true);
      const bool apartY = body_hi(a, false) <= body_lo(b, false) ||
                          body_hi(b, false) <= body_lo(a, false);
      if (!apartX && !apartY) {
        throw ConfigError("mesh generator: bodies '" + a.region + "' and '" + b.region +
                          "' overlap");
      }
    }
  }

  const std::vector<double> xs = subdivided_coords(s.x0, s.x1, reqX, s.h);
  const std::vector<double> ys = subdivided_coords(s.y0, s.y1, reqY, s.h);
  const int nx = static_cast<int>(xs.size()) - 1;
  const int ny = static_cast<int>(ys.size()) - 1;

  PlanarMesh m;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) m.points.push_back({xs[i], ys[j], 0.0});
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };

  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double cx = 0.5 * (xs[i] + xs[i + 1]);
      const double cy = 0.5 * (ys[j] + ys[j + 1]);
      std::string region = s.background;
      for (const GenBody& b : s.bodies) {
        if (inside_rect_body(b, cx, cy)) {
          region = b.region;
          break;
        }
      }
      emit_quad(m, region, id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1), s.triangles,
                ((i + j) & 1) != 0);
    }
  }
  for (int i = 0; i < nx; ++i) {
    m.taggedEdges.push_back({id(i, 0), id(i + 1, 0), s.outerPatch});
    m.taggedEdges.push_back({id(i, ny), id(i + 1, ny), s.outerPatch});
  }
  for (int j = 0; j < ny; ++j) {
    m.taggedEdges.push_back({id(0, j), id(0, j + 1), s.outerPatch});
    m.taggedEdges.push_back({id(nx, j), id(nx, j + 1), s.outerPatch});
  }
  return m;
}

// ---------------------------------------------------------------------------
// Body-fitted strip O-grid generator

struct StripRect {
  double xa, xb, ya, yb;
};

// First exit of the ray c + t d, t > 0, through the strip rectangle.  Returns
// the exit point and which side it lies on: 0 left, 1 right, 2 bottom, 3 top,
// -1 for a corner hit.
Vec3 ray_rect_exit(const Vec3& c, const Vec3& d, const StripRect& r, int& side) {
  const double inf = 1e300;
  const double tx = d.x > 0 ? (r.xb - c.x) / d.x : (d.x < 0 ? (r.xa - c.x) / d.x : inf);
  const double ty = d.y > 0 ? (r.yb - c.y) / d.y : (d.y < 0 ? (r.ya - c.y) / d.y : inf);
  const double t = std::min(tx, ty);
  Vec3 p = c + t * d;
  if (std::fabs(tx - ty) < 1e-12 * (std::fabs(t) + 1.0)) {
    side = -1;
  } else if (t == tx) {
    side = d.x > 0 ? 1 : 0;
    p.x = d.x > 0 ? r.xb : r.xa;  // exact on the line
  } else {
    side = d.y > 0 ? 3 : 2;
    p.y = d.y > 0 ? r.yb : r.ya;
  }
  return p;
}

Vec3 body_surface_point(const GenBody& b, const Vec3& dir) {
  if (b.isDisc) return b.center + b.radius * normalized(dir);
  const double t = 1.0 / std::max(std::fabs(dir.x) / b.hw, std::fabs(dir.y) / b.hh);
  return b.center + t * dir;
}

struct Strip {
  StripRect rect;
  const GenBody* body;
  std::vector<double> extrasBottom, extrasTop;  // x coordinates on own edges
};

PlanarMesh gen_body_fitted_x(const GenSpec& s) {
  // Strips are full-height x slabs, one body each, cut midway between
  // neighbouring bodies.
  std::vector<const GenBody*> order;
  for (const GenBody& b : s.bodies) order.push_back(&b);
  std::sort(order.begin(), order.end(),
            [](const GenBody* a, const GenBody* b) { return a->center.x < b->center.x; });
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    const double gap = body_lo(*order[i + 1], true) - body_hi(*order[i], true);
    if (gap < s.h) {
      throw ConfigError("mesh generator: bodies '" + order[i]->region + "' and '" +
                        order[i + 1]->region + "' leave no room for a strip cut between them");
    }
  }

  std::vector<double> cuts;  // interior strip boundaries
  for (size_t i = 0; i + 1 < order.size(); ++i) {
    cuts.push_back(0.5 * (body_hi(*order[i], true) + body_lo(*order[i + 1], true)));
  }

  std::vector<Strip> strips(order.size());
  for (size_t i = 0; i < order.size(); ++i) {
    strips[i].rect = {i == 0 ? s.x0 : cuts[i - 1], i + 1 == order.size() ? s.x1 : cuts[i],
                      s.y0, s.y1};
    strips[i].body = order[i];
  }

  // Rectangular body corners shoot rays to the strip boundary; the hit points
  // become mandatory perimeter nodes.  Hits on a shared vertical cut must be
  // seen by both neighbouring strips, so those are collected per line.
  std::map<long long, std::vector<double>> verticalExtras;  // quantized x -> y hits
  const double quantum = 1e-9 * std::max(s.x1 - s.x0, s.y1 - s.y0);
  auto lineKey = [quantum](double x) { return llround(x / quantum); };

  for (Strip& st : strips) {
    const GenBody& b = *st.body;
    if (b.isDisc) continue;
    const Vec3 corners[4] = {{b.center.x - b.hw, b.center.y - b.hh, 0},
                             {b.center.x + b.hw, b.center.y - b.hh, 0},
                             {b.center.x + b.hw, b.center.y + b.hh, 0},
                             {b.center.x - b.hw, b.center.y + b.hh, 0}};
    for (const Vec3& corner : corners) {
      int side = 0;
      const Vec3 hit = ray_rect_exit(b.center, corner - b.center, st.rect, side);
      if (side == 0) {
        verticalExtras[lineKey(st.rect.xa)].push_back(hit.y);
      } else if (side == 1) {
        verticalExtras[lineKey(st.rect.xb)].push_back(hit.y);
      } else if (side == 2) {
        st.extrasBottom.push_back(hit.x);
      } else if (side == 3) {
        st.extrasTop.push_back(hit.x);
      }
      // side == -1: the ray leaves through a strip corner, already a node
    }
  }

  PlanarMesh m;
  PointPool pool(m, quantum);

  for (const Strip& st : strips) {
    const StripRect& r = st.rect;
    const GenBody& b = *st.body;
    const Vec3 c = {b.center.x, b.center.y, 0.0};

    const std::vector<double> xsBottom = subdivided_coords(r.xa, r.xb, st.extrasBottom, s.h);
    const std::vector<double> xsTop = subdivided_coords(r.xa, r.xb, st.extrasTop, s.h);
    std::vector<double> leftHits, rightHits;
    if (auto it = verticalExtras.find(lineKey(r.xa)); it != verticalExtras.end()) {
      leftHits = it->second;
    }
    if (auto it = verticalExtras.find(lineKey(r.xb)); it != verticalExtras.end()) {
      rightHits = it->second;
    }
    const std::vector<double> ysLeft = subdivided_coords(r.ya, r.yb, leftHits, s.h);
    const std::vector<double> ysRight = subdivided_coords(r.ya, r.yb, rightHits, s.h);

    // Closed CCW perimeter from the bottom-left corner; each corner appears
    // once.
    std::vector<Vec3> perim;
    for (size_t i = 0; i + 1 < xsBottom.size(); ++i) perim.push_back({xsBottom[i], r.ya, 0});
    for (size_t i = 0; i + 1 < ysRight.size(); ++i) perim.push_back({r.xb, ysRight[i], 0});
    for (size_t i = xsTop.size() - 1; i > 0; --i) perim.push_back({xsTop[i], r.yb, 0});
    for (size_t i = ysLeft.size() - 1; i > 0; --i) perim.push_back({r.xa, ysLeft[i], 0});
    const int K = static_cast<int>(perim.size());

    std::vector<Vec3> surf(K);
    for (int k = 0; k < K; ++k) surf[k] = body_surface_point(b, perim[k] - c);

    double hs = 0.0;
    for (int k = 0; k < K; ++k) hs += norm(surf[(k + 1) % K] - surf[k]);
    hs /= K;

    double dMax = 0.0;
    for (int k = 0; k < K; ++k) dMax = std::max(dMax, norm(perim[k] - surf[k]));
    const double rho = 1.2;
    const int mLayers = std::max(
        2, static_cast<int>(std::ceil(std::log1p(dMax * (rho - 1.0) / hs) / std::log(rho))));
    std::vector<double> tj(mLayers + 1);
    for (int j = 0; j <= mLayers; ++j) {
      tj[j] = (std::pow(rho, j) - 1.0) / (std::pow(rho, mLayers) - 1.0);
    }

    // O-grid node ids, level 0 on the body surface, level mLayers on the
    // strip perimeter.
    std::vector<std::vector<int>> ring(mLayers + 1, std::vector<int>(K));
    for (int k = 0; k < K; ++k) {
      ring[0][k] = pool.add(surf[k].x, surf[k].y);
      for (int j = 1; j < mLayers; ++j) {
        const Vec3 p = surf[k] + tj[j] * (perim[k] - surf[k]);
        ring[j][k] = pool.add(p.x, p.y);
      }
      ring[mLayers][k] = pool.add(perim[k].x, perim[k].y);
    }
    for (int j = 0; j < mLayers; ++j) {
      for (int k = 0; k < K; ++k) {
        const int k1 = (k + 1) % K;
        emit_quad(m, s.background, ring[j][k], ring[j + 1][k], ring[j + 1][k1], ring[j][k1],
                  s.triangles, ((k + j) & 1) != 0);
      }
    }

    // Body interior: scaled copies of the surface polygon with azimuthal
    // coarsening, closed by a centre fan.  Keeping the full surface count on
    // every ring would shrink the azimuthal spacing linearly with the radius
    // and end in sliver cells near the centre; dropping every other vertex
    // whenever the spacing falls below the radial step keeps the cell aspect
    // ratio bounded.
    const double rad = b.isDisc ? b.radius : std::min(b.hw, b.hh);
    const int nR = std::min(64, std::max(1, static_cast<int>(llround(rad / hs)) - 1));
    const double dr = rad / (nR + 1);

    std::vector<Vec3> profile = surf;  // full-scale shape of the current ring
    std::vector<int> outerIds = ring[0];
    double profPerim = 0.0;
    for (size_t k = 0; k < profile.size(); ++k) {
      profPerim += norm(profile[(k + 1) % profile.size()] - profile[k]);
    }

    for (int i = 1; i <= nR; ++i) {
      const double scale = static_cast<double>(nR + 1 - i) / (nR + 1);
      const int mm = static_cast<int>(profile.size());
      if (mm > 8 && scale * profPerim / mm < 0.55 * dr) {
        // Halving transition: the child keeps the even-indexed vertices and
        // the strip between the rings is triangulated by a circular merge
        // (child vertex j sits radially inward of parent vertex 2j).
        std::vector<Vec3> child((mm + 1) / 2);
        for (size_t k = 0; k < child.size(); ++k) child[k] = profile[2 * k];
        const int nn = static_cast<int>(child.size());
        std::vector<int> ids(nn);
        for (int k = 0; k < nn; ++k) {
          const Vec3 p = c + scale * (child[k] - c);
          ids[k] = pool.add(p.x, p.y);
        }
        int io = 0, jn = 0;
        while (io < mm || jn < nn) {
          const int outerNext = io + 1;
          const int innerNext = jn + 1 < nn ? 2 * (jn + 1) : mm;
          if (io < mm && (jn >= nn || outerNext <= innerNext)) {
            m.elems.push_back({{outerIds[io], outerIds[(io + 1) % mm], ids[jn % nn]}, b.region});
            ++io;
          } else {
            m.elems.push_back({{ids[(jn + 1) % nn], ids[jn], outerIds[io % mm]}, b.region});
            ++jn;
          }
        }
        profile = child;
        outerIds = ids;
        profPerim = 0.0;
        for (size_t k = 0; k < profile.size(); ++k) {
          profPerim += norm(profile[(k + 1) % profile.size()] - profile[k]);
        }
      } else {
        std::vector<int> ids(mm);
        for (int k = 0; k < mm; ++k) {
          const Vec3 p = c + scale * (profile[k] - c);
          ids[k] = pool.add(p.x, p.y);
        }
        for (int k = 0; k < mm; ++k) {
          const int k1 = (k + 1) % mm;
          emit_quad(m, b.region, ids[k], outerIds[k], outerIds[k1], ids[k1], s.triangles,
                    ((k + i) & 1) != 0);
        }
        outerIds = ids;
      }
    }
    const int centerId = pool.add(c.x, c.y);
    const int L = static_cast<int>(outerIds.size());
    for (int k = 0; k < L; ++k) {
      m.elems.push_back({{centerId, outerIds[k], outerIds[(k + 1) % L]}, b.region});
    }

    // Outer tags: bottom/top always lie on the domain boundary, verticals
    // only for the outermost strips.
    auto tagRun = [&](const std::vector<double>& coords, bool horizontal, double fixed) {
      for (size_t i = 0; i + 1 < coords.size(); ++i) {
        const int a = horizontal ? pool.add(coords[i], fixed) : pool.add(fixed, coords[i]);
        const int bb = horizontal ? pool.add(coords[i + 1], fixed) : pool.add(fixed, coords[i + 1]);
        m.taggedEdges.push_back({a, bb, s.outerPatch});
      }
    };
    tagRun(xsBottom, true, r.ya);
    tagRun(xsTop, true, r.yb);
    if (r.xa == s.x0) tagRun(ysLeft, false, r.xa);
    if (r.xb == s.x1) tagRun(ysRight, false, r.xb);
  }
  return m;
}

GenSpec swapped_spec(const GenSpec& s) {
  GenSpec t = s;
  std::swap(t.x0, t.y0);
  std::swap(t.x1, t.y1);
  for (GenBody& b : t.bodies) {
    std::swap(b.center.x, b.center.y);
    std::swap(b.hw, b.hh);
  }
  return t;
}

bool separable_along(const std::vector<GenBody>& bodies, bool alongX) {
  std::vector<std::pair<double, double>> spans;
  for (const GenBody& b : bodies) spans.push_back({body_lo(b, alongX), body_hi(b, alongX)});
  std::sort(spans.begin(), spans.end());
  for (size_t i = 0; i + 1 < spans.size(); ++i) {
    if (spans[i].second >= spans[i + 1].first) return false;
  }
  return true;
}

double spread(const std::vector<GenBody>& bodies, bool alongX) {
  double lo = 1e300, hi = -1e300;
  for (const GenBody& b : bodies) {
    lo = std::min(lo, alongX ? b.center.x : b.center.y);
    hi = std::max(hi, alongX ? b.center.x : b.center.y);
  }
  return hi - lo;
}

PlanarMesh gen_body_fitted(const GenSpec& s) {
  if (s.bodies.empty()) {
    throw ConfigError("mesh generator: body-fitted kind needs at least one body");
  }
  bool alongX;
  switch (s.split) {
    case GenSpec::Split::X:
      alongX = true;
      break;
    case GenSpec::Split::Y:
      alongX = false;
      break;
    case GenSpec::Split::Auto:
    default: {
      const bool xFirst = spread(s.bodies, true) >= spread(s.bodies, false);
      if (separable_along(s.bodies, xFirst)) {
        alongX = xFirst;
      } else if (separable_along(s.bodies, !xFirst)) {
        alongX = !xFirst;
      } else {
        throw ConfigError(
            "mesh generator: bodies cannot be separated into strips along either axis");
      }
      break;
    }
  }
  if (!separable_along(s.bodies, alongX)) {
    throw ConfigError("mesh generator: bodies overlap along the requested split axis");
  }
  if (alongX) return gen_body_fitted_x(s);

  PlanarMesh m = gen_body_fitted_x(swapped_spec(s));
  for (Vec3& p : m.points) std::swap(p.x, p.y);
  return m;
}

// ---------------------------------------------------------------------------

// Displaces nodes interior to a single region by a fraction of the shortest
// incident edge.  Nodes on tagged (outer) edges or touching two regions stay
// put, so the case geometry is unchanged.
void jitter_planar(PlanarMesh& m, double frac, unsigned seed) {
  const int n = static_cast<int>(m.points.size());
  std::vector<std::set<std::string>> regions(n);
  std::vector<double> minEdge(n, 1e300);
  for (const PlanarMesh::Elem& e : m.elems) {
    const int nv = static_cast<int>(e.verts.size());
    for (int i = 0; i < nv; ++i) {
      const int a = e.verts[i];
      const int b = e.verts[(i + 1) % nv];
      regions[a].insert(e.region);
      const double len = norm(m.points[b] - m.points[a]);
      minEdge[a] = std::min(minEdge[a], len);
      minEdge[b] = std::min(minEdge[b], len);
    }
  }
  std::vector<char> pinned(n, 0);
  for (const PlanarMesh::TaggedEdge& e : m.taggedEdges) {
    pinned[e.v0] = 1;
    pinned[e.v1] = 1;
  }

  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < n; ++i) {
    if (pinned[i] || regions[i].size() != 1) continue;
    const double amp = frac * minEdge[i];
    m.points[i].x += amp * u(gen);
    m.points[i].y += amp * u(gen);
  }
}

}  // namespace

PlanarMesh generate_planar(const GenSpec& spec) {
  validate_spec(spec);
  PlanarMesh m =
      spec.kind == GenSpec::Kind::Cartesian ? gen_cartesian(spec) : gen_body_fitted(spec);
  if (spec.jitter > 0.0) jitter_planar(m, spec.jitter, spec.seed);
  return m;
}

MultiRegionMesh generate_mesh(const GenSpec& spec) {
  return extrude_planar(generate_planar(spec), spec.thickness);
}

MultiRegionMesh hex_box(int nx, int ny, int nz, const Vec3& lo, const Vec3& hi,
                        double jitterFrac, unsigned seed) {
  if (nx < 1 || ny < 1 || nz < 1) throw MeshError("hex_box: cell counts must be positive");

  MultiRegionMesh mesh;
  const Vec3 d = {(hi.x - lo.x) / nx, (hi.y - lo.y) / ny, (hi.z - lo.z) / nz};
  auto pid = [&](int i, int j, int k) { return (k * (ny + 1) + j) * (nx + 1) + i; };
  for (int k = 0; k <= nz; ++k) {
    for (int j = 0; j <= ny; ++j) {
      for (int i = 0; i <= nx; ++i) {
        mesh.points.push_back({lo.x + i * d.x, lo.y + j * d.y, lo.z + k * d.z});
      }
    }
  }
  if (jitterFrac > 0.0) {
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double amp = jitterFrac * std::min(d.x, std::min(d.y, d.z));
    for (int k = 1; k < nz; ++k) {
      for (int j = 1; j < ny; ++j) {
        for (int i = 1; i < nx; ++i) {
          Vec3& p = mesh.points[pid(i, j, k)];
          p += amp * Vec3{u(gen), u(gen), u(gen)};
        }
      }
    }
  }

  Region rg;
  rg.name = "box";
  auto cid = [&](int i, int j, int k) { return (k * ny + j) * nx + i; };
  rg.cells.resize(static_cast<size_t>(nx) * ny * nz);

  auto pushFace = [&](std::vector<int> verts, int owner, int neighbour) {
    Face f;
    f.verts = std::move(verts);
    f.owner = owner;
    f.neighbour = neighbour;
    const int id = static_cast<int>(rg.faces.size());
    rg.faces.push_back(std::move(f));
    rg.cells[owner].push_back(id);
    if (neighbour >= 0) rg.cells[neighbour].push_back(id);
  };

  // Internal faces, area vectors pointing owner -> neighbour.
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i + 1 < nx; ++i) {
        pushFace({pid(i + 1, j, k), pid(i + 1, j + 1, k), pid(i + 1, j + 1, k + 1),
                  pid(i + 1, j, k + 1)},
                 cid(i, j, k), cid(i + 1, j, k));
      }
    }
  }
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j + 1 < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        pushFace({pid(i, j + 1, k), pid(i, j + 1, k + 1), pid(i + 1, j + 1, k + 1),
                  pid(i + 1, j + 1, k)},
                 cid(i, j, k), cid(i, j + 1, k));
      }
    }
  }
  for (int k = 0; k + 1 < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        pushFace({pid(i, j, k + 1), pid(i + 1, j, k + 1), pid(i + 1, j + 1, k + 1),
                  pid(i, j + 1, k + 1)},
                 cid(i, j, k), cid(i, j, k + 1));
      }
    }
  }
  rg.nInternalFaces = static_cast<int>(rg.faces.size());

  auto addPatch = [&](const std::string& name, auto&& emit) {
    BoundaryPatch p;
    p.name = name;
    p.start = static_cast<int>(rg.faces.size());
    emit();
    p.count = static_cast<int>(rg.faces.size()) - p.start;
    rg.patches.push_back(p);
  };
  addPatch("xmin", [&] {
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        pushFace({pid(0, j, k), pid(0, j, k + 1), pid(0, j + 1, k + 1), pid(0, j + 1, k)},
                 cid(0, j, k), -1);
  });
  addPatch("xmax", [&] {
    for (int k = 0; k < nz; ++k)
      for (int j = 0; j < ny; ++j)
        pushFace({pid(nx, j, k), pid(nx, j + 1, k), pid(nx, j + 1, k + 1), pid(nx, j, k + 1)},
                 cid(nx - 1, j, k), -1);
  });
  addPatch("ymin", [&] {
    for (int k = 0; k < nz; ++k)
      for (int i = 0; i < nx; ++i)
        pushFace({pid(i, 0, k), pid(i + 1, 0, k), pid(i + 1, 0, k + 1), pid(i, 0, k + 1)},
                 cid(i, 0, k), -1);
  });
  addPatch("ymax", [&] {
    for (int k = 0; k < nz; ++k)
      for (int i = 0; i < nx; ++i)
        pushFace({pid(i, ny, k), pid(i, ny, k + 1), pid(i + 1, ny, k + 1), pid(i + 1, ny, k)},
                 cid(i, ny - 1, k), -1);
  });
  addPatch("zmin", [&] {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        pushFace({pid(i, j, 0), pid(i, j + 1, 0), pid(i + 1, j + 1, 0), pid(i + 1, j, 0)},
                 cid(i, j, 0), -1);
  });
  addPatch("zmax", [&] {
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i)
        pushFace({pid(i, j, nz), pid(i + 1, j, nz), pid(i + 1, j + 1, nz), pid(i, j + 1, nz)},
                 cid(i, j, nz - 1), -1);
  });

  rg.facePatch.assign(rg.nFaces(), -1);
  for (size_t p = 0; p < rg.patches.size(); ++p) {
    for (int f = rg.patches[p].start; f < rg.patches[p].start + rg.patches[p].count; ++f) {
      rg.facePatch[f] = static_cast<int>(p);
    }
  }
  rg.faceActive.assign(rg.nFaces(), 1);
  rg.faceInterface.assign(rg.nFaces(), -1);
  rg.facePair.assign(rg.nFaces(), -1);

  mesh.regions.push_back(std::move(rg));
  build_geometry(mesh);
  return mesh;
}

}  // namespace ferrovolt
