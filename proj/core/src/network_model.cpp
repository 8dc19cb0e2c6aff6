#include "twotier/network_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "twotier/error.hpp"

namespace twotier {

double norm(Point2 p) { return std::hypot(p.x, p.y); }
double distance(Point2 a, Point2 b) { return norm(a - b); }

void PathLossParams::validate() const {
  if (!(alpha > 2.0) || !(beta > 2.0) || !(wall_loss_db >= 0.0) || !std::isfinite(wall_loss_db)) {
    throw InvalidConfiguration("PathLossParams: need alpha > 2, beta > 2, wall_loss_db >= 0");
  }
}

double PathLossParams::wall_gain() const { return std::pow(10.0, -wall_loss_db / 10.0); }

void PowerProfile::validate() const {
  if (!std::isfinite(macro_dbm) || !std::isfinite(femto_dbm)) {
    throw InvalidConfiguration("PowerProfile: powers must be finite");
  }
}

double dbm_to_linear(double p_dbm) { return std::pow(10.0, p_dbm / 10.0); }

// ---------------------------------------------------------------------------
// Layout

namespace {

constexpr double kSqrt3 = std::numbers::sqrt3;

Point2 polar(double radius, double degrees) {
  const double t = degrees * std::numbers::pi / 180.0;
  return {radius * std::cos(t), radius * std::sin(t)};
}

using Polygon = std::vector<Point2>;

double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }

double polygon_area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    a += cross(poly[i], poly[(i + 1) % poly.size()]);
  }
  return 0.5 * a;
}

Point2 polygon_centroid(const Polygon& poly) {
  double a = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 p = poly[i];
    const Point2 q = poly[(i + 1) % poly.size()];
    const double c = cross(p, q);
    a += c;
    cx += (p.x + q.x) * c;
    cy += (p.y + q.y) * c;
  }
  return {cx / (3.0 * a), cy / (3.0 * a)};
}

// Sutherland-Hodgman clip of `subject` against a convex CCW polygon.
Polygon clip_convex(Polygon subject, const Polygon& clip) {
  for (std::size_t e = 0; e < clip.size() && !subject.empty(); ++e) {
    const Point2 a = clip[e];
    const Point2 b = clip[(e + 1) % clip.size()];
    const auto side = [&](Point2 p) { return cross(b - a, p - a); };
    Polygon out;
    for (std::size_t i = 0; i < subject.size(); ++i) {
      const Point2 p = subject[i];
      const Point2 q = subject[(i + 1) % subject.size()];
      const double sp = side(p);
      const double sq = side(q);
      if (sp >= 0.0) out.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) {
        const double t = sp / (sp - sq);
        out.push_back(p + t * (q - p));
      }
    }
    subject = std::move(out);
  }
  return subject;
}

}  // namespace

std::vector<Point2> NetworkLayout::hexagon_vertices() const {
  std::vector<Point2> v;
  for (int k = 0; k < 6; ++k) v.push_back(polar(r_macro_m, 60.0 * k));
  return v;
}

bool NetworkLayout::contains(Point2 p) const {
  const double eps = 1e-9 * r_macro_m;
  const double ax = std::abs(p.x);
  const double ay = std::abs(p.y);
  return ay <= 0.5 * kSqrt3 * r_macro_m + eps && kSqrt3 * ax + ay <= kSqrt3 * r_macro_m + eps;
}

NetworkLayout build_layout(double r_macro_m, int rings, double r_femto_m) {
  if (!(r_macro_m > 0.0) || !std::isfinite(r_macro_m)) {
    throw InvalidConfiguration("build_layout: macrocell radius must be > 0");
  }
  if (rings != 1 && rings != 2) {
    throw InvalidConfiguration("build_layout: rings must be 1 or 2");
  }
  if (!(r_femto_m > 0.0) || !(r_femto_m < r_macro_m)) {
    throw InvalidConfiguration("build_layout: need 0 < r_femto_m < r_macro_m");
  }
  NetworkLayout layout;
  layout.r_macro_m = r_macro_m;
  layout.r_femto_m = r_femto_m;
  layout.rings = rings;
  layout.area_m2 = 1.5 * kSqrt3 * r_macro_m * r_macro_m;
  layout.macro_positions.push_back({0.0, 0.0});
  for (int k = 0; k < 6; ++k) {
    layout.macro_positions.push_back(polar(kSqrt3 * r_macro_m, 30.0 + 60.0 * k));
  }
  if (rings == 2) {
    for (int k = 0; k < 6; ++k) {
      layout.macro_positions.push_back(polar(3.0 * r_macro_m, 60.0 * k));
      layout.macro_positions.push_back(polar(2.0 * kSqrt3 * r_macro_m, 30.0 + 60.0 * k));
    }
  }
  return layout;
}

// ---------------------------------------------------------------------------
// Subregions

namespace {

struct LatticeCells {
  std::vector<Polygon> cells;
  std::vector<std::pair<int, int>> ij;
};

LatticeCells clip_lattice(const Polygon& hexagon, double radius, double side) {
  LatticeCells out;
  const int reach = static_cast<int>(std::ceil(radius / side));
  const double min_area = 1e-9 * side * side;
  for (int j = -reach; j < reach; ++j) {
    for (int i = -reach; i < reach; ++i) {
      const double x0 = i * side;
      const double y0 = j * side;
      Polygon square{{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}};
      Polygon cell = clip_convex(std::move(square), hexagon);
      if (cell.size() < 3 || polygon_area(cell) <= min_area) continue;
      out.cells.push_back(std::move(cell));
      out.ij.emplace_back(i, j);
    }
  }
  return out;
}

// Lattice cells grouped into subregions. A cell clipped below half the
// nominal area joins the largest full cell next to it, so that subregions
// stay close to equal in area.
struct Regions {
  std::vector<Point2> centers;
  std::vector<double> areas;
  std::vector<int> region_of_cell;
};

Regions merge_slivers(const LatticeCells& lattice, double side) {
  const std::size_t n = lattice.cells.size();
  const double full = 0.5 * side * side;
  std::map<std::pair<int, int>, std::size_t> at;
  std::vector<double> area(n);
  for (std::size_t c = 0; c < n; ++c) {
    at.emplace(lattice.ij[c], c);
    area[c] = polygon_area(lattice.cells[c]);
  }
  auto host_of = [&](std::size_t c) -> std::optional<std::size_t> {
    static constexpr int kEdge[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    static constexpr int kCorner[4][2] = {{1, 1}, {-1, 1}, {1, -1}, {-1, -1}};
    for (const auto* ring : {kEdge, kCorner}) {
      std::optional<std::size_t> best;
      for (int k = 0; k < 4; ++k) {
        const auto it = at.find({lattice.ij[c].first + ring[k][0], lattice.ij[c].second + ring[k][1]});
        if (it == at.end() || area[it->second] < full) continue;
        if (!best || area[it->second] > area[*best]) best = it->second;
      }
      if (best) return best;
    }
    return std::nullopt;
  };

  std::vector<std::size_t> owner(n);
  for (std::size_t c = 0; c < n; ++c) {
    owner[c] = c;
    if (area[c] < full) {
      if (const auto h = host_of(c)) owner[c] = *h;
    }
  }
  Regions r;
  r.region_of_cell.assign(n, -1);
  std::vector<double> mx, my;
  for (std::size_t c = 0; c < n; ++c) {
    if (owner[c] != c) continue;
    r.region_of_cell[c] = static_cast<int>(r.areas.size());
    r.areas.push_back(0.0);
    mx.push_back(0.0);
    my.push_back(0.0);
  }
  for (std::size_t c = 0; c < n; ++c) {
    const int g = r.region_of_cell[owner[c]];
    r.region_of_cell[c] = g;
    const Point2 cc = polygon_centroid(lattice.cells[c]);
    r.areas[g] += area[c];
    mx[g] += area[c] * cc.x;
    my[g] += area[c] * cc.y;
  }
  for (std::size_t g = 0; g < r.areas.size(); ++g) {
    r.centers.push_back({mx[g] / r.areas[g], my[g] / r.areas[g]});
  }
  return r;
}

std::size_t lattice_count(const Polygon& hexagon, double radius, double side) {
  return merge_slivers(clip_lattice(hexagon, radius, side), side).areas.size();
}

double occupancy(double intensity, double area, int n) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
    throw InvalidConfiguration("femtocell intensity must be finite and >= 0");
  }
  const double p = intensity * area / n;
  if (!(p < 1.0)) {
    throw IntensityTooHigh("occupancy probability " + std::to_string(p) +
                           " >= 1; use more subregions or a lower intensity");
  }
  return p;
}

}  // namespace

SubregionGrid build_subregion_grid(const NetworkLayout& layout, int n_subregions,
                                   double intensity) {
  if (n_subregions < 1) throw InvalidConfiguration("build_subregion_grid: N must be >= 1");
  const Polygon hexagon = layout.hexagon_vertices();
  SubregionGrid grid;
  grid.area_m2 = layout.area_m2;

  if (n_subregions <= 3) {
    // Sectors bounded by rays through vertices: 1 -> whole, 2 -> halves, 3 -> thirds.
    const int per = 6 / n_subregions;
    for (int s = 0; s < n_subregions; ++s) {
      Polygon sector{{0.0, 0.0}};
      for (int k = 0; k <= per; ++k) sector.push_back(hexagon[(s * per + k) % 6]);
      if (n_subregions == 1) sector = hexagon;
      grid.centers.push_back(polygon_centroid(sector));
      grid.areas.push_back(polygon_area(sector));
    }
    grid.n_subregions = n_subregions;
  } else {
    const double nominal = std::sqrt(layout.area_m2 / n_subregions);
    double best_side = nominal;
    long best_gap = std::numeric_limits<long>::max();
    constexpr int kCandidates = 800;
    for (int k = 0; k <= kCandidates; ++k) {
      // Scan outward from the nominal side so ties prefer the closest one.
      const int offset = (k % 2 == 0) ? k / 2 : -(k + 1) / 2;
      const double side = nominal * (1.0 + 0.25 * offset / kCandidates);
      const long gap = std::labs(static_cast<long>(lattice_count(hexagon, layout.r_macro_m, side)) -
                                 n_subregions);
      if (gap < best_gap) {
        best_gap = gap;
        best_side = side;
        if (gap == 0) break;
      }
    }
    const double tolerance = std::max(2.0, 0.05 * n_subregions);
    if (static_cast<double>(best_gap) > tolerance) {
      throw InvalidConfiguration("build_subregion_grid: cannot partition into ~" +
                                 std::to_string(n_subregions) + " lattice cells");
    }
    const auto lattice = clip_lattice(hexagon, layout.r_macro_m, best_side);
    const auto regions = merge_slivers(lattice, best_side);
    grid.cell_side_m = best_side;
    grid.n_subregions = static_cast<int>(regions.areas.size());
    grid.centers = regions.centers;
    grid.areas = regions.areas;
    int i_min = std::numeric_limits<int>::max();
    int j_min = i_min;
    int i_max = std::numeric_limits<int>::min();
    int j_max = i_max;
    for (const auto& [i, j] : lattice.ij) {
      i_min = std::min(i_min, i);
      j_min = std::min(j_min, j);
      i_max = std::max(i_max, i);
      j_max = std::max(j_max, j);
    }
    grid.lattice_i0 = i_min;
    grid.lattice_j0 = j_min;
    grid.lattice_width = i_max - i_min + 1;
    grid.lattice_height = j_max - j_min + 1;
    grid.lattice_index.assign(static_cast<std::size_t>(grid.lattice_width * grid.lattice_height), -1);
    for (std::size_t c = 0; c < lattice.cells.size(); ++c) {
      const auto [i, j] = lattice.ij[c];
      grid.lattice_index[static_cast<std::size_t>((j - j_min) * grid.lattice_width + (i - i_min))] =
          regions.region_of_cell[c];
    }
  }
  grid.intensity = intensity;
  grid.p_occupancy = occupancy(intensity, layout.area_m2, grid.n_subregions);
  return grid;
}

SubregionGrid SubregionGrid::with_intensity(double new_intensity) const {
  SubregionGrid g = *this;
  g.intensity = new_intensity;
  g.p_occupancy = occupancy(new_intensity, area_m2, n_subregions);
  return g;
}

std::size_t SubregionGrid::index_of(Point2 p) const {
  if (cell_side_m > 0.0) {
    const int i = static_cast<int>(std::floor(p.x / cell_side_m)) - lattice_i0;
    const int j = static_cast<int>(std::floor(p.y / cell_side_m)) - lattice_j0;
    if (i >= 0 && j >= 0 && i < lattice_width && j < lattice_height) {
      const int c = lattice_index[static_cast<std::size_t>(j * lattice_width + i)];
      if (c >= 0) return static_cast<std::size_t>(c);
    }
  } else if (n_subregions > 1) {
    double deg = std::atan2(p.y, p.x) * 180.0 / std::numbers::pi;
    if (deg < 0.0) deg += 360.0;
    const auto s = static_cast<std::size_t>(deg / (360.0 / n_subregions));
    return std::min<std::size_t>(s, static_cast<std::size_t>(n_subregions - 1));
  } else {
    return 0;
  }
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.size(); ++c) {
    const double d = distance(centers[c], p);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

std::size_t FemtoConfiguration::count() const {
  return static_cast<std::size_t>(std::count(occupied.begin(), occupied.end(), std::uint8_t{1}));
}

FemtoConfiguration sample_configuration(const SubregionGrid& grid, RandomStream& stream) {
  FemtoConfiguration config;
  config.occupied.resize(static_cast<std::size_t>(grid.n_subregions));
  for (auto& bit : config.occupied) bit = stream.uniform() < grid.p_occupancy ? 1 : 0;
  return config;
}

double configuration_probability(double p, const FemtoConfiguration& config) {
  const auto n = static_cast<double>(config.occupied.size());
  const auto k = static_cast<double>(config.count());
  if (p <= 0.0) return k == 0.0 ? 1.0 : 0.0;
  if (p >= 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(k * std::log(p) + (n - k) * std::log1p(-p));
}

double configuration_probability(const SubregionGrid& grid, const FemtoConfiguration& config) {
  if (config.occupied.size() != static_cast<std::size_t>(grid.n_subregions)) {
    throw InvalidConfiguration("configuration length does not match the subregion count");
  }
  return configuration_probability(grid.p_occupancy, config);
}

// ---------------------------------------------------------------------------
// Interference weights

std::vector<WeightedTerm> TermBank::assemble(const FemtoConfiguration& config) const {
  if (config.occupied.size() != per_subregion.size()) {
    throw InvalidConfiguration("configuration length does not match the subregion count");
  }
  std::vector<WeightedTerm> terms = fixed;
  for (std::size_t i = 0; i < per_subregion.size(); ++i) {
    if (!config.occupied[i]) continue;
    const auto& t = per_subregion[i];
    if (t.weight < 0.0) continue;  // serving femtocell
    if (std::isinf(t.weight)) {
      throw GeometryError("receiver is collocated with the FBS of subregion " + std::to_string(i));
    }
    terms.push_back(t);
  }
  return terms;
}

namespace {

void require_inside(const NetworkLayout& layout, Point2 p, const char* who) {
  if (!layout.contains(p)) {
    throw GeometryError(std::string(who) + ": position (" + std::to_string(p.x) + ", " +
                        std::to_string(p.y) + ") lies outside the central macrocell");
  }
}

// (reference / d)^exponent, +inf when collocated.
double gain_ratio(double reference, double d, double exponent) {
  if (d <= 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(reference / d, exponent);
}

}  // namespace

FueGeometry fue_geometry(const Network& net, Point2 femto_center) {
  require_inside(net.layout, femto_center, "fue_geometry");
  FueGeometry g;
  g.serving_index = net.grid.index_of(femto_center);
  g.fbs = net.grid.centers[g.serving_index];
  Point2 toward = g.fbs;
  if (norm(toward) == 0.0) toward = femto_center;
  if (norm(toward) == 0.0) {
    throw GeometryError("fue_geometry: femtocell at M0 has no direction toward M0");
  }
  g.ue = g.fbs - (net.layout.r_femto_m / norm(toward)) * toward;
  return g;
}

TermBank mue_term_bank(const Network& net, Point2 r, const SurrogateSet& surrogates) {
  require_inside(net.layout, r, "mue_term_bank");
  const double dist = norm(r);
  if (dist <= 0.0) throw GeometryError("MUE collocated with its serving MBS");
  const auto& pl = net.pathloss;
  const double p0 = dbm_to_linear(net.powers.macro_dbm);
  const double pj = p0;
  const double pf = dbm_to_linear(net.powers.femto_dbm);
  const double r_gain = std::pow(dist, -pl.alpha);

  TermBank bank;
  const auto& macro = net.layout.macro_positions;
  for (std::size_t j = 1; j < macro.size(); ++j) {
    const double w = (pj / p0) * gain_ratio(dist, distance(r, macro[j]), pl.alpha);
    if (std::isinf(w)) throw GeometryError("MUE collocated with an interfering MBS");
    bank.fixed.push_back({w, RatioKind::RayleighOverRayleigh,
                          surrogates.at(RatioKind::RayleighOverRayleigh)});
  }
  const auto& femto_surrogate = surrogates.at(RatioKind::LogNormalOverRayleigh);
  for (const Point2& c : net.grid.centers) {
    const double d = distance(r, c);
    const double w = d > 0.0 ? pl.wall_gain() * pf * std::pow(d, -pl.beta) / (p0 * r_gain)
                             : std::numeric_limits<double>::infinity();
    bank.per_subregion.push_back({w, RatioKind::LogNormalOverRayleigh, femto_surrogate});
  }
  return bank;
}

TermBank fue_term_bank(const Network& net, Point2 femto_center, const SurrogateSet& surrogates) {
  const FueGeometry g = fue_geometry(net, femto_center);
  const auto& pl = net.pathloss;
  const double pm = dbm_to_linear(net.powers.macro_dbm);
  const double pf = dbm_to_linear(net.powers.femto_dbm);
  const double signal = pf * std::pow(net.layout.r_femto_m, -pl.beta);
  const double wall = pl.wall_gain();

  TermBank bank;
  for (const Point2& m : net.layout.macro_positions) {
    const double d = distance(g.ue, m);
    if (d <= 0.0) throw GeometryError("FUE collocated with an MBS");
    bank.fixed.push_back({wall * pm * std::pow(d, -pl.alpha) / signal,
                          RatioKind::RayleighOverLogNormal,
                          surrogates.at(RatioKind::RayleighOverLogNormal)});
  }
  const auto& femto_surrogate = surrogates.at(RatioKind::LogNormalOverLogNormal);
  for (std::size_t i = 0; i < net.grid.centers.size(); ++i) {
    double w = -1.0;
    if (i != g.serving_index) {
      const double d = distance(g.ue, net.grid.centers[i]);
      w = d > 0.0 ? wall * wall * pf * std::pow(d, -pl.beta) / signal
                  : std::numeric_limits<double>::infinity();
    }
    bank.per_subregion.push_back({w, RatioKind::LogNormalOverLogNormal, femto_surrogate});
  }
  return bank;
}

std::vector<WeightedTerm> mue_weighted_terms(const Network& net, Point2 r,
                                             const FemtoConfiguration& config,
                                             const SurrogateSet& surrogates) {
  return mue_term_bank(net, r, surrogates).assemble(config);
}

std::vector<WeightedTerm> fue_weighted_terms(const Network& net, Point2 femto_center,
                                             const FemtoConfiguration& config,
                                             const SurrogateSet& surrogates) {
  return fue_term_bank(net, femto_center, surrogates).assemble(config);
}

}  // namespace twotier
