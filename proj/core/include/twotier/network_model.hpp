#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "twotier/lognormal_algebra.hpp"
#include "twotier/random_stream.hpp"
#include "twotier/ratio_approx.hpp"

namespace twotier {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double k, Point2 a) { return {k * a.x, k * a.y}; }
double norm(Point2 p);
double distance(Point2 a, Point2 b);

// Outdoor exponent alpha (MBS links), indoor exponent beta (FBS links), and
// the wall penetration loss paid per indoor/outdoor boundary.
struct PathLossParams {
  double alpha = 4.0;
  double beta = 3.0;
  double wall_loss_db = 12.0;

  void validate() const;
  // 10^(-W/10): linear gain of one wall crossing.
  double wall_gain() const;
};

struct PowerProfile {
  double macro_dbm = 50.0;
  double femto_dbm = 22.0;

  void validate() const;
};

// dBm to milliwatts.
double dbm_to_linear(double p_dbm);

// Central hexagonal macrocell (circumradius r_macro_m, vertices on the
// x-axis) plus the centers of the surrounding interfering macrocells.
struct NetworkLayout {
  double r_macro_m = 500.0;
  double r_femto_m = 20.0;
  int rings = 2;
  // [0] is M0 at the origin, then the first ring, then the second.
  std::vector<Point2> macro_positions;
  double area_m2 = 0.0;

  bool contains(Point2 p) const;
  std::vector<Point2> hexagon_vertices() const;
};

NetworkLayout build_layout(double r_macro_m, int rings, double r_femto_m);

// Equal-probability partition of the central hexagon into N subregions, each
// independently hosting a femtocell with probability p = lambda_f |H| / N.
// N >= 4 uses a square lattice (corners on multiples of the side) clipped to
// the hexagon, with clipped cells under half the nominal area merged into an
// adjacent full cell; N <= 3 uses equal-area angular sectors.
struct SubregionGrid {
  int n_subregions = 0;
  std::vector<Point2> centers;  // centroid of each clipped cell
  std::vector<double> areas;
  double cell_side_m = 0.0;  // 0 for the sector partition
  double intensity = 0.0;    // lambda_f, per m^2
  double p_occupancy = 0.0;
  double area_m2 = 0.0;

  // Subregion containing p (points on cell edges go to the cell above/right);
  // falls back to the nearest centroid for points outside every cell.
  std::size_t index_of(Point2 p) const;

  // Same geometry at another intensity.
  SubregionGrid with_intensity(double intensity) const;

  // Lattice lookup; not part of the public contract.
  int lattice_i0 = 0;
  int lattice_j0 = 0;
  int lattice_width = 0;
  int lattice_height = 0;
  std::vector<int> lattice_index;
};

// The actual subregion count may differ from the request by at most
// max(2, 5%) because a symmetric lattice cannot hit every N; p uses the
// actual count. Throws IntensityTooHigh when p >= 1.
SubregionGrid build_subregion_grid(const NetworkLayout& layout, int n_subregions,
                                   double intensity);

struct FemtoConfiguration {
  std::vector<std::uint8_t> occupied;

  std::size_t count() const;
  friend bool operator==(const FemtoConfiguration&, const FemtoConfiguration&) = default;
};

// Each subregion occupied iff its own uniform draw is below p, so
// configurations at two intensities drawn from equal streams are nested.
FemtoConfiguration sample_configuration(const SubregionGrid& grid, RandomStream& stream);

// p^k (1-p)^(N-k), evaluated in log space.
double configuration_probability(const SubregionGrid& grid, const FemtoConfiguration& config);
double configuration_probability(double p, const FemtoConfiguration& config);

// Everything that shapes the deterministic interference weights.
struct Network {
  NetworkLayout layout;
  SubregionGrid grid;
  PowerProfile powers;
  PathLossParams pathloss;
};

// Interference-to-signal weights at one receiver: a fixed part (MBS terms)
// plus one candidate term per subregion that counts when occupied. A weight
// of +inf marks a subregion whose FBS would be collocated with the receiver;
// -1 marks the serving subregion of an FUE.
struct TermBank {
  std::vector<WeightedTerm> fixed;
  std::vector<WeightedTerm> per_subregion;

  std::vector<WeightedTerm> assemble(const FemtoConfiguration& config) const;
};

// Serving FBS and FUE placement for a femtocell whose center is requested at
// `femto_center`: the FBS sits at the centroid of the containing subregion and
// the FUE at distance R_f from it, on the segment toward M0.
struct FueGeometry {
  std::size_t serving_index = 0;
  Point2 fbs;
  Point2 ue;
};

FueGeometry fue_geometry(const Network& net, Point2 femto_center);

TermBank mue_term_bank(const Network& net, Point2 r, const SurrogateSet& surrogates);
TermBank fue_term_bank(const Network& net, Point2 femto_center, const SurrogateSet& surrogates);

// MUE at r: psi/psi0 terms xi_j = P_j D_j^-alpha / (P_0 r^-alpha) for each
// neighbouring MBS and phi/psi0 terms xi_i = W P_i D_i^-beta / (P_0 r^-alpha)
// for each occupied subregion.
std::vector<WeightedTerm> mue_weighted_terms(const Network& net, Point2 r,
                                             const FemtoConfiguration& config,
                                             const SurrogateSet& surrogates);

// FUE served by the femtocell at femto_center: psi/phi0 terms
// xi_j = W P_j D_j^-alpha / (P_f R_f^-beta) for every MBS including M0 and
// phi/phi0 terms xi_i = W^2 P_i D_i^-beta / (P_f R_f^-beta) for every other
// occupied subregion.
std::vector<WeightedTerm> fue_weighted_terms(const Network& net, Point2 femto_center,
                                             const FemtoConfiguration& config,
                                             const SurrogateSet& surrogates);

}  // namespace twotier
