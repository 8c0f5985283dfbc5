#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tdbem/quadrature.h"

namespace tdbem {

enum class UnknownKind { dirichlet_traction, neumann_displacement };

// Lower-triangular block Toeplitz system. Unknown vectors are laid out as
// [component 1 dofs, component 2 dofs].
struct ToeplitzBlockSystem {
  std::vector<Eigen::MatrixXd> blocks;  // E^(0..N-1), each 2M x 2M
  UnknownKind unknown_kind = UnknownKind::dirichlet_traction;
  BasisSpace space;
  TimeGrid time;
  Material material;

  int dof() const { return space.dof_count; }
};

struct RhsHistory {
  std::vector<Eigen::VectorXd> vectors;
};

// Space-time boundary data. Separable data use profile(t) * spatial[i](x);
// a general field, when set, takes precedence. Both must vanish for t <= 0.
struct BoundaryDatum {
  std::function<double(double)> profile;
  std::array<std::function<double(Vec2)>, 2> spatial;
  std::function<double(int, Vec2, double)> field;
  // abscissae x where the spatial data are not smooth (elements are split there)
  std::vector<double> kinks_x;

  double value(int i, Vec2 x, double t) const;
  bool separable() const { return !field && static_cast<bool>(profile); }
};

// f(t) = sin^2(4 pi t) on [0, 1/8], 1 afterwards, 0 for t <= 0.
double smooth_step_profile(double t);
double heaviside_profile(double t);

BoundaryDatum datum_polynomial(double coef1, double coef2, double power);  // c_i f(t) x^power
BoundaryDatum datum_abs_power(double coef1, double coef2, double power);   // c_i f(t) |x|^power
BoundaryDatum datum_constant(double eta1, double eta2);                    // eta_i H(t)
// eta_i times a linear ramp of the given width, for checks of the impulse limit
BoundaryDatum datum_ramp(double eta1, double eta2, double width);
// Same data as a general field (no separable shortcut).
BoundaryDatum as_field(const BoundaryDatum& d);

struct AssemblyOptions {
  QuadOptions quad;
  int threads = 1;
};

AssemblyOptions assembly_options_from_tol(double tol);

Eigen::MatrixXd assemble_block_v(const BasisSpace& space, const TimeGrid& time, const Material& m,
                                 int lag, const AssemblyOptions& opt = {});
Eigen::MatrixXd assemble_block_w(const BasisSpace& space, const TimeGrid& time, const Material& m,
                                 int lag, const AssemblyOptions& opt = {});

// All blocks up to time.n_steps - 1.
ToeplitzBlockSystem assemble_system(UnknownKind kind, const BasisSpace& space,
                                    const TimeGrid& time, const Material& m,
                                    const AssemblyOptions& opt = {});

RhsHistory assemble_rhs_dirichlet(const BasisSpace& space, const TimeGrid& time,
                                  const BoundaryDatum& datum);
RhsHistory assemble_rhs_neumann(const BasisSpace& space, const TimeGrid& time,
                                const BoundaryDatum& datum);

// Smallest distance between points of two distinct elements over the mesh;
// zero when elements touch.
double min_element_gap(const BoundaryMesh& mesh, std::size_t e1, std::size_t e2);

// Binary block cache, little-endian:
//   char[8] "TDBEMBLK", uint32 version, uint64 key, uint64 M, uint64 N,
//   then N row-major blocks of 2M x 2M float64 in lag order.
std::uint64_t cache_key(const BasisSpace& space, const TimeGrid& time, const Material& m,
                        UnknownKind kind, const QuadOptions& q);
void write_block_cache(std::ostream& os, const ToeplitzBlockSystem& sys, std::uint64_t key);
// Returns false when the stream is not a cache for this key.
bool read_block_cache(std::istream& is, ToeplitzBlockSystem& sys, std::uint64_t key);

}  // namespace tdbem
