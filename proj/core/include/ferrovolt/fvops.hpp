#pragma once

#include <string>
#include <vector>

#include "ferrovolt/fields.hpp"
#include "ferrovolt/mesh.hpp"
#include "ferrovolt/sparse.hpp"
#include "ferrovolt/vec.hpp"

namespace ferrovolt {

// Face-addressed arrays are sized region.nFaces().  Planar-excluded slots
// exist so indexing stays uniform, but every operator skips them: a planar
// field has equal values on the two z faces and opposite normals, so their
// fluxes cancel identically and dropping them is exact.

// phi_f = w phi_C + (1-w) phi_E on internal faces; boundary slots untouched.
void interpolate_internal(const Region& rg, const std::vector<Vec3>& cell,
                          std::vector<Vec3>& face);
void interpolate_internal(const Region& rg, const std::vector<double>& cell,
                          std::vector<double>& face);

// Fills active boundary slots: FixedValue evaluates the condition at the face
// centroid, ZeroNormalGradient copies the owner cell.  InterfaceCoupled slots
// are left alone; the coupling layer owns those values.
void apply_boundary_values(const Region& rg, const std::vector<BoundaryCondition>& patchBcs,
                           const std::vector<Vec3>& cell, std::vector<Vec3>& face);

// Copies the owner value onto every active boundary slot (including
// interfaces).  One-sided closure for material fields.
void extend_owner_values(const Region& rg, const std::vector<Vec3>& cell,
                         std::vector<Vec3>& face);

// Green-Gauss gradient (1/V) sum s_f (x) a_f over active faces, G(i,j) = d_i a_j.
// Exact for affine fields whenever the face values are exact.
std::vector<Mat3> gauss_gradient(const Region& rg, const std::vector<Vec3>& face);
std::vector<Vec3> gauss_gradient(const Region& rg, const std::vector<double>& face);

// Distance-weighted least-squares gradient over internal-face neighbours plus
// active boundary face values as one-sided stencil points.  Planar meshes
// have no stencil extent in z; that direction is pinned to a zero derivative
// instead of leaving the normal matrix singular.
std::vector<Mat3> least_squares_gradient(const Region& rg, const std::vector<Vec3>& cell,
                                         const std::vector<Vec3>& face);
std::vector<Vec3> least_squares_gradient(const Region& rg, const std::vector<double>& cell,
                                         const std::vector<double>& face);

// Linear interpolation evaluates the field on the centroid line, not at the
// face centroid; on skewed faces the two differ by an O(h) offset and the
// Gauss gradient loses its affine exactness.  This shifts every internal face
// value to the face centroid using least-squares cell gradients, which are
// affine-exact on any stencil, so the corrected Gauss gradient is too.
// Boundary slots (already evaluated at face centroids) are left alone and
// must be filled before the call: they feed the least-squares stencils.
void skew_correct_internal(const Region& rg, const std::vector<Vec3>& cell,
                           std::vector<Vec3>& face);
void skew_correct_internal(const Region& rg, const std::vector<double>& cell,
                           std::vector<double>& face);

enum class GradientScheme { Gauss, LeastSquares };
GradientScheme parse_gradient_scheme(const std::string& name);

// (phi_E - phi_C)/delta per internal face; boundary slots zero.
std::vector<Vec3> normal_gradient(const Region& rg, const std::vector<Vec3>& cell);

// w-interpolated gradients on internal faces, owner copies on active boundary
// faces.
std::vector<Mat3> face_gradients(const Region& rg, const std::vector<Mat3>& cellGrad);

// Over-relaxed-style deferred correction per internal face:
//   corr_f = (nHat - rHat) . gradA_f,  gradA_f = w G_C + (1-w) G_E.
// Zero on orthogonal faces where nHat == rHat.
std::vector<Vec3> non_orthogonal_correction(const Region& rg, const std::vector<Mat3>& cellGrad);

// Matrix of the negated Laplacian (SPD): internal faces add |s_f|/delta to
// both diagonals and -|s_f|/delta across, FixedValue faces add |s_f|/d_n to
// the owner diagonal.  InterfaceCoupled faces contribute nothing here; the
// coupling layer adds their diagonal together with the lagged sources.
SparseMatrix assemble_negated_laplacian(const Region& rg,
                                        const std::vector<BoundaryCondition>& patchBcs);

// rhs_C += |s_f| corr_f, rhs_E -= |s_f| corr_f for internal faces.
void add_non_orthogonal_sources(const Region& rg, const std::vector<Vec3>& corr,
                                std::vector<Vec3>& rhs);

// FixedValue faces, value part: rhs_C += |s_f|/d_n A_b(x_f).
void add_dirichlet_value_sources(const Region& rg,
                                 const std::vector<BoundaryCondition>& patchBcs,
                                 std::vector<Vec3>& rhs);

// FixedValue faces, deferred skew part:
//   rhs_C += |s_f| (nHat - (x_f - x_C)/d_n) . G_C
// Vanishes when the centroid lies on the face normal through the face
// centroid; re-evaluated together with the internal non-orthogonal
// correction.
void add_dirichlet_skew_sources(const Region& rg, const std::vector<BoundaryCondition>& patchBcs,
                                const std::vector<Mat3>& cellGrad, std::vector<Vec3>& rhs);

// Per cell: sum_f +/- chi_f s_f . (G_f - G_f^T) over active faces, the flux
// form of div(chi grad~ A).  Not divided by the volume; the caller uses it as
// an integrated source.
std::vector<Vec3> div_skew_flux(const Region& rg, const std::vector<double>& chiFace,
                                const std::vector<Mat3>& faceGrad);

// (1/V) sum s_f x v_f: the curl as the dual of the Gauss gradient.
std::vector<Vec3> curl_from_faces(const Region& rg, const std::vector<Vec3>& face);

// Internal faces interpolated, boundary and interface faces extrapolated from
// a Gauss bootstrap gradient.  Uniform regions reproduce chi exactly.
std::vector<double> susceptibility_face_values(const Region& rg,
                                               const std::vector<double>& chiCell);

}  // namespace ferrovolt
