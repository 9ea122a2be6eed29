#pragma once

#include <functional>

#include "torusmin/periodic_mesh.hpp"

namespace torusmin {

enum class TpmsFamily { P, D, G };

TpmsFamily tpmsFamilyFromString(const std::string& s);  // "P" | "D" | "G"
const char* tpmsFamilyName(TpmsFamily f);

/// Regular m x m triangulated totally geodesic 2-torus orthogonal to the given
/// lattice axis. Requires the axis column parallel to the corresponding
/// Euclidean axis and the other columns orthogonal to it (cubic lattices
/// always qualify).
PeriodicMesh flatTorusMesh(const Lattice& lattice, int normalAxis, int resolution);

/// Level-set mesh of the family's nodal function, extracted with marching
/// tetrahedra (Freudenthal decomposition) on the family's primitive
/// translation cell. The output passes validateMesh.
PeriodicMesh tpmsNodalMesh(TpmsFamily family, int resolution);

/// Generic periodic level-set extraction of f(x)=0 over the given lattice.
PeriodicMesh marchingTetrahedra(const Lattice& lattice, int resolution,
                                const std::function<double(const Vec3&)>& f);

double nodalValue(TpmsFamily family, const Vec3& p);
Lattice tpmsPrimitiveLattice(TpmsFamily family);

}  // namespace torusmin
