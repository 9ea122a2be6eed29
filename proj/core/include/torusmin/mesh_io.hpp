#pragma once

#include <string>

#include "torusmin/periodic_mesh.hpp"

namespace torusmin {

/// JSON mesh document: {"basis": row-major 3x3, "vertices": lattice coords,
/// "faces": vertex triples, "edge_shifts": {"tail,head": [sx,sy,sz]}}.
std::string meshToJson(const PeriodicMesh& mesh);
PeriodicMesh meshFromJson(const std::string& text);

void saveMeshJson(const PeriodicMesh& mesh, const std::string& path);
PeriodicMesh loadMeshJson(const std::string& path);

/// Wavefront OBJ export for viewing. Faces are laid out in unwrapped ambient
/// coordinates; vertices on seam-crossing edges are duplicated per lattice copy.
std::string meshToObj(const PeriodicMesh& mesh);
void saveMeshObj(const PeriodicMesh& mesh, const std::string& path);

}  // namespace torusmin
