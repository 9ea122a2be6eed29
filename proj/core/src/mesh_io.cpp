#include "torusmin/mesh_io.hpp"

#include <deque>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "torusmin/io_util.hpp"

namespace torusmin {

using nlohmann::json;

std::string meshToJson(const PeriodicMesh& mesh) {
  json j;
  const auto& B = mesh.lattice().basis();
  std::vector<double> basis;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) basis.push_back(B(r, c));
  j["basis"] = basis;

  std::vector<std::array<double, 3>> verts(mesh.numVertices());
  for (int v = 0; v < mesh.numVertices(); ++v)
    verts[v] = {mesh.verticesLattice()(v, 0), mesh.verticesLattice()(v, 1), mesh.verticesLattice()(v, 2)};
  j["vertices"] = verts;
  j["faces"] = mesh.faces();

  // One entry per canonical directed edge; keys must be unambiguous.
  std::map<std::string, std::array<int, 3>> shifts;
  for (const auto& e : mesh.edges()) {
    std::string key = std::to_string(e.tail) + "," + std::to_string(e.head);
    std::array<int, 3> s{e.shift[0], e.shift[1], e.shift[2]};
    auto [it, inserted] = shifts.emplace(key, s);
    if (!inserted && it->second != s)
      throw Error(ErrorCode::BadMeshFile, "parallel edges with distinct shifts are not representable");
  }
  j["edge_shifts"] = shifts;
  if (!mesh.id().empty()) j["id"] = mesh.id();
  return j.dump(2);
}

PeriodicMesh meshFromJson(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::BadMeshFile, std::string("json parse: ") + e.what());
  }
  if (!j.contains("basis") || !j.contains("vertices") || !j.contains("faces") || !j.contains("edge_shifts"))
    throw Error(ErrorCode::BadMeshFile, "missing one of basis/vertices/faces/edge_shifts");

  std::vector<double> b = j["basis"].get<std::vector<double>>();
  if (b.size() != 9) throw Error(ErrorCode::BadMeshFile, "basis must have 9 entries (row-major 3x3)");
  Eigen::Matrix3d B;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) B(r, c) = b[3 * r + c];

  auto verts = j["vertices"].get<std::vector<std::array<double, 3>>>();
  Eigen::Matrix<double, Eigen::Dynamic, 3> V(verts.size(), 3);
  for (size_t i = 0; i < verts.size(); ++i)
    V.row(i) << verts[i][0], verts[i][1], verts[i][2];

  auto faces = j["faces"].get<std::vector<std::array<int, 3>>>();

  std::map<std::pair<int, int>, Vec3i> shiftMap;
  for (auto& [key, val] : j["edge_shifts"].items()) {
    auto comma = key.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::BadMeshFile, "edge key not 'tail,head': " + key);
    int tail = std::stoi(key.substr(0, comma));
    int head = std::stoi(key.substr(comma + 1));
    auto s = val.get<std::array<int, 3>>();
    shiftMap[{tail, head}] = Vec3i(s[0], s[1], s[2]);
  }

  std::vector<std::array<Vec3i, 3>> faceShifts(faces.size());
  for (size_t f = 0; f < faces.size(); ++f) {
    for (int s = 0; s < 3; ++s) {
      int a = faces[f][s], bv = faces[f][(s + 1) % 3];
      auto it = shiftMap.find({a, bv});
      if (it != shiftMap.end()) {
        faceShifts[f][s] = it->second;
      } else {
        it = shiftMap.find({bv, a});
        if (it == shiftMap.end())
          throw Error(ErrorCode::BadMeshFile,
                      "no shift for edge " + std::to_string(a) + "," + std::to_string(bv));
        faceShifts[f][s] = -it->second;
      }
    }
  }

  PeriodicMesh mesh(Lattice(B), std::move(V), std::move(faces), std::move(faceShifts));
  if (j.contains("id")) mesh.setId(j["id"].get<std::string>());
  return mesh;
}

void saveMeshJson(const PeriodicMesh& mesh, const std::string& path) {
  writeFileAtomic(path, meshToJson(mesh));
}

PeriodicMesh loadMeshJson(const std::string& path) { return meshFromJson(readFile(path)); }

std::string meshToObj(const PeriodicMesh& mesh) {
  const int F = mesh.numFaces();
  // Per-face frame offsets: BFS over face adjacency so neighbors agree on the
  // lattice copy of their shared edge; remaining mismatches become seams.
  std::vector<Vec3i> frame(F, Vec3i::Zero());
  std::vector<char> seen(F, 0);
  std::deque<int> queue;
  for (int root = 0; root < F; ++root) {
    if (seen[root]) continue;
    seen[root] = 1;
    queue.push_back(root);
    while (!queue.empty()) {
      int f = queue.front();
      queue.pop_front();
      // Per-corner offsets inside f's own frame.
      std::array<Vec3i, 3> corner = {Vec3i::Zero(), mesh.faceShifts()[f][0],
                                     mesh.faceShifts()[f][0] + mesh.faceShifts()[f][1]};
      for (int s = 0; s < 3; ++s) {
        int e = mesh.faceEdges()[f][s];
        const auto& edge = mesh.edges()[e];
        int g = (mesh.faceEdgeSigns()[f][s] > 0) ? edge.face1 : edge.face0;
        if (g == -1 || seen[g]) continue;
        // Align g so the shared tail vertex has the same absolute offset.
        int a = mesh.faces()[f][s];
        std::array<Vec3i, 3> cornerG = {Vec3i::Zero(), mesh.faceShifts()[g][0],
                                        mesh.faceShifts()[g][0] + mesh.faceShifts()[g][1]};
        int sg = -1;
        for (int k = 0; k < 3; ++k)
          if (mesh.faces()[g][k] == a) sg = k;
        if (sg == -1) continue;
        frame[g] = frame[f] + corner[s] - cornerG[sg];
        seen[g] = 1;
        queue.push_back(g);
      }
    }
  }

  // Instance vertices keyed by (vertex, absolute offset).
  std::map<std::pair<int, std::array<int, 3>>, int> instance;
  std::ostringstream verts, facesOut;
  verts.precision(17);
  int next = 1;  // obj indices are 1-based
  auto instanceId = [&](int v, const Vec3i& off) {
    std::array<int, 3> key{off[0], off[1], off[2]};
    auto [it, inserted] = instance.emplace(std::make_pair(v, key), next);
    if (inserted) {
      Vec3 p = mesh.lattice().basis() *
               (mesh.verticesLattice().row(v).transpose() + off.cast<double>());
      verts << "v " << p[0] << " " << p[1] << " " << p[2] << "\n";
      ++next;
    }
    return it->second;
  };
  for (int f = 0; f < F; ++f) {
    std::array<Vec3i, 3> corner = {Vec3i::Zero(), mesh.faceShifts()[f][0],
                                   mesh.faceShifts()[f][0] + mesh.faceShifts()[f][1]};
    int i0 = instanceId(mesh.faces()[f][0], frame[f] + corner[0]);
    int i1 = instanceId(mesh.faces()[f][1], frame[f] + corner[1]);
    int i2 = instanceId(mesh.faces()[f][2], frame[f] + corner[2]);
    facesOut << "f " << i0 << " " << i1 << " " << i2 << "\n";
  }
  return "# torusmin periodic mesh, seams unwrapped\n" + verts.str() + facesOut.str();
}

void saveMeshObj(const PeriodicMesh& mesh, const std::string& path) {
  writeFileAtomic(path, meshToObj(mesh));
}

}  // namespace torusmin
