#pragma once
// CSV and OBJ export of sampled surfaces; CSV import for mesh-mode checks.

#include <string>
#include <vector>

#include "rwsurf/surface.hpp"
#include "rwsurf/verify.hpp"

namespace rwsurf {

/// Samples `immersion` at nu x nv nodes spanning its whole parameter rectangle,
/// u-major.
MeshGrid sample_immersion(const Immersion& immersion, int nu, int nv);

/// Header `u,v,t,x1,x2,x3,x4`; x4 left empty for c = 0. 17 significant digits.
void write_csv(const std::string& path, const MeshGrid& mesh, SpaceForm c);
std::string csv_text(const MeshGrid& mesh, SpaceForm c);

struct LoadedMesh {
  MeshGrid mesh;
  SpaceForm c = SpaceForm::Euclidean;
};

/// Reads a CSV written by write_csv. The space form is inferred from the x4
/// column and the model equation; throws ConfigError on malformed input.
LoadedMesh read_csv(const std::string& path);

/// Triangulated OBJ. c = 0: fiber coordinates with t in a trailing comment.
/// c = +-1: stereographic projection from (-1, 0, 0, 0), noted in the header.
void write_obj(const std::string& path, const MeshGrid& mesh, SpaceForm c);

}  // namespace rwsurf
