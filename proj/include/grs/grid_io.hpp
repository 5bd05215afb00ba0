#pragma once

#include <filesystem>

#include "grs/level_set.hpp"

namespace grs {

/// Binary value-function dump. One ASCII header line
///   GRSGRID 1 dim=<n> lower=<l1,..> upper=<u1,..> counts=<c1,..> time=<t>
/// terminated by '\n', then grid.size() little-endian IEEE-754 float64 values
/// in row-major order (last axis fastest). Numbers in the header use the
/// shortest round-trip decimal form.
void write_grid_dump(const std::filesystem::path& path,
                     const LevelSetField& field);

/// Throws InvalidArgument on a malformed header or truncated payload.
LevelSetField read_grid_dump(const std::filesystem::path& path);

}  // namespace grs
