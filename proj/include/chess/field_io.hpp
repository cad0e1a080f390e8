#pragma once

// Field files: a JSON sidecar describing the grid plus a raw payload of
// N^{2n} little-endian IEEE-754 doubles in row-major axis order. The payload
// path is the sidecar path with its extension replaced by ".f64".

#include <filesystem>

#include "chess/grid.hpp"

namespace chess {

std::filesystem::path payload_path(const std::filesystem::path& sidecar);

/// Writes sidecar and payload. Throws IoError on failure.
void write_field(const std::filesystem::path& sidecar, const Field& f);

/// Throws IoError for unreadable files and ValidationError for a sidecar
/// that does not describe a chess-field v1 f64 little-endian row-major grid.
Field read_field(const std::filesystem::path& sidecar);

}  // namespace chess
