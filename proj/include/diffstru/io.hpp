#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "diffstru/sampler.hpp"
#include "diffstru/types.hpp"

namespace diffstru::io {

namespace fs = std::filesystem;

// Edge list: one "src<TAB>dst" pair per line, zero-based ids.
void write_edge_list(const fs::path& path, const IntMatrix& adjacency);
IntMatrix read_edge_list(const fs::path& path, int n_nodes);

// Cascade file: header "cascade_id<TAB>node_id<TAB>time", one observed
// infection per line. Times printed with round-trip precision.
void write_cascades(const fs::path& path, const CascadeSet& cascades);
CascadeSet read_cascades(const fs::path& path, int n_nodes, int n_cascades,
                         double window);

// Dense real matrix as TSV, round-trip exact.
void write_matrix(const fs::path& path, const Matrix& m);
Matrix read_matrix(const fs::path& path);
void write_matrix(const fs::path& path, const IntMatrix& m);

// Flat key=value manifest with repeatable keys, order preserving.
using Manifest = std::vector<std::pair<std::string, std::string>>;
void write_manifest(const fs::path& path, const Manifest& manifest);
Manifest read_manifest(const fs::path& path);
std::string manifest_get(const Manifest& m, const std::string& key);
std::vector<std::string> manifest_get_all(const Manifest& m,
                                          const std::string& key);

// Sampler checkpoint as a TSV bundle under a directory.
void write_checkpoint(const fs::path& dir, const Checkpoint& ck);
Checkpoint read_checkpoint(const fs::path& dir);

void write_trace(const fs::path& path, const std::vector<TraceRow>& trace);

std::string format_double(double v);  // round-trip "%.17g"

}  // namespace diffstru::io
