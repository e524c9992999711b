#include "diffstru/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace diffstru::io {

namespace {

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  return in;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, '\t')) fields.push_back(field);
  return fields;
}

double parse_double(const std::string& s, const fs::path& path) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("bad numeric field '" + s + "' in " + path.string());
  }
}

int parse_int(const std::string& s, const fs::path& path) {
  try {
    size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw DataError("bad integer field '" + s + "' in " + path.string());
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_edge_list(const fs::path& path, const IntMatrix& adjacency) {
  auto out = open_out(path);
  for (long i = 0; i < adjacency.rows(); ++i)
    for (long j = 0; j < adjacency.cols(); ++j)
      if (adjacency(i, j)) out << i << '\t' << j << '\n';
}

IntMatrix read_edge_list(const fs::path& path, int n_nodes) {
  auto in = open_in(path);
  IntMatrix adj = IntMatrix::Zero(n_nodes, n_nodes);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 2)
      throw DataError("edge line '" + line + "' in " + path.string());
    const int src = parse_int(f[0], path);
    const int dst = parse_int(f[1], path);
    if (src < 0 || src >= n_nodes || dst < 0 || dst >= n_nodes)
      throw DataError("edge (" + f[0] + "," + f[1] + ") out of range in " +
                      path.string());
    adj(src, dst) = 1;
  }
  return adj;
}

void write_cascades(const fs::path& path, const CascadeSet& cascades) {
  auto out = open_out(path);
  out << "cascade_id\tnode_id\ttime\n";
  for (int c = 0; c < cascades.n_cascades; ++c)
    for (int i = 0; i < cascades.n_nodes; ++i)
      if (cascades.is_observed(i, c))
        out << c << '\t' << i << '\t' << format_double(cascades.times(i, c))
            << '\n';
}

CascadeSet read_cascades(const fs::path& path, int n_nodes, int n_cascades,
                         double window) {
  auto in = open_in(path);
  CascadeSet cs = CascadeSet::empty(n_nodes, n_cascades, window);
  std::string line;
  if (!std::getline(in, line) || line != "cascade_id\tnode_id\ttime")
    throw DataError("missing cascade header in " + path.string());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 3)
      throw DataError("cascade line '" + line + "' in " + path.string());
    const int c = parse_int(f[0], path);
    const int node = parse_int(f[1], path);
    if (c < 0 || c >= n_cascades || node < 0 || node >= n_nodes)
      throw DataError("cascade cell (" + f[1] + "," + f[0] +
                      ") out of range in " + path.string());
    cs.set(node, c, parse_double(f[2], path));
  }
  cs.validate();
  return cs;
}

void write_matrix(const fs::path& path, const Matrix& m) {
  auto out = open_out(path);
  for (long i = 0; i < m.rows(); ++i) {
    for (long j = 0; j < m.cols(); ++j) {
      if (j) out << '\t';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix(const fs::path& path, const IntMatrix& m) {
  write_matrix(path, Matrix(m.cast<double>()));
}

Matrix read_matrix(const fs::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    std::vector<double> row;
    row.reserve(f.size());
    for (const auto& s : f) row.push_back(parse_double(s, path));
    if (!rows.empty() && rows.front().size() != row.size())
      throw DataError("ragged matrix rows in " + path.string());
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw DataError("empty matrix file " + path.string());
  Matrix m(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_manifest(const fs::path& path, const Manifest& manifest) {
  auto out = open_out(path);
  for (const auto& [k, v] : manifest) out << k << " = " << v << '\n';
}

Manifest read_manifest(const fs::path& path) {
  auto in = open_in(path);
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos)
      throw DataError("bad manifest line '" + line + "' in " + path.string());
    m.emplace_back(line.substr(0, eq), line.substr(eq + 3));
  }
  return m;
}

std::string manifest_get(const Manifest& m, const std::string& key) {
  for (const auto& [k, v] : m)
    if (k == key) return v;
  throw DataError("manifest key '" + key + "' not found");
}

std::vector<std::string> manifest_get_all(const Manifest& m,
                                          const std::string& key) {
  std::vector<std::string> out;
  for (const auto& [k, v] : m)
    if (k == key) out.push_back(v);
  return out;
}

void write_trace(const fs::path& path, const std::vector<TraceRow>& trace) {
  auto out = open_out(path);
  out << "iteration\tresid_C\tresid_R\tsum_xi\tbeta_a\tbeta_b\tmu_xi\n";
  for (const auto& r : trace)
    out << r.iteration << '\t' << format_double(r.resid_C) << '\t'
        << format_double(r.resid_R) << '\t' << r.sum_xi << '\t'
        << format_double(r.beta_a) << '\t' << format_double(r.beta_b) << '\t'
        << format_double(r.mu_xi) << '\n';
}

void write_checkpoint(const fs::path& dir, const Checkpoint& ck) {
  fs::create_directories(dir);
  Manifest meta;
  meta.emplace_back("completed_iterations",
                    std::to_string(ck.completed_iterations));
  meta.emplace_back("n_retained", std::to_string(ck.n_retained));
  meta.emplace_back("mu_xi", format_double(ck.state.mu_xi));
  write_manifest(dir / "meta.txt", meta);
  write_matrix(dir / "X.tsv", ck.state.X);
  write_matrix(dir / "Y.tsv", ck.state.Y);
  write_matrix(dir / "U.tsv", ck.state.U);
  write_matrix(dir / "R.tsv", ck.state.R);
  write_matrix(dir / "Lambda.tsv", ck.state.Lambda);
  write_matrix(dir / "Xi.tsv", ck.state.Xi);
  write_matrix(dir / "sum_X.tsv", ck.sum_X);
  write_matrix(dir / "sum_Y.tsv", ck.sum_Y);
  write_matrix(dir / "sum_U.tsv", ck.sum_U);
  write_matrix(dir / "sum_Xi.tsv", ck.sum_Xi);
  write_trace(dir / "trace.tsv", ck.trace);
}

namespace {

std::vector<TraceRow> read_trace(const fs::path& path) {
  auto in = open_in(path);
  std::vector<TraceRow> trace;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 7) throw DataError("bad trace row in " + path.string());
    TraceRow r;
    r.iteration = parse_int(f[0], path);
    r.resid_C = parse_double(f[1], path);
    r.resid_R = parse_double(f[2], path);
    r.sum_xi = std::stoll(f[3]);
    r.beta_a = parse_double(f[4], path);
    r.beta_b = parse_double(f[5], path);
    r.mu_xi = parse_double(f[6], path);
    trace.push_back(r);
  }
  return trace;
}

}  // namespace

Checkpoint read_checkpoint(const fs::path& dir) {
  Checkpoint ck;
  const auto meta = read_manifest(dir / "meta.txt");
  ck.completed_iterations =
      std::stoi(manifest_get(meta, "completed_iterations"));
  ck.n_retained = std::stoi(manifest_get(meta, "n_retained"));
  ck.state.mu_xi = std::stod(manifest_get(meta, "mu_xi"));
  ck.state.X = read_matrix(dir / "X.tsv");
  ck.state.Y = read_matrix(dir / "Y.tsv");
  ck.state.U = read_matrix(dir / "U.tsv");
  ck.state.R = read_matrix(dir / "R.tsv");
  ck.state.Lambda = read_matrix(dir / "Lambda.tsv");
  ck.state.Xi = read_matrix(dir / "Xi.tsv").cast<int>();
  ck.sum_X = read_matrix(dir / "sum_X.tsv");
  ck.sum_Y = read_matrix(dir / "sum_Y.tsv");
  ck.sum_U = read_matrix(dir / "sum_U.tsv");
  ck.sum_Xi = read_matrix(dir / "sum_Xi.tsv");
  ck.trace = read_trace(dir / "trace.tsv");
  return ck;
}

}  // namespace diffstru::io
