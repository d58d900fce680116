#include "io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>
#include <vector>

namespace clsbm {

namespace {

constexpr char kMatrixMagic[8] = {'C', 'L', 'S', 'B', 'M', 'S', '0', '1'};

std::ofstream open_out(const std::string &path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw IoError("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string &path, bool binary = false) {
  std::ifstream f(path, binary ? std::ios::binary : std::ios::in);
  if (!f) throw IoError("cannot open for reading: " + path);
  return f;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split_csv(const std::string &line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

long parse_long(const std::string &s, const std::string &path) {
  long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError("bad integer '" + s + "' in " + path);
  return v;
}

double parse_double(const std::string &s, const std::string &path) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw IoError("bad number '" + s + "' in " + path);
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_graph_csv(const LabeledGraph &graph, const std::string &path) {
  auto f = open_out(path);
  f << "i,j,label\n";
  const int n = graph.n();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (graph.labels(i, j) != 0)
        f << i + 1 << ',' << j + 1 << ',' << graph.labels(i, j) << '\n';
  if (!f) throw IoError("write failed: " + path);
}

LabeledGraph read_graph_csv(const std::string &path, int n) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || strip_cr(line) != "i,j,label")
    throw IoError("graph file missing 'i,j,label' header: " + path);

  struct Edge {
    int i, j, label;
  };
  std::vector<Edge> edges;
  int max_index = 0, max_label = 0;
  while (std::getline(f, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3) throw IoError("graph row needs 3 fields: " + path);
    const int i = static_cast<int>(parse_long(fields[0], path));
    const int j = static_cast<int>(parse_long(fields[1], path));
    const int l = static_cast<int>(parse_long(fields[2], path));
    if (i < 1 || j < 1 || i == j) throw IoError("bad node pair in " + path);
    if (l < 0) throw IoError("negative label in " + path);
    if (l == 0) continue;  // absence means label 0 anyway
    edges.push_back({std::min(i, j) - 1, std::max(i, j) - 1, l});
    max_index = std::max({max_index, i, j});
    max_label = std::max(max_label, l);
  }
  const int size = n >= 0 ? n : max_index;
  if (max_index > size)
    throw IoError("node index " + std::to_string(max_index) + " exceeds n=" +
                  std::to_string(size) + " in " + path);
  LabeledGraph g;
  g.L = max_label;
  g.labels = Eigen::MatrixXi::Zero(size, size);
  for (const auto &e : edges) {
    if (g.labels(e.i, e.j) != 0)
      throw IoError("duplicate pair (" + std::to_string(e.i + 1) + "," +
                    std::to_string(e.j + 1) + ") in " + path);
    g.labels(e.i, e.j) = e.label;
    g.labels(e.j, e.i) = e.label;
  }
  return g;
}

void write_attrs_csv(const Eigen::MatrixXd &attrs, const std::string &path) {
  auto f = open_out(path);
  for (int i = 0; i < attrs.cols(); ++i) {
    for (int r = 0; r < attrs.rows(); ++r) {
      if (r) f << ',';
      f << format_double(attrs(r, i));
    }
    f << '\n';
  }
  if (!f) throw IoError("write failed: " + path);
}

Eigen::MatrixXd read_attrs_csv(const std::string &path) {
  auto f = open_in(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(f, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto &s : fields) row.push_back(parse_double(s, path));
    if (!rows.empty() && row.size() != rows.front().size())
      throw IoError("ragged attribute rows in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty attribute file: " + path);
  const int n = static_cast<int>(rows.size());
  const int d = static_cast<int>(rows.front().size());
  Eigen::MatrixXd x(d, n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < d; ++r) x(r, i) = rows[i][r];
  return x;
}

void write_assignment_csv(const CommunityAssignment &assignment,
                          const std::string &path) {
  auto f = open_out(path);
  f << "i,community\n";
  for (size_t i = 0; i < assignment.size(); ++i)
    f << i + 1 << ',' << assignment[i] + 1 << '\n';
  if (!f) throw IoError("write failed: " + path);
}

CommunityAssignment read_assignment_csv(const std::string &path) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line) || strip_cr(line) != "i,community")
    throw IoError("assignment file missing 'i,community' header: " + path);
  std::vector<int> labels;
  std::vector<char> seen;
  while (std::getline(f, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 2) throw IoError("assignment row needs 2 fields: " + path);
    const int i = static_cast<int>(parse_long(fields[0], path));
    const int c = static_cast<int>(parse_long(fields[1], path));
    if (i < 1 || c < 1) throw IoError("assignment entries are 1-indexed: " + path);
    if (static_cast<size_t>(i) > labels.size()) {
      labels.resize(i, -1);
      seen.resize(i, 0);
    }
    if (seen[i - 1]) throw IoError("duplicate node " + std::to_string(i) + " in " + path);
    labels[i - 1] = c - 1;
    seen[i - 1] = 1;
  }
  for (size_t i = 0; i < labels.size(); ++i)
    if (!seen[i])
      throw IoError("missing node " + std::to_string(i + 1) + " in " + path);
  if (labels.empty()) throw IoError("empty assignment file: " + path);
  return labels;
}

void write_matrix_binary(const Eigen::MatrixXd &m, const std::string &path) {
  if (m.rows() != m.cols()) throw ValidationError("binary dump expects a square matrix");
  auto f = open_out(path, true);
  f.write(kMatrixMagic, sizeof(kMatrixMagic));
  const std::uint64_t n = static_cast<std::uint64_t>(m.rows());
  f.write(reinterpret_cast<const char *>(&n), sizeof(n));
  std::vector<double> row(m.cols());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    f.write(reinterpret_cast<const char *>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(double)));
  }
  if (!f) throw IoError("write failed: " + path);
}

Eigen::MatrixXd read_matrix_binary(const std::string &path) {
  auto f = open_in(path, true);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kMatrixMagic, sizeof(magic)) != 0)
    throw IoError("bad matrix dump magic in " + path);
  std::uint64_t n = 0;
  f.read(reinterpret_cast<char *>(&n), sizeof(n));
  if (!f) throw IoError("truncated matrix dump: " + path);
  Eigen::MatrixXd m(n, n);
  std::vector<double> row(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    f.read(reinterpret_cast<char *>(row.data()),
           static_cast<std::streamsize>(n * sizeof(double)));
    if (!f) throw IoError("truncated matrix dump: " + path);
    for (std::uint64_t j = 0; j < n; ++j) m(i, j) = row[j];
  }
  return m;
}

std::string read_text_file(const std::string &path) {
  auto f = open_in(path);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

void write_text_file(const std::string &path, const std::string &content) {
  auto f = open_out(path);
  f << content;
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace clsbm
