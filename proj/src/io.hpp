#pragma once

#include <Eigen/Core>
#include <string>

#include "sampler.hpp"

namespace clsbm {

// Graph file: header "i,j,label", 1-indexed upper triangle (i<j) only, zero
// labels omitted (absence means label 0).
void write_graph_csv(const LabeledGraph &graph, const std::string &path);

// n < 0 infers the node count from the largest index present.
LabeledGraph read_graph_csv(const std::string &path, int n = -1);

// Attributes file: row i = node i, d comma-separated reals, no header.
void write_attrs_csv(const Eigen::MatrixXd &attrs, const std::string &path);
Eigen::MatrixXd read_attrs_csv(const std::string &path);

// Assignment/truth file: header "i,community", both 1-indexed.
void write_assignment_csv(const CommunityAssignment &assignment,
                          const std::string &path);
CommunityAssignment read_assignment_csv(const std::string &path);

// Debug dump of a square matrix: 16-byte header (8-byte magic "CLSBMS01",
// little-endian uint64 n) then n*n row-major float64. Not a stable format.
void write_matrix_binary(const Eigen::MatrixXd &m, const std::string &path);
Eigen::MatrixXd read_matrix_binary(const std::string &path);

std::string read_text_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &content);

// Shortest round-trip decimal formatting used by all emitters.
std::string format_double(double v);

}  // namespace clsbm
