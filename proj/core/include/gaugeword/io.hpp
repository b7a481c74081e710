#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gaugeword/eval.hpp"
#include "gaugeword/matcore.hpp"

namespace gaugeword {

// Text vector formats. Both have one "label v1 ... vd" row per item; word2vec
// adds a "count dim" header line. auto_detect treats a first line of exactly
// two integer tokens as that header.
enum class VectorFormat { auto_detect, word2vec, glove };

std::optional<VectorFormat> parse_vector_format(std::string_view name);

struct LabelledRows {
  std::vector<std::string> labels;
  Matrix rows;  // one row per label
  std::size_t duplicates_dropped = 0;
};

// Reads a labelled-row file. With dedupe, later rows repeating an earlier
// label are dropped and counted. Throws IoFailure, MalformedLine (with the
// line number) for rows of the wrong width or unparsable numbers, and
// DimensionMismatch when a word2vec header disagrees with the rows.
LabelledRows read_labelled_rows(const std::string& path, VectorFormat format,
                                bool dedupe);

void write_labelled_rows(const std::vector<std::string>& labels,
                         const Matrix& rows, const std::string& path,
                         VectorFormat format);

struct LoadedEmbedding {
  Embedding embedding;
  std::size_t duplicates_dropped = 0;
};

// Word j of the file becomes column j of V (d x p).
LoadedEmbedding load_embedding_text(const std::string& path,
                                    VectorFormat format = VectorFormat::auto_detect);

// Adds a context factor read from `u_path` (row i of the file is row i of U).
// Throws DimensionMismatch when U and V disagree on d.
LoadedEmbedding load_embedding_pair(const std::string& v_path,
                                    const std::string& u_path,
                                    VectorFormat format = VectorFormat::auto_detect);

// Entries are written with 17 significant digits so a reload is exact.
// Throws InvalidArgument for an empty vocabulary.
void save_embedding_text(const Embedding& emb, const std::string& path,
                         VectorFormat format = VectorFormat::glove);

// Writes U with labels ctx0, ctx1, ... (or the supplied labels).
void save_context_text(const Matrix& u, const std::string& path,
                       VectorFormat format = VectorFormat::glove,
                       const std::vector<std::string>& labels = {});

// Plain numeric CSV, one matrix row per line, no header.
Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(const Matrix& m, const std::string& path);

// Whitespace-separated vector (one or more numbers per line).
Vector read_vector_text(const std::string& path);

}  // namespace gaugeword
