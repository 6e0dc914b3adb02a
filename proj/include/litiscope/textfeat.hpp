#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "litiscope/corpus.hpp"

namespace litiscope {

/// Lowercased alphanumeric tokens; every other character separates tokens.
std::vector<std::string> tokenize(std::string_view text);

/// All contiguous 1-, 2- and 3-grams of the tokens: unigrams first, then bigrams,
/// then trigrams, each group in text order. Grams are space-joined.
std::vector<std::string> tokenize_ngrams(std::string_view text);

struct Vocabulary {
    std::vector<std::string> grams;
    std::vector<std::size_t> doc_freq;
    std::size_t n_docs = 0;
    std::unordered_map<std::string, std::size_t> index;

    std::size_t size() const noexcept { return grams.size(); }
    double idf(std::size_t column) const;
};

/// Builds the vocabulary over the given documents, keeping grams with document
/// frequency >= min_df. Grams are ordered lexicographically.
Vocabulary build_vocabulary(std::span<const std::string> documents, std::size_t min_df = 2);
Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_df = 2);

/// Sparse tf-idf matrix: row entries are (column, value) pairs sorted by column, with
/// only nonzero-count grams stored.
struct DocTermMatrix {
    std::vector<std::vector<std::pair<std::size_t, double>>> rows;
    std::vector<std::string> columns;
    std::vector<double> idf;

    std::size_t n_rows() const noexcept { return rows.size(); }
    std::size_t n_cols() const noexcept { return columns.size(); }
    double value(std::size_t row, std::size_t column) const;
};

/// value(d, g) = count of g in d times ln(n_docs / df(g)); grams outside the vocabulary are ignored.
DocTermMatrix tfidf_matrix(std::span<const std::string> documents, const Vocabulary& vocab);
DocTermMatrix tfidf_matrix(const Corpus& corpus, const Vocabulary& vocab);

struct SelectedGram {
    std::string gram;
    double idf = 0.0;
    double information_gain = 0.0;

    bool operator==(const SelectedGram&) const = default;
};

struct TextFeatureSet {
    std::vector<SelectedGram> grams;
    /// Set when the labels held a single class, so every gain was zero.
    bool degenerate = false;
};

/// Top-k grams by information gain of gram presence; ties go to the lexicographically
/// smaller gram.
TextFeatureSet select_top_textual(const DocTermMatrix& matrix, const std::vector<bool>& labels,
                                  std::size_t k);

} // namespace litiscope
