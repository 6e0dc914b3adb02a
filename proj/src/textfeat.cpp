#include "litiscope/textfeat.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "litiscope/infogain.hpp"

namespace litiscope {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            current.push_back(static_cast<char>(std::tolower(uc)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

std::vector<std::string> tokenize_ngrams(std::string_view text) {
    const auto tokens = tokenize(text);
    std::vector<std::string> grams;
    const std::size_t n = tokens.size();
    if (n == 0) return grams;
    grams.reserve(3 * n);
    for (std::size_t order = 1; order <= 3; ++order) {
        for (std::size_t i = 0; i + order <= n; ++i) {
            std::string gram = tokens[i];
            for (std::size_t j = 1; j < order; ++j) {
                gram.push_back(' ');
                gram += tokens[i + j];
            }
            grams.push_back(std::move(gram));
        }
    }
    return grams;
}

double Vocabulary::idf(std::size_t column) const {
    return std::log(static_cast<double>(n_docs) / static_cast<double>(doc_freq.at(column)));
}

Vocabulary build_vocabulary(std::span<const std::string> documents, std::size_t min_df) {
    std::unordered_map<std::string, std::size_t> df;
    for (const auto& doc : documents) {
        auto grams = tokenize_ngrams(doc);
        std::sort(grams.begin(), grams.end());
        grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
        for (auto& g : grams) ++df[std::move(g)];
    }
    Vocabulary vocab;
    vocab.n_docs = documents.size();
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (auto& [gram, count] : df)
        if (count >= std::max<std::size_t>(min_df, 1)) kept.emplace_back(gram, count);
    std::sort(kept.begin(), kept.end());
    vocab.grams.reserve(kept.size());
    vocab.doc_freq.reserve(kept.size());
    for (auto& [gram, count] : kept) {
        vocab.index.emplace(gram, vocab.grams.size());
        vocab.grams.push_back(std::move(gram));
        vocab.doc_freq.push_back(count);
    }
    return vocab;
}

namespace {

std::vector<std::string> claim_texts(const Corpus& corpus) {
    std::vector<std::string> docs;
    docs.reserve(corpus.size());
    for (const auto& r : corpus.records) docs.push_back(r.claims_text);
    return docs;
}

} // namespace

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_df) {
    const auto docs = claim_texts(corpus);
    return build_vocabulary(docs, min_df);
}

double DocTermMatrix::value(std::size_t row, std::size_t column) const {
    const auto& entries = rows.at(row);
    const auto it = std::lower_bound(entries.begin(), entries.end(), column,
                                     [](const auto& e, std::size_t c) { return e.first < c; });
    return (it != entries.end() && it->first == column) ? it->second : 0.0;
}

DocTermMatrix tfidf_matrix(std::span<const std::string> documents, const Vocabulary& vocab) {
    DocTermMatrix m;
    m.columns = vocab.grams;
    m.idf.resize(vocab.size());
    for (std::size_t c = 0; c < vocab.size(); ++c) m.idf[c] = vocab.idf(c);
    m.rows.resize(documents.size());
    for (std::size_t d = 0; d < documents.size(); ++d) {
        std::vector<std::size_t> cols;
        for (const auto& g : tokenize_ngrams(documents[d])) {
            const auto it = vocab.index.find(g);
            if (it != vocab.index.end()) cols.push_back(it->second);
        }
        std::sort(cols.begin(), cols.end());
        auto& row = m.rows[d];
        for (std::size_t i = 0; i < cols.size();) {
            std::size_t j = i;
            while (j < cols.size() && cols[j] == cols[i]) ++j;
            row.emplace_back(cols[i], static_cast<double>(j - i) * m.idf[cols[i]]);
            i = j;
        }
    }
    return m;
}

DocTermMatrix tfidf_matrix(const Corpus& corpus, const Vocabulary& vocab) {
    const auto docs = claim_texts(corpus);
    return tfidf_matrix(docs, vocab);
}

TextFeatureSet select_top_textual(const DocTermMatrix& matrix, const std::vector<bool>& labels,
                                  std::size_t k) {
    if (labels.size() != matrix.n_rows())
        throw std::invalid_argument("select_top_textual: label count differs from row count");
    if (k == 0) throw std::invalid_argument("select_top_textual: k must be at least 1");

    std::size_t total_pos = 0;
    for (bool y : labels) total_pos += y ? 1 : 0;
    const std::size_t total_neg = labels.size() - total_pos;

    // Presence counts: a stored entry means the gram occurs in the document.
    std::vector<std::size_t> present_pos(matrix.n_cols(), 0), present_neg(matrix.n_cols(), 0);
    for (std::size_t d = 0; d < matrix.n_rows(); ++d) {
        auto& counts = labels[d] ? present_pos : present_neg;
        for (const auto& [col, value] : matrix.rows[d]) ++counts[col];
    }

    std::vector<std::pair<double, std::size_t>> scored(matrix.n_cols());
    for (std::size_t c = 0; c < matrix.n_cols(); ++c)
        scored[c] = {presence_information_gain(present_pos[c], present_neg[c], total_pos, total_neg), c};

    const std::size_t take = std::min(k, scored.size());
    auto better = [&](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return matrix.columns[a.second] < matrix.columns[b.second];
    };
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(), better);

    TextFeatureSet set;
    set.degenerate = total_pos == 0 || total_neg == 0;
    for (std::size_t i = 0; i < take; ++i) {
        const auto c = scored[i].second;
        set.grams.push_back({matrix.columns[c], matrix.idf[c], scored[i].first});
    }
    return set;
}

} // namespace litiscope
