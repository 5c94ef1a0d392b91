#ifndef AUTOMLC_DATASET_DATASET_HPP
#define AUTOMLC_DATASET_DATASET_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "automlc/core/matrix.hpp"

namespace automlc {

enum class AttrKind { Numeric, Nominal };

struct AttributeSpec {
    std::string name;
    AttrKind kind = AttrKind::Numeric;
    std::vector<std::string> categories;  // nominal only, in declaration order
};

/// A parsed multi-label dataset. Label columns live in `labels`; the feature
/// block keeps raw values: numeric as-is, nominals as category indices, and
/// missing entries as NaN (see is_missing).
struct LabeledDataset {
    std::string relation_name;  // relation name with the label-count option stripped
    std::vector<AttributeSpec> attributes;
    std::vector<std::string> label_names;
    Matrix features;      // n x d
    BinaryMatrix labels;  // n x m

    std::size_t n() const { return features.rows; }
    std::size_t d() const { return attributes.size(); }
    std::size_t m() const { return label_names.size(); }
};

bool datasets_equal(const LabeledDataset& a, const LabeledDataset& b);

struct ArffError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct MissingLabelCount : ArffError {
    using ArffError::ArffError;
};
struct NonBinaryLabel : ArffError {
    using ArffError::ArffError;
};
struct MalformedRow : ArffError {
    using ArffError::ArffError;
};
struct UnknownCategory : ArffError {
    using ArffError::ArffError;
};
struct UnsupportedAttributeType : ArffError {
    using ArffError::ArffError;
};

/// Parses an ARFF document whose @relation name carries "-C <int>".
/// A positive count marks the first attributes as labels, a negative count
/// the last ones. Label attributes must be nominal over {0,1}. Dense and
/// sparse data rows are accepted.
LabeledDataset parse_arff(std::istream& in);
LabeledDataset parse_arff_text(std::string_view text);
LabeledDataset parse_arff_file(const std::string& path);

/// Dense ARFF text for the dataset, labels first, relation option "-C m".
/// parse_arff(write_arff(ds)) reproduces ds exactly.
std::string write_arff(const LabeledDataset& ds);

/// Numeric n x d' design matrix: numeric attributes pass through, nominals
/// are one-hot expanded, missing numerics take the column mean over the
/// non-missing entries (0 if none), missing nominals become all-zero blocks.
Matrix encode_features(const LabeledDataset& ds);

struct SplitPair {
    std::vector<int> train_indices;
    std::vector<int> test_indices;
};

struct DegenerateSplit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Seeded uniform shuffle of 0..n-1; the first ceil(fraction*n) indices form
/// the train side. Deterministic in (n, fraction, seed).
SplitPair random_split(std::size_t n, double fraction, std::uint64_t seed);

}  // namespace automlc

#endif
