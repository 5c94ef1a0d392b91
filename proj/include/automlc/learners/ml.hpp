#ifndef AUTOMLC_LEARNERS_ML_HPP
#define AUTOMLC_LEARNERS_ML_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "automlc/core/matrix.hpp"
#include "automlc/dataset/dataset.hpp"
#include "automlc/learners/sl.hpp"

namespace automlc {

enum class MLAlgo {
    // base strategies
    BR,
    CC,
    LC,
    PS,
    RAkEL,
    MajorityLabelSet,
    // meta wrappers
    BaggingML,
    EnsembleML,
    RandomSubspaceML,
};

const char* ml_algo_name(MLAlgo a);
std::optional<MLAlgo> ml_algo_from_name(std::string_view name);
bool ml_algo_is_meta(MLAlgo a);

struct MLHyper {
    int ps_p = 2;
    int ps_b = 2;
    int rakel_k = 3;
    int rakel_count = 0;  // 0: ceil(2m/k) at fit time
    int ensemble_members = 10;
    double subsample_fraction = 0.67;  // EnsembleML, without replacement
    double subspace_fraction = 0.5;    // RandomSubspaceML
};

/// A fully resolved multi-label strategy. Meta wrappers carry one ml_child;
/// base strategies (except MajorityLabelSet) carry one sl_child.
struct MLSpec {
    MLAlgo algo = MLAlgo::MajorityLabelSet;
    MLHyper hyper;
    std::vector<MLSpec> ml_child;
    std::vector<SLSpec> sl_child;

    static MLSpec majority() { return MLSpec{}; }
    static MLSpec base(MLAlgo a, SLSpec sl) {
        MLSpec s;
        s.algo = a;
        s.sl_child.push_back(std::move(sl));
        return s;
    }
    static MLSpec meta(MLAlgo a, MLSpec inner) {
        MLSpec s;
        s.algo = a;
        s.ml_child.push_back(std::move(inner));
        return s;
    }
};

void validate_spec(const MLSpec& spec);

/// Encoded training data for the multi-label layer.
struct MLDataset {
    Matrix features;
    BinaryMatrix labels;
};

struct MLPrediction {
    BinaryMatrix labels;  // thresholded at 0.5 (argmax-decoded for LC/PS)
    Matrix scores;        // entries in [0,1]
};

class MLModel {
  public:
    struct Impl {
        virtual ~Impl() = default;
        virtual MLPrediction predict(const Matrix& X) const = 0;
        std::size_t label_count = 0;
        std::size_t feature_count = 0;
    };

    MLModel() = default;
    explicit MLModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    std::size_t label_count() const { return impl_->label_count; }
    MLPrediction predict(const Matrix& X) const;

  private:
    std::shared_ptr<const Impl> impl_;
};

MLModel fit_multi_label(const MLSpec& spec, const MLDataset& data, std::uint64_t seed);
/// Encodes the dataset's features first, then fits.
MLModel fit_multi_label(const MLSpec& spec, const LabeledDataset& data, std::uint64_t seed);
MLPrediction predict_multi_label(const MLModel& model, const Matrix& X);

// ---------------------------------------------------------------------------
// Label powerset machinery

struct UnknownClassId : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Bijection between observed label bit patterns and dense class ids
/// (first-appearance order).
struct LPCodebook {
    std::size_t label_count = 0;
    std::vector<std::vector<std::uint8_t>> patterns;       // id -> pattern
    std::map<std::vector<std::uint8_t>, int> pattern_ids;  // pattern -> id

    int size() const { return static_cast<int>(patterns.size()); }
};

std::pair<std::vector<int>, LPCodebook> label_powerset_encode(const BinaryMatrix& labels);
BinaryMatrix label_powerset_decode(const std::vector<int>& ids, const LPCodebook& codebook);

/// One training instance after pruning: the original row and the label
/// vector it contributes.
struct PrunedInstance {
    int row = 0;
    std::vector<std::uint8_t> labels;
};

/// Keeps vectors occurring at least p times; rare vectors are re-expressed
/// as up to b of their most frequent strict sub-vectors (ties broken by
/// larger cardinality, then lexicographically smaller). Instances with no
/// frequent sub-vector are dropped.
std::vector<PrunedInstance> prune_label_sets(const BinaryMatrix& labels, int p, int b);

struct InvalidK : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// `count` k-subsets of 0..m-1, each sorted, drawn uniformly; redraws until
/// every label is covered (at most 100 attempts), then patches uncovered
/// labels into the last subsets deterministically.
std::vector<std::vector<int>> draw_label_subsets(int m, int k, int count, std::uint64_t seed);

}  // namespace automlc

#endif
