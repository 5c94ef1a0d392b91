#ifndef AUTOMLC_LEARNERS_SL_HPP
#define AUTOMLC_LEARNERS_SL_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "automlc/core/matrix.hpp"

namespace automlc {

struct UnsupportedSpec : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SLAlgo {
    ZeroR,
    DecisionStump,
    DecisionTree,
    NaiveBayes,
    Logistic,
    KNN,
    Bagging,
    AdaBoostM1,
    RandomSubspace,
};

const char* sl_algo_name(SLAlgo a);
std::optional<SLAlgo> sl_algo_from_name(std::string_view name);
bool sl_algo_is_meta(SLAlgo a);

/// Fixed hyperparameters. The component space always uses these defaults;
/// tests may override individual knobs.
struct SLHyper {
    int knn_k = 5;
    int tree_max_depth = 20;
    int tree_min_leaf = 2;
    int logistic_epochs = 200;
    double logistic_rate = 0.1;
    double logistic_l2 = 1e-4;
    int ensemble_members = 10;
    int boost_rounds = 10;
    double subspace_fraction = 0.5;
    bool bagging_bootstrap = true;  // false trains each member on the full sample
};

struct SLSpec {
    SLAlgo algo = SLAlgo::ZeroR;
    SLHyper hyper;
    std::vector<SLSpec> base;  // exactly one entry for meta algorithms

    static SLSpec make(SLAlgo a) { return SLSpec{a, SLHyper{}, {}}; }
    static SLSpec meta(SLAlgo a, SLSpec inner) {
        SLSpec s{a, SLHyper{}, {}};
        s.base.push_back(std::move(inner));
        return s;
    }
};

/// Throws UnsupportedSpec on malformed nesting (meta without base, base with
/// base, or meta wrapping meta).
void validate_spec(const SLSpec& spec);

struct SLDataset {
    Matrix features;           // n x d
    std::vector<int> targets;  // class ids in 0..class_count-1
    int class_count = 0;
};

class SLModel {
  public:
    struct Impl {
        virtual ~Impl() = default;
        virtual Matrix scores(const Matrix& X) const = 0;  // n x c, rows sum to 1
        int class_count = 0;
        std::size_t feature_count = 0;
    };

    SLModel() = default;
    explicit SLModel(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

    int class_count() const { return impl_->class_count; }
    std::size_t feature_count() const { return impl_->feature_count; }
    Matrix class_scores(const Matrix& X) const;
    std::vector<int> predict(const Matrix& X) const;

  private:
    std::shared_ptr<const Impl> impl_;
};

/// Deterministic in (spec, data, seed). Degenerate data (single class,
/// constant features) falls back to majority-class behavior instead of
/// raising.
SLModel fit_single_label(const SLSpec& spec, const SLDataset& data, std::uint64_t seed);

/// Argmax of the score rows, ties toward the smaller class id.
std::vector<int> predict_single_label(const SLModel& model, const Matrix& X);

/// Score rows are nonnegative and sum to 1 within 1e-9.
Matrix predict_class_scores(const SLModel& model, const Matrix& X);

/// n uniform draws with replacement from 0..n-1.
std::vector<int> bootstrap_indices(std::size_t n, std::uint64_t seed);

/// Negative mean log-likelihood plus L2 (bias column excluded) of a
/// multinomial logistic model, and its gradient. Weights are (d+1) x c
/// row-major with the bias in the last row. Exposed for gradient checks.
double logistic_loss_grad(const std::vector<double>& weights, const Matrix& X, const std::vector<int>& targets,
                          int class_count, double l2, std::vector<double>* grad_out);

}  // namespace automlc

#endif
