#include "automlc/learners/sl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "automlc/core/parallel.hpp"
#include "automlc/core/rng.hpp"

namespace automlc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> class_frequencies(const std::vector<int>& targets, int c) {
    std::vector<double> f(static_cast<std::size_t>(c), 0.0);
    for (int t : targets) f[static_cast<std::size_t>(t)] += 1.0;
    if (!targets.empty())
        for (double& x : f) x /= static_cast<double>(targets.size());
    return f;
}

int argmax_row(const double* row, int c) {
    int best = 0;
    for (int j = 1; j < c; ++j)
        if (row[j] > row[best]) best = j;
    return best;
}

void check_features(std::size_t expected, std::size_t got) {
    if (expected != got)
        throw ShapeMismatch("model expects " + std::to_string(expected) + " features, got " + std::to_string(got));
}

// ---------------------------------------------------------------------------
// ZeroR

struct ZeroRImpl final : SLModel::Impl {
    std::vector<double> freqs;
    Matrix scores(const Matrix& X) const override {
        Matrix out(X.rows, freqs.size());
        for (std::size_t i = 0; i < X.rows; ++i)
            for (std::size_t j = 0; j < freqs.size(); ++j) out.at(i, j) = freqs[j];
        return out;
    }
};

SLModel fit_zero_r(const SLDataset& data) {
    auto impl = std::make_shared<ZeroRImpl>();
    impl->class_count = data.class_count;
    impl->feature_count = data.features.cols;
    impl->freqs = class_frequencies(data.targets, data.class_count);
    return SLModel(impl);
}

// ---------------------------------------------------------------------------
// CART trees (the stump is a depth-1 tree with min leaf 1)

struct TreeNode {
    int feature = -1;  // -1: leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> leaf_scores;
};

struct TreeImpl final : SLModel::Impl {
    std::vector<TreeNode> nodes;

    Matrix scores(const Matrix& X) const override {
        Matrix out(X.rows, static_cast<std::size_t>(class_count));
        parallel_for(X.rows, [&](std::size_t i) {
            const double* row = X.row(i);
            int cur = 0;
            while (nodes[static_cast<std::size_t>(cur)].feature >= 0) {
                const TreeNode& nd = nodes[static_cast<std::size_t>(cur)];
                cur = row[nd.feature] <= nd.threshold ? nd.left : nd.right;
            }
            const std::vector<double>& s = nodes[static_cast<std::size_t>(cur)].leaf_scores;
            for (int j = 0; j < class_count; ++j) out.at(i, static_cast<std::size_t>(j)) = s[static_cast<std::size_t>(j)];
        });
        return out;
    }
};

double gini_of_counts(const std::vector<double>& counts, double total) {
    if (total <= 0.0) return 0.0;
    double s = 0.0;
    for (double c : counts) {
        const double p = c / total;
        s += p * p;
    }
    return 1.0 - s;
}

struct SplitChoice {
    double impurity = kInf;  // weighted child impurity
    double threshold = 0.0;
    bool valid = false;
};

// Best threshold for one feature; candidates are midpoints of consecutive
// distinct values, both children at least min_leaf strong.
SplitChoice best_split_for_feature(const Matrix& X, const std::vector<int>& targets, const std::vector<int>& idx,
                                   int feature, int c, int min_leaf) {
    const std::size_t n = idx.size();
    std::vector<std::pair<double, int>> vals(n);  // (value, target)
    for (std::size_t i = 0; i < n; ++i)
        vals[i] = {X.at(static_cast<std::size_t>(idx[i]), static_cast<std::size_t>(feature)), targets[static_cast<std::size_t>(idx[i])]};
    std::sort(vals.begin(), vals.end());

    std::vector<double> left(static_cast<std::size_t>(c), 0.0), right(static_cast<std::size_t>(c), 0.0);
    for (const auto& [v, t] : vals) right[static_cast<std::size_t>(t)] += 1.0;

    SplitChoice best;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const int t = vals[i].second;
        left[static_cast<std::size_t>(t)] += 1.0;
        right[static_cast<std::size_t>(t)] -= 1.0;
        if (vals[i].first == vals[i + 1].first) continue;
        const auto nl = static_cast<double>(i + 1);
        const auto nr = static_cast<double>(n - i - 1);
        if (nl < min_leaf || nr < min_leaf) continue;
        const double imp = (nl * gini_of_counts(left, nl) + nr * gini_of_counts(right, nr)) / static_cast<double>(n);
        if (imp < best.impurity) {
            best.impurity = imp;
            best.threshold = 0.5 * (vals[i].first + vals[i + 1].first);
            best.valid = true;
        }
    }
    return best;
}

int build_tree(std::vector<TreeNode>& nodes, const Matrix& X, const std::vector<int>& targets,
               const std::vector<int>& idx, int c, int depth, int max_depth, int min_leaf) {
    std::vector<double> counts(static_cast<std::size_t>(c), 0.0);
    for (int i : idx) counts[static_cast<std::size_t>(targets[static_cast<std::size_t>(i)])] += 1.0;
    const auto n = static_cast<double>(idx.size());
    const double node_gini = gini_of_counts(counts, n);

    auto make_leaf = [&]() {
        TreeNode leaf;
        leaf.leaf_scores.resize(static_cast<std::size_t>(c));
        for (int j = 0; j < c; ++j) leaf.leaf_scores[static_cast<std::size_t>(j)] = counts[static_cast<std::size_t>(j)] / n;
        nodes.push_back(std::move(leaf));
        return static_cast<int>(nodes.size() - 1);
    };

    if (depth >= max_depth || idx.size() < 2 * static_cast<std::size_t>(min_leaf) || node_gini <= 0.0) return make_leaf();

    const std::size_t d = X.cols;
    std::vector<SplitChoice> per_feature(d);
    parallel_for(d, [&](std::size_t f) {
        per_feature[f] = best_split_for_feature(X, targets, idx, static_cast<int>(f), c, min_leaf);
    });
    int best_f = -1;
    for (std::size_t f = 0; f < d; ++f) {
        if (!per_feature[f].valid) continue;
        if (best_f < 0 || per_feature[f].impurity < per_feature[static_cast<std::size_t>(best_f)].impurity)
            best_f = static_cast<int>(f);
    }
    if (best_f < 0 || per_feature[static_cast<std::size_t>(best_f)].impurity >= node_gini - 1e-12) return make_leaf();

    const double thr = per_feature[static_cast<std::size_t>(best_f)].threshold;
    std::vector<int> li, ri;
    for (int i : idx)
        (X.at(static_cast<std::size_t>(i), static_cast<std::size_t>(best_f)) <= thr ? li : ri).push_back(i);

    TreeNode node;
    node.feature = best_f;
    node.threshold = thr;
    nodes.push_back(node);
    const int self = static_cast<int>(nodes.size() - 1);
    const int l = build_tree(nodes, X, targets, li, c, depth + 1, max_depth, min_leaf);
    const int r = build_tree(nodes, X, targets, ri, c, depth + 1, max_depth, min_leaf);
    nodes[static_cast<std::size_t>(self)].left = l;
    nodes[static_cast<std::size_t>(self)].right = r;
    return self;
}

SLModel fit_tree(const SLDataset& data, int max_depth, int min_leaf) {
    auto impl = std::make_shared<TreeImpl>();
    impl->class_count = data.class_count;
    impl->feature_count = data.features.cols;
    std::vector<int> idx(data.targets.size());
    std::iota(idx.begin(), idx.end(), 0);
    build_tree(impl->nodes, data.features, data.targets, idx, data.class_count, 0, max_depth, min_leaf);
    return SLModel(impl);
}

// ---------------------------------------------------------------------------
// Gaussian naive Bayes

struct NaiveBayesImpl final : SLModel::Impl {
    std::vector<double> log_prior;  // -inf for unobserved classes
    Matrix means;                   // c x d
    Matrix vars;                    // c x d

    Matrix scores(const Matrix& X) const override {
        const auto c = static_cast<std::size_t>(class_count);
        Matrix out(X.rows, c);
        parallel_for(X.rows, [&](std::size_t i) {
            std::vector<double> logp(c, -kInf);
            double mx = -kInf;
            for (std::size_t k = 0; k < c; ++k) {
                if (log_prior[k] == -kInf) continue;
                double lp = log_prior[k];
                for (std::size_t j = 0; j < X.cols; ++j) {
                    const double v = vars.at(k, j);
                    const double diff = X.at(i, j) - means.at(k, j);
                    lp += -0.5 * std::log(kTwoPi * v) - diff * diff / (2.0 * v);
                }
                logp[k] = lp;
                mx = std::max(mx, lp);
            }
            double sum = 0.0;
            for (std::size_t k = 0; k < c; ++k) {
                const double e = logp[k] == -kInf ? 0.0 : std::exp(logp[k] - mx);
                out.at(i, k) = e;
                sum += e;
            }
            for (std::size_t k = 0; k < c; ++k) out.at(i, k) /= sum;
        });
        return out;
    }
};

SLModel fit_naive_bayes(const SLDataset& data) {
    const auto c = static_cast<std::size_t>(data.class_count);
    const std::size_t d = data.features.cols;
    const std::size_t n = data.targets.size();

    auto impl = std::make_shared<NaiveBayesImpl>();
    impl->class_count = data.class_count;
    impl->feature_count = d;
    impl->log_prior.assign(c, -kInf);
    impl->means = Matrix(c, d);
    impl->vars = Matrix(c, d, 1.0);

    std::vector<double> counts(c, 0.0);
    for (int t : data.targets) counts[static_cast<std::size_t>(t)] += 1.0;
    for (std::size_t k = 0; k < c; ++k)
        if (counts[k] > 0.0) impl->log_prior[k] = std::log(counts[k] / static_cast<double>(n));

    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(data.targets[i]);
        for (std::size_t j = 0; j < d; ++j) impl->means.at(k, j) += data.features.at(i, j);
    }
    for (std::size_t k = 0; k < c; ++k)
        if (counts[k] > 0.0)
            for (std::size_t j = 0; j < d; ++j) impl->means.at(k, j) /= counts[k];
    for (std::size_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(data.targets[i]);
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = data.features.at(i, j) - impl->means.at(k, j);
            impl->vars.at(k, j) += diff * diff;  // starts at 1.0; corrected below
        }
    }
    for (std::size_t k = 0; k < c; ++k) {
        for (std::size_t j = 0; j < d; ++j) {
            if (counts[k] > 0.0) {
                const double accum = impl->vars.at(k, j) - 1.0;
                impl->vars.at(k, j) = std::max(accum / counts[k], 1e-9);
            }
        }
    }
    return SLModel(impl);
}

// ---------------------------------------------------------------------------
// Multinomial logistic regression (full-batch gradient descent)

struct LogisticImpl final : SLModel::Impl {
    std::vector<double> weights;  // (d+1) x c, bias last row
    std::vector<double> mean, stddev;

    Matrix scores(const Matrix& X) const override {
        const auto c = static_cast<std::size_t>(class_count);
        Matrix out(X.rows, c);
        if (class_count == 1) {
            for (std::size_t i = 0; i < X.rows; ++i) out.at(i, 0) = 1.0;
            return out;
        }
        const std::size_t d = feature_count;
        parallel_for(X.rows, [&](std::size_t i) {
            std::vector<double> z(c, 0.0);
            double mx = -kInf;
            for (std::size_t k = 0; k < c; ++k) {
                double s = weights[d * c + k];  // bias
                for (std::size_t j = 0; j < d; ++j) {
                    const double x = (X.at(i, j) - mean[j]) / stddev[j];
                    s += weights[j * c + k] * x;
                }
                z[k] = s;
                mx = std::max(mx, s);
            }
            double sum = 0.0;
            for (std::size_t k = 0; k < c; ++k) {
                z[k] = std::exp(z[k] - mx);
                sum += z[k];
            }
            for (std::size_t k = 0; k < c; ++k) out.at(i, k) = z[k] / sum;
        });
        return out;
    }
};

}  // namespace

double logistic_loss_grad(const std::vector<double>& weights, const Matrix& X, const std::vector<int>& targets,
                          int class_count, double l2, std::vector<double>* grad_out) {
    const auto c = static_cast<std::size_t>(class_count);
    const std::size_t d = X.cols;
    const std::size_t n = X.rows;

    Matrix probs(n, c);
    parallel_for(n, [&](std::size_t i) {
        double mx = -kInf;
        for (std::size_t k = 0; k < c; ++k) {
            double s = weights[d * c + k];
            for (std::size_t j = 0; j < d; ++j) s += weights[j * c + k] * X.at(i, j);
            probs.at(i, k) = s;
            mx = std::max(mx, s);
        }
        double sum = 0.0;
        for (std::size_t k = 0; k < c; ++k) {
            probs.at(i, k) = std::exp(probs.at(i, k) - mx);
            sum += probs.at(i, k);
        }
        for (std::size_t k = 0; k < c; ++k) probs.at(i, k) /= sum;
    });

    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        loss -= std::log(std::max(probs.at(i, static_cast<std::size_t>(targets[i])), 1e-300));
    loss /= static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < c; ++k) loss += 0.5 * l2 * weights[j * c + k] * weights[j * c + k];

    if (grad_out) {
        grad_out->assign((d + 1) * c, 0.0);
        std::vector<double>& g = *grad_out;
        parallel_for((d + 1) * c, [&](std::size_t e) {
            const std::size_t j = e / c;
            const std::size_t k = e % c;
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double err = probs.at(i, k) - (static_cast<std::size_t>(targets[i]) == k ? 1.0 : 0.0);
                s += (j < d ? X.at(i, j) : 1.0) * err;
            }
            s /= static_cast<double>(n);
            if (j < d) s += l2 * weights[e];
            g[e] = s;
        });
    }
    return loss;
}

namespace {

SLModel fit_logistic(const SLDataset& data, const SLHyper& hp) {
    const auto c = static_cast<std::size_t>(data.class_count);
    const std::size_t d = data.features.cols;
    const std::size_t n = data.targets.size();

    auto impl = std::make_shared<LogisticImpl>();
    impl->class_count = data.class_count;
    impl->feature_count = d;
    impl->mean.assign(d, 0.0);
    impl->stddev.assign(d, 1.0);
    impl->weights.assign((d + 1) * c, 0.0);
    if (data.class_count == 1) return SLModel(impl);

    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data.features.at(i, j);
        impl->mean[j] = s / static_cast<double>(n);
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double diff = data.features.at(i, j) - impl->mean[j];
            v += diff * diff;
        }
        const double sd = std::sqrt(v / static_cast<double>(n));
        impl->stddev[j] = sd > 0.0 ? sd : 1.0;
    }

    Matrix Z(n, d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) Z.at(i, j) = (data.features.at(i, j) - impl->mean[j]) / impl->stddev[j];

    // the epoch loop runs serially with preallocated buffers; ensembles
    // parallelize one level up, over whole member fits
    std::vector<double>& w = impl->weights;
    std::vector<double> probs(c), grad((d + 1) * c);
    for (int epoch = 0; epoch < hp.logistic_epochs; ++epoch) {
        std::fill(grad.begin(), grad.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double* x = Z.row(i);
            double mx = -kInf;
            for (std::size_t k = 0; k < c; ++k) {
                double s = w[d * c + k];
                for (std::size_t j = 0; j < d; ++j) s += w[j * c + k] * x[j];
                probs[k] = s;
                mx = std::max(mx, s);
            }
            double sum = 0.0;
            for (std::size_t k = 0; k < c; ++k) {
                probs[k] = std::exp(probs[k] - mx);
                sum += probs[k];
            }
            const auto target = static_cast<std::size_t>(data.targets[i]);
            for (std::size_t k = 0; k < c; ++k) {
                const double err = probs[k] / sum - (k == target ? 1.0 : 0.0);
                for (std::size_t j = 0; j < d; ++j) grad[j * c + k] += x[j] * err;
                grad[d * c + k] += err;
            }
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = 0; k < c; ++k)
                w[j * c + k] -= hp.logistic_rate * (grad[j * c + k] * inv_n + hp.logistic_l2 * w[j * c + k]);
        for (std::size_t k = 0; k < c; ++k) w[d * c + k] -= hp.logistic_rate * grad[d * c + k] * inv_n;
    }
    return SLModel(impl);
}

// ---------------------------------------------------------------------------
// k-nearest neighbours

struct KnnImpl final : SLModel::Impl {
    Matrix train;
    std::vector<int> targets;
    int k = 5;

    Matrix scores(const Matrix& X) const override {
        const auto c = static_cast<std::size_t>(class_count);
        const std::size_t n = train.rows;
        const std::size_t keff = std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(k), n));
        Matrix out(X.rows, c);
        parallel_for(X.rows, [&](std::size_t q) {
            std::vector<std::pair<double, int>> dist(n);
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < train.cols; ++j) {
                    const double diff = X.at(q, j) - train.at(i, j);
                    s += diff * diff;
                }
                dist[i] = {s, static_cast<int>(i)};
            }
            std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(keff), dist.end());
            for (std::size_t t = 0; t < keff; ++t)
                out.at(q, static_cast<std::size_t>(targets[static_cast<std::size_t>(dist[t].second)])) +=
                    1.0 / static_cast<double>(keff);
        });
        return out;
    }
};

SLModel fit_knn(const SLDataset& data, int k) {
    auto impl = std::make_shared<KnnImpl>();
    impl->class_count = data.class_count;
    impl->feature_count = data.features.cols;
    impl->train = data.features;
    impl->targets = data.targets;
    impl->k = k;
    return SLModel(impl);
}

// ---------------------------------------------------------------------------
// Ensembles

struct AveragingImpl final : SLModel::Impl {
    std::vector<SLModel> members;
    std::vector<std::vector<int>> feature_sets;  // empty: members see all features

    Matrix scores(const Matrix& X) const override {
        Matrix out(X.rows, static_cast<std::size_t>(class_count));
        for (std::size_t mi = 0; mi < members.size(); ++mi) {
            const Matrix ms = feature_sets.empty() ? members[mi].class_scores(X)
                                                   : members[mi].class_scores(X.select_cols(feature_sets[mi]));
            for (std::size_t e = 0; e < out.data.size(); ++e) out.data[e] += ms.data[e];
        }
        for (double& v : out.data) v /= static_cast<double>(members.size());
        return out;
    }
};

struct BoostImpl final : SLModel::Impl {
    std::vector<SLModel> members;
    std::vector<double> alphas;

    Matrix scores(const Matrix& X) const override {
        const auto c = static_cast<std::size_t>(class_count);
        Matrix out(X.rows, c);
        double total = 0.0;
        for (double a : alphas) total += a;
        for (std::size_t mi = 0; mi < members.size(); ++mi) {
            const std::vector<int> pred = members[mi].predict(X);
            for (std::size_t i = 0; i < X.rows; ++i)
                out.at(i, static_cast<std::size_t>(pred[i])) += alphas[mi] / total;
        }
        return out;
    }
};

SLDataset subset_rows(const SLDataset& data, const std::vector<int>& idx) {
    SLDataset out;
    out.features = data.features.select_rows(idx);
    out.targets.reserve(idx.size());
    for (int i : idx) out.targets.push_back(data.targets[static_cast<std::size_t>(i)]);
    out.class_count = data.class_count;
    return out;
}

SLModel fit_bagging(const SLSpec& spec, const SLDataset& data, std::uint64_t seed) {
    auto impl = std::make_shared<AveragingImpl>();
    impl->class_count = data.class_count;
    impl->feature_count = data.features.cols;
    const auto members = static_cast<std::size_t>(spec.hyper.ensemble_members);
    impl->members.resize(members);
    std::vector<SLModel>& out = impl->members;
    parallel_for(members, [&](std::size_t i) {
        const std::uint64_t mseed = seed + i;
        if (spec.hyper.bagging_bootstrap) {
            out[i] = fit_single_label(spec.base[0], subset_rows(data, bootstrap_indices(data.targets.size(), mseed)), mseed);
        } else {
            out[i] = fit_single_label(spec.base[0], data, mseed);
        }
    });
    return SLModel(impl);
}

SLModel fit_random_subspace(const SLSpec& spec, const SLDataset& data, std::uint64_t seed) {
    auto impl = std::make_shared<AveragingImpl>();
    impl->class_count = data.class_count;
    impl->feature_count = data.features.cols;
    const auto members = static_cast<std::size_t>(spec.hyper.ensemble_members);
    const std::size_t d = data.features.cols;
    const auto dsub = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(spec.hyper.subspace_fraction * static_cast<double>(d))));
    impl->members.resize(members);
    impl->feature_sets.resize(members);
    parallel_for(members, [&](std::size_t i) {
        const std::uint64_t mseed = seed + i;
        Pcg32 rng = substream(mseed, "subspace");
        impl->feature_sets[i] = sample_without_replacement(d, dsub, rng);
        SLDataset sub;
        sub.features = data.features.select_cols(impl->feature_sets[i]);
        sub.targets = data.targets;
        sub.class_count = data.class_count;
        impl->members[i] = fit_single_label(spec.base[0], sub, mseed);
    });
    return SLModel(impl);
}

SLModel fit_adaboost(const SLSpec& spec, const SLDataset& data, std::uint64_t seed) {
    const std::size_t n = data.targets.size();
    const int c = data.class_count;
    auto impl = std::make_shared<BoostImpl>();
    impl->class_count = c;
    impl->feature_count = data.features.cols;

    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    const double chance = 1.0 - 1.0 / std::max(2.0, static_cast<double>(c));

    for (int round = 0; round < spec.hyper.boost_rounds; ++round) {
        // weighted resampling: n draws from the cumulative weight distribution
        std::vector<double> cum(n);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += w[i];
            cum[i] = acc;
        }
        Pcg32 rng = substream(seed, "boost-resample", static_cast<std::uint64_t>(round));
        std::vector<int> idx(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = rng.next_double() * acc;
            idx[i] = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
            if (idx[i] >= static_cast<int>(n)) idx[i] = static_cast<int>(n) - 1;
        }
        SLModel member = fit_single_label(spec.base[0], subset_rows(data, idx), seed + static_cast<std::uint64_t>(round));

        const std::vector<int> pred = member.predict(data.features);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (pred[i] != data.targets[i]) err += w[i];

        if (err >= chance) {
            if (impl->members.empty()) {
                impl->members.push_back(fit_single_label(spec.base[0], data, seed));
                impl->alphas.push_back(1.0);
            }
            break;
        }
        if (err <= 0.0) {
            constexpr double kEps = 1e-10;
            impl->members.push_back(std::move(member));
            impl->alphas.push_back(std::log((1.0 - kEps) / kEps) + std::log(std::max(1.0, static_cast<double>(c - 1))));
            break;
        }
        const double alpha = std::log((1.0 - err) / err) + std::log(std::max(1.0, static_cast<double>(c - 1)));
        impl->members.push_back(std::move(member));
        impl->alphas.push_back(alpha);

        double wsum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (pred[i] != data.targets[i]) w[i] *= std::exp(alpha);
            wsum += w[i];
        }
        for (double& x : w) x /= wsum;
    }
    if (impl->members.empty()) {
        impl->members.push_back(fit_single_label(spec.base[0], data, seed));
        impl->alphas.push_back(1.0);
    }
    return SLModel(impl);
}

}  // namespace

const char* sl_algo_name(SLAlgo a) {
    switch (a) {
        case SLAlgo::ZeroR: return "ZeroR";
        case SLAlgo::DecisionStump: return "DecisionStump";
        case SLAlgo::DecisionTree: return "DecisionTree";
        case SLAlgo::NaiveBayes: return "NaiveBayes";
        case SLAlgo::Logistic: return "Logistic";
        case SLAlgo::KNN: return "KNN";
        case SLAlgo::Bagging: return "Bagging";
        case SLAlgo::AdaBoostM1: return "AdaBoostM1";
        case SLAlgo::RandomSubspace: return "RandomSubspace";
    }
    return "?";
}

std::optional<SLAlgo> sl_algo_from_name(std::string_view name) {
    for (SLAlgo a : {SLAlgo::ZeroR, SLAlgo::DecisionStump, SLAlgo::DecisionTree, SLAlgo::NaiveBayes, SLAlgo::Logistic,
                     SLAlgo::KNN, SLAlgo::Bagging, SLAlgo::AdaBoostM1, SLAlgo::RandomSubspace})
        if (name == sl_algo_name(a)) return a;
    return std::nullopt;
}

bool sl_algo_is_meta(SLAlgo a) {
    return a == SLAlgo::Bagging || a == SLAlgo::AdaBoostM1 || a == SLAlgo::RandomSubspace;
}

void validate_spec(const SLSpec& spec) {
    if (sl_algo_is_meta(spec.algo)) {
        if (spec.base.size() != 1)
            throw UnsupportedSpec(std::string(sl_algo_name(spec.algo)) + " needs exactly one base learner");
        const SLSpec& b = spec.base[0];
        if (sl_algo_is_meta(b.algo))
            throw UnsupportedSpec(std::string(sl_algo_name(spec.algo)) + " cannot wrap meta learner " + sl_algo_name(b.algo));
        validate_spec(b);
    } else if (!spec.base.empty()) {
        throw UnsupportedSpec(std::string(sl_algo_name(spec.algo)) + " takes no base learner");
    }
}

Matrix SLModel::class_scores(const Matrix& X) const {
    check_features(impl_->feature_count, X.cols);
    return impl_->scores(X);
}

std::vector<int> SLModel::predict(const Matrix& X) const {
    const Matrix s = class_scores(X);
    std::vector<int> out(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) out[i] = argmax_row(s.row(i), impl_->class_count);
    return out;
}

SLModel fit_single_label(const SLSpec& spec, const SLDataset& data, std::uint64_t seed) {
    validate_spec(spec);
    if (data.targets.empty() || data.class_count < 1) throw UnsupportedSpec("empty dataset");
    switch (spec.algo) {
        case SLAlgo::ZeroR: return fit_zero_r(data);
        case SLAlgo::DecisionStump: return fit_tree(data, 1, 1);
        case SLAlgo::DecisionTree: return fit_tree(data, spec.hyper.tree_max_depth, spec.hyper.tree_min_leaf);
        case SLAlgo::NaiveBayes: return fit_naive_bayes(data);
        case SLAlgo::Logistic: return fit_logistic(data, spec.hyper);
        case SLAlgo::KNN: return fit_knn(data, spec.hyper.knn_k);
        case SLAlgo::Bagging: return fit_bagging(spec, data, seed);
        case SLAlgo::AdaBoostM1: return fit_adaboost(spec, data, seed);
        case SLAlgo::RandomSubspace: return fit_random_subspace(spec, data, seed);
    }
    throw UnsupportedSpec("unknown algorithm");
}

std::vector<int> predict_single_label(const SLModel& model, const Matrix& X) { return model.predict(X); }

Matrix predict_class_scores(const SLModel& model, const Matrix& X) { return model.class_scores(X); }

std::vector<int> bootstrap_indices(std::size_t n, std::uint64_t seed) {
    Pcg32 rng = substream(seed, "bootstrap");
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<int>(rng.bounded(static_cast<std::uint32_t>(n)));
    return out;
}

}  // namespace automlc
