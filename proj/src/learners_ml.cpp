#include "automlc/learners/ml.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "automlc/core/parallel.hpp"
#include "automlc/core/rng.hpp"

namespace automlc {

namespace {

void check_features(std::size_t expected, std::size_t got) {
    if (expected != got)
        throw ShapeMismatch("model expects " + std::to_string(expected) + " features, got " + std::to_string(got));
}

BinaryMatrix threshold_scores(const Matrix& scores) {
    BinaryMatrix out(scores.rows, scores.cols);
    for (std::size_t e = 0; e < scores.data.size(); ++e) out.data[e] = scores.data[e] >= 0.5 ? 1 : 0;
    return out;
}

SLDataset binary_dataset(const Matrix& X, const BinaryMatrix& labels, std::size_t column) {
    SLDataset d;
    d.features = X;
    d.targets.reserve(labels.rows);
    for (std::size_t i = 0; i < labels.rows; ++i) d.targets.push_back(labels.at(i, column));
    d.class_count = 2;
    return d;
}

// ---------------------------------------------------------------------------
// Binary relevance

struct BRImpl final : MLModel::Impl {
    std::vector<SLModel> members;  // one per label

    MLPrediction predict(const Matrix& X) const override {
        MLPrediction out;
        out.scores = Matrix(X.rows, label_count);
        for (std::size_t j = 0; j < label_count; ++j) {
            const Matrix s = members[j].class_scores(X);
            for (std::size_t i = 0; i < X.rows; ++i) out.scores.at(i, j) = s.at(i, 1);
        }
        out.labels = threshold_scores(out.scores);
        return out;
    }
};

MLModel fit_br(const MLSpec& spec, const MLDataset& data, std::uint64_t seed) {
    auto impl = std::make_shared<BRImpl>();
    impl->label_count = data.labels.cols;
    impl->feature_count = data.features.cols;
    impl->members.resize(data.labels.cols);
    parallel_for(data.labels.cols, [&](std::size_t j) {
        impl->members[j] = fit_single_label(spec.sl_child[0], binary_dataset(data.features, data.labels, j), seed + j);
    });
    return MLModel(impl);
}

// ---------------------------------------------------------------------------
// Classifier chains

struct CCImpl final : MLModel::Impl {
    std::vector<int> order;        // chain position -> label index
    std::vector<SLModel> members;  // fitted along the chain

    MLPrediction predict(const Matrix& X) const override {
        MLPrediction out;
        out.scores = Matrix(X.rows, label_count);
        out.labels = BinaryMatrix(X.rows, label_count);
        parallel_for(X.rows, [&](std::size_t i) {
            std::vector<double> aug(feature_count + label_count);
            for (std::size_t j = 0; j < feature_count; ++j) aug[j] = X.at(i, j);
            Matrix row(1, feature_count);
            for (std::size_t t = 0; t < order.size(); ++t) {
                row.cols = feature_count + t;
                row.data.assign(aug.begin(), aug.begin() + static_cast<std::ptrdiff_t>(feature_count + t));
                const Matrix s = members[t].class_scores(row);
                const double score1 = s.at(0, 1);
                const auto label = static_cast<std::size_t>(order[t]);
                out.scores.at(i, label) = score1;
                const std::uint8_t bit = score1 >= 0.5 ? 1 : 0;
                out.labels.at(i, label) = bit;
                aug[feature_count + t] = static_cast<double>(bit);
            }
        });
        return out;
    }
};

MLModel fit_cc(const MLSpec& spec, const MLDataset& data, std::uint64_t seed) {
    const std::size_t m = data.labels.cols;
    const std::size_t n = data.features.rows;
    auto impl = std::make_shared<CCImpl>();
    impl->label_count = m;
    impl->feature_count = data.features.cols;
    Pcg32 rng = substream(seed, "cc-order");
    impl->order = shuffled_indices(m, rng);
    impl->members.resize(m);
    // training consumes the true preceding labels, so member fits are independent
    parallel_for(m, [&](std::size_t t) {
        Matrix aug(n, data.features.cols + t);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < data.features.cols; ++j) aug.at(i, j) = data.features.at(i, j);
            for (std::size_t u = 0; u < t; ++u)
                aug.at(i, data.features.cols + u) = static_cast<double>(data.labels.at(i, static_cast<std::size_t>(impl->order[u])));
        }
        SLDataset d;
        d.features = std::move(aug);
        d.targets.reserve(n);
        for (std::size_t i = 0; i < n; ++i) d.targets.push_back(data.labels.at(i, static_cast<std::size_t>(impl->order[t])));
        d.class_count = 2;
        impl->members[t] = fit_single_label(spec.sl_child[0], d, seed + t);
    });
    return MLModel(impl);
}

// ---------------------------------------------------------------------------
// Label powerset (shared by LC and PS)

struct LCImpl final : MLModel::Impl {
    SLModel model;
    LPCodebook codebook;

    MLPrediction predict(const Matrix& X) const override {
        const Matrix cs = model.class_scores(X);
        MLPrediction out;
        out.scores = Matrix(X.rows, label_count);
        out.labels = BinaryMatrix(X.rows, label_count);
        parallel_for(X.rows, [&](std::size_t i) {
            int best = 0;
            for (int k = 1; k < codebook.size(); ++k)
                if (cs.at(i, static_cast<std::size_t>(k)) > cs.at(i, static_cast<std::size_t>(best))) best = k;
            const std::vector<std::uint8_t>& pat = codebook.patterns[static_cast<std::size_t>(best)];
            for (std::size_t j = 0; j < label_count; ++j) {
                out.labels.at(i, j) = pat[j];
                double marginal = 0.0;
                for (int k = 0; k < codebook.size(); ++k)
                    marginal += cs.at(i, static_cast<std::size_t>(k)) * codebook.patterns[static_cast<std::size_t>(k)][j];
                out.scores.at(i, j) = marginal;
            }
        });
        return out;
    }
};

MLModel fit_lc_on(const SLSpec& sl, const Matrix& X, const BinaryMatrix& labels, std::uint64_t seed) {
    auto impl = std::make_shared<LCImpl>();
    impl->label_count = labels.cols;
    impl->feature_count = X.cols;
    auto [ids, codebook] = label_powerset_encode(labels);
    impl->codebook = std::move(codebook);
    SLDataset d;
    d.features = X;
    d.targets = std::move(ids);
    d.class_count = impl->codebook.size();
    impl->model = fit_single_label(sl, d, seed);
    return MLModel(impl);
}

MLModel fit_ps(const MLSpec& spec, const MLDataset& data, std::uint64_t seed) {
    const std::vector<PrunedInstance> pruned = prune_label_sets(data.labels, spec.hyper.ps_p, spec.hyper.ps_b);
    if (pruned.empty())  // nothing survived pruning; train plain LC instead
        return fit_lc_on(spec.sl_child[0], data.features, data.labels, seed);
    std::vector<int> rows;
    rows.reserve(pruned.size());
    BinaryMatrix labels(pruned.size(), data.labels.cols);
    for (std::size_t i = 0; i < pruned.size(); ++i) {
        rows.push_back(pruned[i].row);
        for (std::size_t j = 0; j < data.labels.cols; ++j) labels.at(i, j) = pruned[i].labels[j];
    }
    return fit_lc_on(spec.sl_child[0], data.features.select_rows(rows), labels, seed);
}

// ---------------------------------------------------------------------------
// RAkEL

struct RakelImpl final : MLModel::Impl {
    std::vector<std::vector<int>> subsets;
    std::vector<MLModel> members;  // LC over each label subset

    MLPrediction predict(const Matrix& X) const override {
        MLPrediction out;
        out.scores = Matrix(X.rows, label_count);
        Matrix covers(X.rows, label_count);
        for (std::size_t s = 0; s < subsets.size(); ++s) {
            const MLPrediction mp = members[s].predict(X);
            for (std::size_t i = 0; i < X.rows; ++i)
                for (std::size_t t = 0; t < subsets[s].size(); ++t) {
                    const auto j = static_cast<std::size_t>(subsets[s][t]);
                    out.scores.at(i, j) += mp.labels.at(i, t);
                    covers.at(i, j) += 1.0;
                }
        }
        for (std::size_t e = 0; e < out.scores.data.size(); ++e)
            out.scores.data[e] = covers.data[e] > 0.0 ? out.scores.data[e] / covers.data[e] : 0.0;
        out.labels = threshold_scores(out.scores);
        return out;
    }
};

MLModel fit_rakel(const MLSpec& spec, const MLDataset& data, std::uint64_t seed) {
    const auto m = static_cast<int>(data.labels.cols);
    const int k = std::min(spec.hyper.rakel_k, m);
    const int count = spec.hyper.rakel_count > 0
                          ? spec.hyper.rakel_count
                          : static_cast<int>(std::ceil(2.0 * static_cast<double>(m) / static_cast<double>(k)));
    auto impl = std::make_shared<RakelImpl>();
    impl->label_count = data.labels.cols;
    impl->feature_count = data.features.cols;
    impl->subsets = draw_label_subsets(m, k, count, seed);
    impl->members.resize(impl->subsets.size());
    parallel_for(impl->subsets.size(), [&](std::size_t s) {
        impl->members[s] =
            fit_lc_on(spec.sl_child[0], data.features, data.labels.select_cols(impl->subsets[s]), seed + s);
    });
    return MLModel(impl);
}

// ---------------------------------------------------------------------------
// Majority label set

struct MajorityImpl final : MLModel::Impl {
    std::vector<std::uint8_t> modal;

    MLPrediction predict(const Matrix& X) const override {
        MLPrediction out;
        out.labels = BinaryMatrix(X.rows, label_count);
        out.scores = Matrix(X.rows, label_count);
        for (std::size_t i = 0; i < X.rows; ++i)
            for (std::size_t j = 0; j < label_count; ++j) {
                out.labels.at(i, j) = modal[j];
                out.scores.at(i, j) = modal[j];
            }
        return out;
    }
};

MLModel fit_majority(const MLDataset& data) {
    auto impl = std::make_shared<MajorityImpl>();
    impl->label_count = data.labels.cols;
    impl->feature_count = data.features.cols;
    std::map<std::vector<std::uint8_t>, std::size_t> counts;
    for (std::size_t i = 0; i < data.labels.rows; ++i) ++counts[data.labels.row_vec(i)];
    std::size_t best = 0;
    for (const auto& [pattern, cnt] : counts) {  // lexicographic iteration; ties keep the smaller pattern
        if (cnt > best) {
            best = cnt;
            impl->modal = pattern;
        }
    }
    return MLModel(impl);
}

// ---------------------------------------------------------------------------
// Multi-label meta wrappers: member models fitted on row/feature resamples,
// scores averaged.

struct MLEnsembleImpl final : MLModel::Impl {
    std::vector<MLModel> members;
    std::vector<std::vector<int>> feature_sets;  // empty: members see all features

    MLPrediction predict(const Matrix& X) const override {
        MLPrediction out;
        out.scores = Matrix(X.rows, label_count);
        for (std::size_t mi = 0; mi < members.size(); ++mi) {
            const MLPrediction mp = feature_sets.empty() ? members[mi].predict(X)
                                                         : members[mi].predict(X.select_cols(feature_sets[mi]));
            for (std::size_t e = 0; e < out.scores.data.size(); ++e) out.scores.data[e] += mp.scores.data[e];
        }
        for (double& v : out.scores.data) v /= static_cast<double>(members.size());
        out.labels = threshold_scores(out.scores);
        return out;
    }
};

MLDataset subset_rows(const MLDataset& data, const std::vector<int>& idx) {
    return MLDataset{data.features.select_rows(idx), data.labels.select_rows(idx)};
}

MLModel fit_ml_meta(const MLSpec& spec, const MLDataset& data, std::uint64_t seed) {
    auto impl = std::make_shared<MLEnsembleImpl>();
    impl->label_count = data.labels.cols;
    impl->feature_count = data.features.cols;
    const auto members = static_cast<std::size_t>(spec.hyper.ensemble_members);
    const std::size_t n = data.features.rows;
    impl->members.resize(members);
    if (spec.algo == MLAlgo::RandomSubspaceML) impl->feature_sets.resize(members);

    parallel_for(members, [&](std::size_t i) {
        const std::uint64_t mseed = seed + i;
        switch (spec.algo) {
            case MLAlgo::BaggingML:
                impl->members[i] = fit_multi_label(spec.ml_child[0], subset_rows(data, bootstrap_indices(n, mseed)), mseed);
                break;
            case MLAlgo::EnsembleML: {
                const auto take = std::max<std::size_t>(
                    1, static_cast<std::size_t>(std::ceil(spec.hyper.subsample_fraction * static_cast<double>(n))));
                Pcg32 rng = substream(mseed, "subsample");
                std::vector<int> idx = shuffled_indices(n, rng);
                idx.resize(take);
                std::sort(idx.begin(), idx.end());
                impl->members[i] = fit_multi_label(spec.ml_child[0], subset_rows(data, idx), mseed);
                break;
            }
            case MLAlgo::RandomSubspaceML: {
                const std::size_t d = data.features.cols;
                const auto dsub = std::max<std::size_t>(
                    1, static_cast<std::size_t>(std::ceil(spec.hyper.subspace_fraction * static_cast<double>(d))));
                Pcg32 rng = substream(mseed, "subspace");
                impl->feature_sets[i] = sample_without_replacement(d, dsub, rng);
                impl->members[i] = fit_multi_label(
                    spec.ml_child[0], MLDataset{data.features.select_cols(impl->feature_sets[i]), data.labels}, mseed);
                break;
            }
            default: break;
        }
    });
    return MLModel(impl);
}

}  // namespace

const char* ml_algo_name(MLAlgo a) {
    switch (a) {
        case MLAlgo::BR: return "BR";
        case MLAlgo::CC: return "CC";
        case MLAlgo::LC: return "LC";
        case MLAlgo::PS: return "PS";
        case MLAlgo::RAkEL: return "RAkEL";
        case MLAlgo::MajorityLabelSet: return "MajorityLabelSet";
        case MLAlgo::BaggingML: return "BaggingML";
        case MLAlgo::EnsembleML: return "EnsembleML";
        case MLAlgo::RandomSubspaceML: return "RandomSubspaceML";
    }
    return "?";
}

std::optional<MLAlgo> ml_algo_from_name(std::string_view name) {
    for (MLAlgo a : {MLAlgo::BR, MLAlgo::CC, MLAlgo::LC, MLAlgo::PS, MLAlgo::RAkEL, MLAlgo::MajorityLabelSet,
                     MLAlgo::BaggingML, MLAlgo::EnsembleML, MLAlgo::RandomSubspaceML})
        if (name == ml_algo_name(a)) return a;
    return std::nullopt;
}

bool ml_algo_is_meta(MLAlgo a) {
    return a == MLAlgo::BaggingML || a == MLAlgo::EnsembleML || a == MLAlgo::RandomSubspaceML;
}

void validate_spec(const MLSpec& spec) {
    const std::string name = ml_algo_name(spec.algo);
    if (ml_algo_is_meta(spec.algo)) {
        if (spec.ml_child.size() != 1 || !spec.sl_child.empty())
            throw UnsupportedSpec(name + " needs exactly one multi-label child");
        if (ml_algo_is_meta(spec.ml_child[0].algo))
            throw UnsupportedSpec(name + " cannot wrap meta strategy " + ml_algo_name(spec.ml_child[0].algo));
        validate_spec(spec.ml_child[0]);
    } else if (spec.algo == MLAlgo::MajorityLabelSet) {
        if (!spec.ml_child.empty() || !spec.sl_child.empty())
            throw UnsupportedSpec("MajorityLabelSet takes no base learner");
    } else {
        if (spec.sl_child.size() != 1 || !spec.ml_child.empty())
            throw UnsupportedSpec(name + " needs exactly one single-label base learner");
        validate_spec(spec.sl_child[0]);
    }
}

MLPrediction MLModel::predict(const Matrix& X) const {
    check_features(impl_->feature_count, X.cols);
    return impl_->predict(X);
}

MLModel fit_multi_label(const MLSpec& spec, const MLDataset& data, std::uint64_t seed) {
    validate_spec(spec);
    if (data.features.rows == 0 || data.labels.rows != data.features.rows || data.labels.cols == 0)
        throw UnsupportedSpec("empty or inconsistent training data");
    switch (spec.algo) {
        case MLAlgo::BR: return fit_br(spec, data, seed);
        case MLAlgo::CC: return fit_cc(spec, data, seed);
        case MLAlgo::LC: return fit_lc_on(spec.sl_child[0], data.features, data.labels, seed);
        case MLAlgo::PS: return fit_ps(spec, data, seed);
        case MLAlgo::RAkEL: return fit_rakel(spec, data, seed);
        case MLAlgo::MajorityLabelSet: return fit_majority(data);
        case MLAlgo::BaggingML:
        case MLAlgo::EnsembleML:
        case MLAlgo::RandomSubspaceML: return fit_ml_meta(spec, data, seed);
    }
    throw UnsupportedSpec("unknown algorithm");
}

MLModel fit_multi_label(const MLSpec& spec, const LabeledDataset& data, std::uint64_t seed) {
    return fit_multi_label(spec, MLDataset{encode_features(data), data.labels}, seed);
}

MLPrediction predict_multi_label(const MLModel& model, const Matrix& X) { return model.predict(X); }

std::pair<std::vector<int>, LPCodebook> label_powerset_encode(const BinaryMatrix& labels) {
    LPCodebook cb;
    cb.label_count = labels.cols;
    std::vector<int> ids(labels.rows);
    for (std::size_t i = 0; i < labels.rows; ++i) {
        std::vector<std::uint8_t> pat = labels.row_vec(i);
        auto it = cb.pattern_ids.find(pat);
        if (it == cb.pattern_ids.end()) {
            const int id = cb.size();
            cb.pattern_ids.emplace(pat, id);
            cb.patterns.push_back(std::move(pat));
            ids[i] = id;
        } else {
            ids[i] = it->second;
        }
    }
    return {std::move(ids), std::move(cb)};
}

BinaryMatrix label_powerset_decode(const std::vector<int>& ids, const LPCodebook& codebook) {
    BinaryMatrix out(ids.size(), codebook.label_count);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] < 0 || ids[i] >= codebook.size())
            throw UnknownClassId("class id " + std::to_string(ids[i]) + " outside codebook of size " +
                                 std::to_string(codebook.size()));
        const std::vector<std::uint8_t>& pat = codebook.patterns[static_cast<std::size_t>(ids[i])];
        for (std::size_t j = 0; j < codebook.label_count; ++j) out.at(i, j) = pat[j];
    }
    return out;
}

std::vector<PrunedInstance> prune_label_sets(const BinaryMatrix& labels, int p, int b) {
    std::map<std::vector<std::uint8_t>, int> counts;
    for (std::size_t i = 0; i < labels.rows; ++i) ++counts[labels.row_vec(i)];

    std::vector<PrunedInstance> out;
    for (std::size_t i = 0; i < labels.rows; ++i) {
        std::vector<std::uint8_t> v = labels.row_vec(i);
        if (counts[v] >= p) {
            out.push_back({static_cast<int>(i), std::move(v)});
            continue;
        }
        // rank frequent strict sub-vectors: count desc, cardinality desc, lex asc
        struct Cand {
            int count;
            int cardinality;
            const std::vector<std::uint8_t>* pattern;
        };
        std::vector<Cand> cands;
        for (const auto& [pat, cnt] : counts) {
            if (cnt < p || pat == v) continue;
            bool subset = true;
            int card = 0;
            for (std::size_t j = 0; j < pat.size(); ++j) {
                if (pat[j] && !v[j]) {
                    subset = false;
                    break;
                }
                card += pat[j];
            }
            if (subset) cands.push_back({cnt, card, &pat});
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& c) {
            if (a.count != c.count) return a.count > c.count;
            if (a.cardinality != c.cardinality) return a.cardinality > c.cardinality;
            return *a.pattern < *c.pattern;
        });
        for (std::size_t t = 0; t < cands.size() && t < static_cast<std::size_t>(b); ++t)
            out.push_back({static_cast<int>(i), *cands[t].pattern});
    }
    return out;
}

std::vector<std::vector<int>> draw_label_subsets(int m, int k, int count, std::uint64_t seed) {
    if (k < 1 || k > m) throw InvalidK("k=" + std::to_string(k) + " outside 1.." + std::to_string(m));
    if (count < 1 || static_cast<long long>(count) * k < m)
        throw InvalidK(std::to_string(count) + " subsets of size " + std::to_string(k) + " cannot cover " +
                       std::to_string(m) + " labels");
    Pcg32 rng = substream(seed, "label-subsets");
    std::vector<std::vector<int>> subsets;
    for (int attempt = 0; attempt < 100; ++attempt) {
        subsets.clear();
        std::vector<int> covered(static_cast<std::size_t>(m), 0);
        for (int s = 0; s < count; ++s) {
            subsets.push_back(sample_without_replacement(static_cast<std::size_t>(m), static_cast<std::size_t>(k), rng));
            for (int j : subsets.back()) ++covered[static_cast<std::size_t>(j)];
        }
        if (std::find(covered.begin(), covered.end(), 0) == covered.end()) return subsets;
        if (attempt == 99) {
            // patch uncovered labels into the last subsets, replacing duplicates
            for (int label = 0; label < m; ++label) {
                if (covered[static_cast<std::size_t>(label)] > 0) continue;
                bool placed = false;
                for (auto si = subsets.rbegin(); si != subsets.rend() && !placed; ++si) {
                    for (int& entry : *si) {
                        if (covered[static_cast<std::size_t>(entry)] >= 2) {
                            --covered[static_cast<std::size_t>(entry)];
                            entry = label;
                            ++covered[static_cast<std::size_t>(label)];
                            std::sort(si->begin(), si->end());
                            placed = true;
                            break;
                        }
                    }
                }
            }
            return subsets;
        }
    }
    return subsets;
}

}  // namespace automlc
