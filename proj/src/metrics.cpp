#include "automlc/metrics/metrics.hpp"

#include <string>

namespace automlc {

namespace {

void check_shapes(std::size_t tr, std::size_t tc, std::size_t pr, std::size_t pc) {
    if (tr != pr || tc != pc)
        throw ShapeMismatch("truth is " + std::to_string(tr) + "x" + std::to_string(tc) + ", prediction is " +
                            std::to_string(pr) + "x" + std::to_string(pc));
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

MetricReport subset_zero_one(const BinaryMatrix& truth, const BinaryMatrix& pred) {
    check_shapes(truth.rows, truth.cols, pred.rows, pred.cols);
    MetricReport rep;
    rep.per_instance.resize(truth.rows);
    for (std::size_t i = 0; i < truth.rows; ++i) {
        bool diff = false;
        for (std::size_t j = 0; j < truth.cols; ++j)
            if (truth.at(i, j) != pred.at(i, j)) {
                diff = true;
                break;
            }
        rep.per_instance[i] = diff ? 1.0 : 0.0;
    }
    rep.mean = mean_of(rep.per_instance);
    return rep;
}

MetricReport hamming(const BinaryMatrix& truth, const BinaryMatrix& pred) {
    check_shapes(truth.rows, truth.cols, pred.rows, pred.cols);
    MetricReport rep;
    rep.per_instance.resize(truth.rows);
    for (std::size_t i = 0; i < truth.rows; ++i) {
        std::size_t wrong = 0;
        for (std::size_t j = 0; j < truth.cols; ++j) wrong += truth.at(i, j) != pred.at(i, j) ? 1 : 0;
        rep.per_instance[i] = static_cast<double>(wrong) / static_cast<double>(truth.cols);
    }
    rep.mean = mean_of(rep.per_instance);
    return rep;
}

MetricReport instance_f_measure(const BinaryMatrix& truth, const BinaryMatrix& pred) {
    check_shapes(truth.rows, truth.cols, pred.rows, pred.cols);
    MetricReport rep;
    rep.per_instance.resize(truth.rows);
    for (std::size_t i = 0; i < truth.rows; ++i) {
        std::size_t inter = 0, ty = 0, py = 0;
        for (std::size_t j = 0; j < truth.cols; ++j) {
            inter += (truth.at(i, j) & pred.at(i, j)) ? 1 : 0;
            ty += truth.at(i, j);
            py += pred.at(i, j);
        }
        rep.per_instance[i] =
            (ty + py == 0) ? 1.0 : 2.0 * static_cast<double>(inter) / static_cast<double>(ty + py);
    }
    rep.mean = mean_of(rep.per_instance);
    return rep;
}

RankLossReport rank_loss(const BinaryMatrix& truth, const Matrix& scores) {
    check_shapes(truth.rows, truth.cols, scores.rows, scores.cols);
    RankLossReport rep;
    rep.per_instance.resize(truth.rows);
    rep.per_instance_raw.resize(truth.rows);
    rep.degenerate.resize(truth.rows, 0);
    for (std::size_t i = 0; i < truth.rows; ++i) {
        double bad = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < truth.cols; ++a) {
            if (!truth.at(i, a)) continue;
            for (std::size_t b = 0; b < truth.cols; ++b) {
                if (truth.at(i, b)) continue;
                ++pairs;
                const double sa = scores.at(i, a), sb = scores.at(i, b);
                if (sa < sb)
                    bad += 1.0;
                else if (sa == sb)
                    bad += 0.5;
            }
        }
        rep.per_instance_raw[i] = bad;
        if (pairs == 0) {
            rep.per_instance[i] = 0.0;
            rep.degenerate[i] = 1;
        } else {
            rep.per_instance[i] = bad / static_cast<double>(pairs);
        }
    }
    rep.mean = mean_of(rep.per_instance);
    rep.raw_mean = mean_of(rep.per_instance_raw);
    return rep;
}

}  // namespace automlc
